//! Correlated Gaussian initial states and their covariance structure.

use crate::{Complex64, Error, Result};
use std::f64::consts::PI;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054571817e-34;
/// Neutron mass as used in the reference parameter set, kg.
pub const NEUTRON_MASS: f64 = 1.67e-27;

/// Physical parameters of a run, SI units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalConfig {
    pub mass: f64,
    pub hbar: f64,
    pub sigma0: f64,
    pub gamma: f64,
    /// Slit width.
    pub beta: f64,
    /// Slit separation.
    pub d: f64,
    /// Source to slit time.
    pub t: f64,
    /// Slit to screen time.
    pub tau: f64,
}

impl Default for PhysicalConfig {
    fn default() -> Self {
        Self::neutron()
    }
}

impl PhysicalConfig {
    /// Neutron with σ₀ = β = 7.8 µm, d = 100 µm, t = τ = 50 ms, γ = 0.
    pub fn neutron() -> Self {
        PhysicalConfig {
            mass: NEUTRON_MASS,
            hbar: HBAR,
            sigma0: 7.8e-6,
            gamma: 0.0,
            beta: 7.8e-6,
            d: 100e-6,
            t: 0.05,
            tau: 0.05,
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_times(mut self, t: f64, tau: f64) -> Self {
        self.t = t;
        self.tau = tau;
        self
    }

    pub fn with_d(mut self, d: f64) -> Self {
        self.d = d;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("mass", self.mass),
            ("hbar", self.hbar),
            ("sigma0", self.sigma0),
            ("beta", self.beta),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(name, format!("must be finite and > 0, got {v:e}")));
            }
        }
        let nonneg = [("d", self.d), ("t", self.t), ("tau", self.tau)];
        for (name, v) in nonneg {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::config(name, format!("must be finite and >= 0, got {v:e}")));
            }
        }
        if !self.gamma.is_finite() {
            return Err(Error::config("gamma", "must be finite"));
        }
        Ok(())
    }

    /// τ₀ = m σ₀² / ħ.
    pub fn tau0(&self) -> f64 {
        self.mass * self.sigma0 * self.sigma0 / self.hbar
    }
}

/// Closed-form Gaussian packet
/// `norm · exp[-(x-c)²/(2w²) + i·chirp·(x-c)²/2 + i·tilt·x + i·phase]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianState {
    pub norm: Complex64,
    pub center: f64,
    pub width: f64,
    pub chirp: f64,
    pub tilt: f64,
    pub global_phase: f64,
}

impl GaussianState {
    /// Unit-norm packet with real positive amplitude prefactor.
    pub fn normalized(center: f64, width: f64, chirp: f64, tilt: f64, global_phase: f64) -> Self {
        GaussianState {
            norm: Complex64::new((width * PI.sqrt()).powf(-0.5), 0.0),
            center,
            width,
            chirp,
            tilt,
            global_phase,
        }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let u = x - self.center;
        let re = -u * u / (2.0 * self.width * self.width);
        let im = 0.5 * self.chirp * u * u + self.tilt * x + self.global_phase;
        self.norm * Complex64::from_polar(re.exp(), im)
    }

    /// Same packet multiplied by `e^{iα}`.
    pub fn rotated(mut self, alpha: f64) -> Self {
        self.global_phase += alpha;
        self
    }
}

pub fn eval_state(s: &GaussianState, x: f64) -> Complex64 {
    s.eval(x)
}

/// ψ₀(x) = (σ₀√π)^{-1/2} exp[-(1 - iγ) x² / (2σ₀²)].
pub fn make_initial_state(cfg: &PhysicalConfig) -> Result<GaussianState> {
    cfg.validate()?;
    let s2 = cfg.sigma0 * cfg.sigma0;
    Ok(GaussianState::normalized(0.0, cfg.sigma0, cfg.gamma / s2, 0.0, 0.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CovarianceReport {
    pub sigma_xx: f64,
    pub sigma_pp: f64,
    pub sigma_xp: f64,
    pub corr_r: f64,
}

pub fn covariance(cfg: &PhysicalConfig) -> CovarianceReport {
    let g = cfg.gamma;
    let sigma_xx = cfg.sigma0 / 2f64.sqrt();
    let sigma_pp = (1.0 + g * g).sqrt() * cfg.hbar / (2f64.sqrt() * cfg.sigma0);
    let sigma_xp = cfg.hbar * g / 2.0;
    CovarianceReport {
        sigma_xx,
        sigma_pp,
        sigma_xp,
        corr_r: sigma_xp / (sigma_xx * sigma_pp),
    }
}

/// Variances of the rotated quadratures X₁ = x cos θ + p sin θ and
/// X₂ = -x sin θ + p cos θ in units where ⟨Δx²⟩ = 1/2 for γ = 0.
pub fn quadrature_variances(cfg: &PhysicalConfig, theta_rot: f64) -> (f64, f64) {
    let g = cfg.gamma;
    let (s, c) = theta_rot.sin_cos();
    let s2 = (2.0 * theta_rot).sin();
    (
        0.5 * (1.0 + g * s2 + g * g * s * s),
        0.5 * (1.0 - g * s2 + g * g * c * c),
    )
}

/// Inverse of `corr_r = γ/√(1+γ²)`.
pub fn gamma_from_correlation(r: f64) -> Result<f64> {
    if !(r > -1.0 && r < 1.0) {
        return Err(Error::config("corr_r", format!("must lie in (-1, 1), got {r}")));
    }
    Ok(r / (1.0 - r * r).sqrt())
}
