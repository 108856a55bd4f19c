//! Free evolution, Gaussian double-slit evolution and the screen superposition.

use crate::states::{GaussianState, PhysicalConfig};
use crate::{Complex64, Error, Result};
use std::f64::consts::PI;

/// Widths below this are treated as a focus singularity.
pub const MIN_WIDTH: f64 = 1e-12;

/// Parameters of ψ₀ after free evolution for time t.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FreeEvolution {
    /// Beam width b(t).
    pub b: f64,
    /// Quadratic phase coefficient m/(ħ r), 1/m².
    pub chirp: f64,
    /// Gouy phase μ(t).
    pub mu: f64,
    pub tau0: f64,
}

impl FreeEvolution {
    /// Radius parameter r in seconds; infinite when the chirp vanishes.
    pub fn r(&self, cfg: &PhysicalConfig) -> f64 {
        if self.chirp == 0.0 {
            f64::INFINITY
        } else {
            cfg.mass / (cfg.hbar * self.chirp)
        }
    }

    pub fn state(&self) -> GaussianState {
        GaussianState::normalized(0.0, self.b, self.chirp, 0.0, self.mu)
    }
}

pub fn aging_time(cfg: &PhysicalConfig) -> Result<f64> {
    cfg.validate()?;
    Ok(cfg.tau0())
}

fn check_time(name: &str, t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::config(name, format!("must be finite and >= 0, got {t:e}")));
    }
    Ok(())
}

pub fn free_evolve(cfg: &PhysicalConfig, t: f64) -> Result<FreeEvolution> {
    cfg.validate()?;
    check_time("t", t)?;
    let g = cfg.gamma;
    let tau0 = cfg.tau0();
    let s0 = cfg.sigma0;
    let lead = tau0 + g * t;
    // t² + τ₀² + 2tτ₀γ + t²γ², grouped to avoid cancellation for γ < 0
    let x2 = lead * lead + t * t;
    let b = s0 / tau0 * x2.sqrt();
    if b < MIN_WIDTH {
        return Err(Error::FocusSingularity { width: b });
    }
    Ok(FreeEvolution {
        b,
        chirp: (t * (1.0 + g * g) + g * tau0) * tau0 / (s0 * s0 * x2),
        mu: -0.5 * t.atan2(lead),
        tau0,
    })
}

pub fn free_state(cfg: &PhysicalConfig, t: f64) -> Result<GaussianState> {
    Ok(free_evolve(cfg, t)?.state())
}

/// ψ(x,t) = (b√π)^{-1/2} exp(-x²/2b²) exp(i m x²/2ħr + iμ).
pub fn eval_free(cfg: &PhysicalConfig, t: f64, x: f64) -> Result<Complex64> {
    Ok(free_state(cfg, t)?.eval(x))
}

/// Free-particle propagator √(m/(2πiħ dt)) exp[i m (x-ξ)²/(2ħ dt)].
pub fn kernel(cfg: &PhysicalConfig, x: f64, xi: f64, dt: f64) -> Result<Complex64> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::config("dt", format!("must be > 0, got {dt:e}")));
    }
    let pre = Complex64::new(0.0, -cfg.mass / (2.0 * PI * cfg.hbar * dt)).sqrt();
    let dx = x - xi;
    Ok(pre * Complex64::from_polar(1.0, cfg.mass * dx * dx / (2.0 * cfg.hbar * dt)))
}

/// Which Gaussian aperture the packet went through.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slit {
    /// Aperture at -d/2 in the transmission; packet centered at -D/2 with +Δx.
    Plus,
    /// Mirror image, d → -d.
    Minus,
}

impl Slit {
    pub fn sign(self) -> f64 {
        match self {
            Slit::Plus => 1.0,
            Slit::Minus => -1.0,
        }
    }
}

/// Real Gaussian aperture (β√π)^{-1/2} exp[-(x ± d/2)²/(2β²)].
pub fn transmission(cfg: &PhysicalConfig, which: Slit, x: f64) -> f64 {
    let u = x + which.sign() * cfg.d / 2.0;
    (cfg.beta * PI.sqrt()).powf(-0.5) * (-u * u / (2.0 * cfg.beta * cfg.beta)).exp()
}

/// Parameters of the packet at the screen after one slit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlitEvolution {
    /// Beam width B(t, τ).
    pub b_width: f64,
    /// Radius parameter R(t, τ) in seconds.
    pub radius: f64,
    /// m/(ħR), 1/m².
    pub chirp: f64,
    /// Packet separation D at the screen.
    pub d_sep: f64,
    /// Linear phase coefficient Δ, 1/m.
    pub delta: f64,
    pub theta_phase: f64,
    /// Slit Gouy phase μ′. Follows the continuous branch, so it can leave (-π/2, π/2].
    pub mu_prime: f64,
    /// Auxiliary C(t, τ), s².
    pub c_aux: f64,
    pub free: FreeEvolution,
}

impl SlitEvolution {
    pub fn state(&self, which: Slit) -> GaussianState {
        let c = -which.sign() * self.d_sep / 2.0;
        // re-center the x²-chirp on the envelope center
        GaussianState::normalized(
            c,
            self.b_width,
            self.chirp,
            which.sign() * self.delta + self.chirp * c,
            self.theta_phase + self.mu_prime - 0.5 * self.chirp * c * c,
        )
    }

    /// ⟨ψ₁|ψ₂⟩ = exp[-D²/4B² - Δ²B²].
    pub fn slit_overlap(&self) -> f64 {
        let b2 = self.b_width * self.b_width;
        (-self.d_sep * self.d_sep / (4.0 * b2) - self.delta * self.delta * b2).exp()
    }

    /// √(2 + 2⟨ψ₁|ψ₂⟩), the screen normalization.
    pub fn screen_norm(&self) -> f64 {
        (2.0 + 2.0 * self.slit_overlap()).sqrt()
    }
}

pub fn slit_evolve(cfg: &PhysicalConfig) -> Result<SlitEvolution> {
    cfg.validate()?;
    if cfg.t <= 0.0 {
        return Err(Error::config("t", "slit evolution needs t > 0"));
    }
    if cfg.tau <= 0.0 {
        return Err(Error::config("tau", "slit evolution needs tau > 0"));
    }
    let (m, hb, beta, d, t, tau) = (cfg.mass, cfg.hbar, cfg.beta, cfg.d, cfg.t, cfg.tau);
    let (s0, g) = (cfg.sigma0, cfg.gamma);
    let free = free_evolve(cfg, t)?;
    let tau0 = free.tau0;
    let b = free.b;
    let inv_r = free.chirp * hb / m;
    let inv_w2 = 1.0 / (beta * beta) + 1.0 / (b * b);
    let mh = m / hb;
    let bracket = inv_w2 * inv_w2 + mh * mh * (1.0 / tau + inv_r).powi(2);

    let b2 = bracket / ((mh / tau).powi(2) * inv_w2);
    if b2.sqrt() < MIN_WIDTH {
        return Err(Error::FocusSingularity { width: b2.sqrt() });
    }
    let x2 = t * t + tau0 * tau0 + 2.0 * t * tau0 * g + t * t * g * g;
    let c_aux = tau0 * tau0
        + t * tau0 * tau0 / tau
        + tau0 * tau0 * g * g
        + tau0.powi(3) * g / tau
        + t * tau0 * tau0 * g * g / tau
        + 2.0 * tau0 * tau0 * s0 * s0 / (beta * beta);
    let radius = tau * bracket / (beta.powi(-4) + c_aux / (s0.powi(4) * x2));

    let k1 = 0.5 * inv_w2;
    let k2 = 0.5 * mh * inv_r;
    let a = 0.5 * mh / tau;
    Ok(SlitEvolution {
        b_width: b2.sqrt(),
        radius,
        chirp: mh / radius,
        d_sep: d * (1.0 + tau * inv_r) / (1.0 + beta * beta / (b * b)),
        delta: tau * d / (2.0 * mh * beta * beta * b2),
        theta_phase: mh * d * d * (1.0 / tau + inv_r) / (8.0 * beta.powi(4) * bracket),
        mu_prime: free.mu - 0.5 * k1.atan2(k2 + a),
        c_aux,
        free,
    })
}

pub fn slit_state(cfg: &PhysicalConfig, which: Slit) -> Result<GaussianState> {
    Ok(slit_evolve(cfg)?.state(which))
}

/// ψ₁ (`Plus`) or ψ₂ (`Minus`) at the screen.
pub fn eval_slit(cfg: &PhysicalConfig, which: Slit, x: f64) -> Result<Complex64> {
    Ok(slit_state(cfg, which)?.eval(x))
}

/// Normalized superposition (ψ₁ + ψ₂)/√(2 + 2⟨ψ₁|ψ₂⟩).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScreenState {
    pub plus: GaussianState,
    pub minus: GaussianState,
    pub norm: f64,
    pub slit: SlitEvolution,
}

impl ScreenState {
    pub fn new(cfg: &PhysicalConfig) -> Result<Self> {
        let slit = slit_evolve(cfg)?;
        Ok(ScreenState {
            plus: slit.state(Slit::Plus),
            minus: slit.state(Slit::Minus),
            norm: slit.screen_norm(),
            slit,
        })
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        (self.plus.eval(x) + self.minus.eval(x)) / self.norm
    }
}

pub fn screen_state(cfg: &PhysicalConfig, x: f64) -> Result<Complex64> {
    Ok(ScreenState::new(cfg)?.eval(x))
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn neutron() -> PhysicalConfig {
        PhysicalConfig::neutron()
    }

    fn norm_sq(f: impl Fn(f64) -> Complex64, lo: f64, hi: f64, n: usize) -> f64 {
        let h = (hi - lo) / (n - 1) as f64;
        let s: f64 = (0..n)
            .map(|i| {
                let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
                w * f(lo + i as f64 * h).norm_sqr()
            })
            .sum();
        s * h
    }

    #[test]
    fn aging_time_neutron() {
        let t0 = aging_time(&neutron()).unwrap();
        assert!((t0 - 9.6345e-4).abs() < 1e-7, "{t0}");
        let mut c = neutron();
        c.sigma0 *= 2.0;
        assert!((aging_time(&c).unwrap() / t0 - 4.0).abs() < 1e-12);
        c.mass = 0.0;
        assert!(aging_time(&c).is_err());
    }

    #[test]
    fn identity_at_t0() {
        let f = free_evolve(&neutron(), 0.0).unwrap();
        assert_eq!(f.b, neutron().sigma0);
        assert_eq!(f.mu, 0.0);
        assert_eq!(f.chirp, 0.0);
        assert!(f.r(&neutron()).is_infinite());
        let c = neutron().with_gamma(-0.7);
        let s0 = crate::states::make_initial_state(&c).unwrap();
        for x in [-3e-5, -1e-6, 0.0, 2e-6, 1.1e-5] {
            let a = eval_free(&c, 0.0, x).unwrap();
            assert!((a - s0.eval(x)).norm() < 1e-12 * s0.eval(0.0).norm());
        }
    }

    #[test]
    fn rejects_negative_time() {
        assert!(free_evolve(&neutron(), -1e-3).is_err());
        assert!(kernel(&neutron(), 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn gouy_limit() {
        let c = neutron();
        let f = free_evolve(&c, 100.0 * c.tau0()).unwrap();
        assert!((f.mu + PI / 4.0).abs() < 0.01);
    }

    #[test]
    fn contractive_width_at_aging_time() {
        // X = (τ₀ - τ₀)² + τ₀² so b = σ₀, not zero
        let c = neutron().with_gamma(-1.0);
        let f = free_evolve(&c, c.tau0()).unwrap();
        assert!((f.b / c.sigma0 - 1.0).abs() < 1e-12);
        // narrowest point σ₀/√(1+γ²) at t = -γτ₀/(1+γ²)
        let f = free_evolve(&c, 0.5 * c.tau0()).unwrap();
        assert!((f.b / c.sigma0 - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn free_peak_at_50ms() {
        let c = neutron();
        let f = free_evolve(&c, 0.05).unwrap();
        let v = eval_free(&c, 0.05, 0.0).unwrap();
        assert!((v.norm() - (f.b * PI.sqrt()).powf(-0.5)).abs() < 1e-12 * v.norm());
        assert!((v.arg() - f.mu).abs() < 1e-12);
    }

    #[test]
    fn free_state_normalized() {
        for g in [-1.0, 0.0, 2.0] {
            let c = neutron().with_gamma(g);
            for t in [1e-4, 0.01, 0.05] {
                let b = free_evolve(&c, t).unwrap().b;
                let n = norm_sq(|x| eval_free(&c, t, x).unwrap(), -10.0 * b, 10.0 * b, 20001);
                assert!((n - 1.0).abs() < 1e-8, "g={g} t={t} n={n}");
            }
        }
    }

    #[test]
    fn kernel_symmetric() {
        let c = neutron();
        let a = kernel(&c, 1e-5, -2e-5, 1e-3).unwrap();
        let b = kernel(&c, -2e-5, 1e-5, 1e-3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn slit_parameters_reference() {
        // independent evaluation of the slit-path closed forms
        let s = slit_evolve(&neutron()).unwrap();
        let expect = [
            (s.b_width, 4.0517027594676437e-4),
            (s.radius, 5.0037067571310344e-2),
            (s.d_sep, 1.9988869417461488e-4),
            (s.delta, 15806.486274871471),
            (s.theta_phase, 0.78988447524325774),
            (s.mu_prime, -1.541914235370964),
            (s.c_aux, 3.7129493321042217e-6),
        ];
        for (got, want) in expect {
            assert!((got / want - 1.0).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn radius_equivalent_form() {
        for g in [-1.0, 0.0, 2.0] {
            let c = neutron().with_gamma(g).with_times(0.01, 0.03);
            let s = slit_evolve(&c).unwrap();
            let b = s.free.b;
            let k1 = 0.5 * (1.0 / (c.beta * c.beta) + 1.0 / (b * b));
            let k2 = 0.5 * s.free.chirp;
            let a = 0.5 * c.mass / (c.hbar * c.tau);
            let r = c.tau * (k1 * k1 + (k2 + a).powi(2)) / (k1 * k1 + k2 * k2 + k2 * a);
            assert!((s.radius / r - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn coincident_slits() {
        let c = neutron().with_d(0.0);
        for x in [-1e-4, 0.0, 3e-4] {
            let p = eval_slit(&c, Slit::Plus, x).unwrap();
            let m = eval_slit(&c, Slit::Minus, x).unwrap();
            assert_eq!(p, m);
            let psi = screen_state(&c, x).unwrap();
            assert!((psi - p).norm() <= 1e-15 * p.norm().max(1.0));
        }
    }

    #[test]
    fn slit_states_normalized() {
        let c = neutron();
        let s = slit_evolve(&c).unwrap();
        let w = 12.0 * s.b_width + s.d_sep;
        let n1 = norm_sq(|x| eval_slit(&c, Slit::Plus, x).unwrap(), -w, w, 40001);
        assert!((n1 - 1.0).abs() < 1e-8, "{n1}");
        let scr = ScreenState::new(&c).unwrap();
        let n = norm_sq(|x| scr.eval(x), -w, w, 40001);
        assert!((n - 1.0).abs() < 1e-6, "{n}");
    }

    #[test]
    fn symmetric_intensity() {
        let scr = ScreenState::new(&neutron()).unwrap();
        for x in [1e-5, 7.3e-5, 2.2e-4, 6e-4] {
            let a = scr.eval(x).norm();
            let b = scr.eval(-x).norm();
            assert!((a - b).abs() < 1e-12 * a.max(1.0));
        }
    }

    #[test]
    fn slit_states_mirror() {
        let s = slit_evolve(&neutron().with_gamma(-1.0)).unwrap();
        let (p, m) = (s.state(Slit::Plus), s.state(Slit::Minus));
        for x in [-3e-4, 1e-5, 2e-4] {
            assert!((p.eval(x) - m.eval(-x)).norm() < 1e-10 * p.eval(x).norm().max(1.0));
        }
    }

    #[test]
    fn slit_rejects_zero_times() {
        assert!(slit_evolve(&neutron().with_times(0.0, 0.05)).is_err());
        assert!(slit_evolve(&neutron().with_times(0.05, 0.0)).is_err());
    }
}
