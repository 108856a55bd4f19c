//! Closed-form cross-Wigner distributions and Gouy-phase differences.

use crate::grid::Axis;
use crate::propagation::{free_evolve, slit_evolve, SlitEvolution};
use crate::states::PhysicalConfig;
use crate::{Complex64, Error, Result};
use rayon::prelude::*;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Where the samples of a field came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Analytic,
    Oracle,
    Reconstructed,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Analytic => "analytic",
            Provenance::Oracle => "oracle",
            Provenance::Reconstructed => "reconstructed",
        })
    }
}

impl FromStr for Provenance {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "analytic" => Ok(Provenance::Analytic),
            "oracle" => Ok(Provenance::Oracle),
            "reconstructed" => Ok(Provenance::Reconstructed),
            other => Err(format!("unknown provenance '{other}'")),
        }
    }
}

/// Complex samples on a rectangular (x, k) grid, x-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSpaceField {
    pub x_axis: Axis,
    pub k_axis: Axis,
    pub values: Vec<Complex64>,
    pub provenance: Provenance,
}

impl PhaseSpaceField {
    pub fn new(x_axis: Axis, k_axis: Axis, values: Vec<Complex64>, provenance: Provenance) -> Result<Self> {
        if values.len() != x_axis.len() * k_axis.len() {
            return Err(Error::AxisMismatch(format!(
                "{} values for a {}x{} grid",
                values.len(),
                x_axis.len(),
                k_axis.len()
            )));
        }
        Ok(PhaseSpaceField {
            x_axis,
            k_axis,
            values,
            provenance,
        })
    }

    /// Evaluate `f(x, k)` on every grid point, rows in parallel.
    pub fn from_fn<F>(x_axis: Axis, k_axis: Axis, provenance: Provenance, f: F) -> Self
    where
        F: Fn(f64, f64) -> Complex64 + Sync,
    {
        let nk = k_axis.len();
        let mut values = vec![Complex64::new(0.0, 0.0); x_axis.len() * nk];
        values.par_chunks_mut(nk).enumerate().for_each(|(i, row)| {
            let x = x_axis.value(i);
            for (j, v) in row.iter_mut().enumerate() {
                *v = f(x, k_axis.value(j));
            }
        });
        PhaseSpaceField {
            x_axis,
            k_axis,
            values,
            provenance,
        }
    }

    pub fn nx(&self) -> usize {
        self.x_axis.len()
    }

    pub fn nk(&self) -> usize {
        self.k_axis.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.nk() + j]
    }

    pub fn peak(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn check_same_grid(&self, other: &PhaseSpaceField) -> Result<()> {
        if self.x_axis != other.x_axis || self.k_axis != other.k_axis {
            return Err(Error::AxisMismatch("fields live on different grids".into()));
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &PhaseSpaceField) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// max |self - reference| / max |reference|.
    pub fn relative_error(&self, reference: &PhaseSpaceField) -> Result<f64> {
        Ok(self.max_abs_diff(reference)? / reference.peak())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> PhaseSpaceField {
        PhaseSpaceField {
            values: self.values.iter().map(|&v| f(v)).collect(),
            ..self.clone()
        }
    }

    /// Divide by the largest magnitude; used for plots.
    pub fn normalized(&self) -> PhaseSpaceField {
        let p = self.peak();
        if p == 0.0 {
            return self.clone();
        }
        self.map(|v| v / p)
    }

    /// Plain trapezoid sum over the grid.
    pub fn grid_integral(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.nx() {
            for j in 0..self.nk() {
                acc += self.get(i, j) * self.x_axis.weight(i) * self.k_axis.weight(j);
            }
        }
        acc
    }
}

/// Default plotting grid: x ∈ ±4·max(b, B, σ₀), k ∈ ±4/σ₀.
pub fn default_axes(cfg: &PhysicalConfig, nx: usize, nk: usize) -> Result<(Axis, Axis)> {
    let mut w = cfg.sigma0.max(free_evolve(cfg, cfg.t)?.b);
    if let Ok(s) = slit_evolve(cfg) {
        w = w.max(s.b_width);
    }
    Ok((Axis::symmetric(4.0 * w, nx)?, Axis::symmetric(4.0 / cfg.sigma0, nk)?))
}

/// Parameters of CW_{ψ(t), ψ₀}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CwFreeParams {
    pub n: f64,
    pub a: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub a5: f64,
    pub a6: f64,
    pub a11: f64,
    pub a22: f64,
    pub xi: f64,
    pub delta_mu: f64,
}

impl CwFreeParams {
    pub fn without_gouy(mut self) -> Self {
        self.delta_mu = 0.0;
        self
    }
}

pub fn cw_free_params(cfg: &PhysicalConfig, t: f64) -> Result<CwFreeParams> {
    let f = free_evolve(cfg, t)?;
    let (b, s0, g) = (f.b, cfg.sigma0, cfg.gamma);
    let s2 = s0 * s0;
    let p = 1.0 / (2.0 * b * b) + 1.0 / (2.0 * s2);
    let q = f.chirp / 2.0 - g / (2.0 * s2);
    let u = 1.0 / (2.0 * b * b) - 1.0 / (2.0 * s2);
    let v = f.chirp / 2.0 + g / (2.0 * s2);
    let a = p * p + q * q;
    let a11 = ((u * u - v * v) * p + 2.0 * u * v * q) / a;
    let a22 = (-(u * u - v * v) * q + 2.0 * u * v * p) / a;
    let xi = -0.5 * q.atan2(p);
    Ok(CwFreeParams {
        n: 1.0 / (PI * (b * s0).sqrt() * a.powf(0.25)),
        a,
        a1: p - a11,
        a2: -q + a22,
        a3: p / a,
        a4: q / a,
        a5: 2.0 * (u * q - v * p) / a,
        a6: 2.0 * (u * p + v * q) / a,
        a11,
        a22,
        xi,
        delta_mu: xi - f.mu,
    })
}

/// N e^{-a₁x² - a₃k² + a₅kx} e^{i(a₂x² + a₄k² + a₆kx + Δμ)}.
pub fn eval_cw_free(p: &CwFreeParams, x: f64, k: f64) -> Complex64 {
    let re = -p.a1 * x * x - p.a3 * k * k + p.a5 * k * x;
    let im = p.a2 * x * x + p.a4 * k * k + p.a6 * k * x + p.delta_mu;
    p.n * Complex64::from_polar(re.exp(), im)
}

/// Parameters of CW_{ψ₁, ψ₂} between the two slit paths at the screen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CwSlitsParams {
    pub b_width: f64,
    /// m/(ħR).
    pub chirp: f64,
    pub d_sep: f64,
    pub delta: f64,
}

impl From<&SlitEvolution> for CwSlitsParams {
    fn from(s: &SlitEvolution) -> Self {
        CwSlitsParams {
            b_width: s.b_width,
            chirp: s.chirp,
            d_sep: s.d_sep,
            delta: s.delta,
        }
    }
}

pub fn cw_slits_params(cfg: &PhysicalConfig) -> Result<CwSlitsParams> {
    Ok((&slit_evolve(cfg)?).into())
}

/// (1/π) e^{-x²/B² - (k+sx)²B²} e^{i[(k+sx)D - 2Δx]}, s = m/(ħR). Carries no Gouy phase.
pub fn eval_cw_slits(p: &CwSlitsParams, x: f64, k: f64) -> Complex64 {
    let b2 = p.b_width * p.b_width;
    let q = k + p.chirp * x;
    let re = -(x * x / b2 + q * q * b2);
    let im = q * p.d_sep - 2.0 * p.delta * x;
    Complex64::from_polar(re.exp() / PI, im)
}

pub fn cw_slits(cfg: &PhysicalConfig, x: f64, k: f64) -> Result<Complex64> {
    Ok(eval_cw_slits(&cw_slits_params(cfg)?, x, k))
}

/// Parameters of CW_{Ψ, ψ₀} between the screen superposition and ψ₀.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CwScreenParams {
    pub n_prime: f64,
    pub a_prime: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub b4: f64,
    pub b5: f64,
    pub b6: f64,
    pub b7: f64,
    pub b8: f64,
    pub b9: f64,
    pub b10: f64,
    pub b11: f64,
    pub b12: f64,
    pub xi_prime: f64,
    pub delta_mu_prime: f64,
    pub theta_phase: f64,
    pub b_width: f64,
    pub d_sep: f64,
}

impl CwScreenParams {
    pub fn without_gouy(mut self) -> Self {
        self.delta_mu_prime = 0.0;
        self
    }
}

pub fn cw_screen_params(cfg: &PhysicalConfig) -> Result<CwScreenParams> {
    let s = slit_evolve(cfg)?;
    let (bw, r, dd, de) = (s.b_width, s.radius, s.d_sep, s.delta);
    let (m, hb, s0, g) = (cfg.mass, cfg.hbar, cfg.sigma0, cfg.gamma);
    let b2 = bw * bw;
    let s2 = s0 * s0;
    let half_chirp = m / (2.0 * hb * r);
    let p = 1.0 / (2.0 * b2) + 1.0 / (2.0 * s2);
    let q = half_chirp - g / (2.0 * s2);
    let u = 1.0 / (2.0 * b2) - 1.0 / (2.0 * s2);
    let v = half_chirp + g / (2.0 * s2);
    let a = p * p + q * q;
    let alpha1 = ((u * u - v * v) * p + 2.0 * u * v * q) / a;
    let alpha2 = (-(u * u - v * v) * q + 2.0 * u * v * p) / a;

    let quart = 1.0 / (4.0 * b2 * b2) - 1.0 / (4.0 * s2 * s2);
    let chirp_sq = m * m / (4.0 * hb * hb * r * r) - g * g / (4.0 * s2 * s2);
    let mixed = m / (hb * r * s2) + g / (s2 * b2);
    let xi_prime = -0.5 * q.atan2(p);
    Ok(CwScreenParams {
        n_prime: 1.0 / (PI * (bw * s0).sqrt() * a.powf(0.25) * s.screen_norm()),
        a_prime: a,
        alpha1,
        alpha2,
        b1: (dd * dd / (16.0 * b2 * b2) - de * de / 4.0) * p / a + q * de * dd / (4.0 * b2 * a),
        b2: p / a,
        b3: p - alpha1,
        b4: mixed / a,
        b5: (quart + chirp_sq) * dd / (2.0 * b2 * a) - de / (2.0 * a) * mixed - dd / (2.0 * b2),
        b6: q * dd / (2.0 * b2 * a) - p * de / a,
        b7: alpha2 - half_chirp + g / (2.0 * s2),
        b8: 2.0 * (quart + chirp_sq) / a,
        b9: (-dd * dd / (16.0 * b2 * b2) + de * de / 4.0) * q / a + p * de * dd / (4.0 * b2 * a),
        b10: q / a,
        b11: de / a * (quart + chirp_sq) + mixed / 2.0 * dd / (2.0 * b2 * a) - de,
        b12: p * dd / (2.0 * b2 * a) + q * de / a,
        xi_prime,
        delta_mu_prime: xi_prime - s.mu_prime,
        theta_phase: s.theta_phase,
        b_width: bw,
        d_sep: dd,
    })
}

/// Two-branch closed form of CW_{Ψ, ψ₀}.
pub fn eval_cw_screen(p: &CwScreenParams, x: f64, k: f64) -> Complex64 {
    let phi1 = p.b7 * x * x + p.b8 * k * x + p.b9 + p.b10 * k * k - p.theta_phase + p.delta_mu_prime;
    let phi2 = p.b11 * x + p.b12 * k;
    let env = -p.d_sep * p.d_sep / (8.0 * p.b_width * p.b_width) + p.b1
        - p.b2 * k * k
        - p.b3 * x * x
        - p.b4 * k * x;
    let lin = p.b5 * x + p.b6 * k;
    p.n_prime
        * (Complex64::from_polar((env + lin).exp(), phi1 + phi2)
            + Complex64::from_polar((env - lin).exp(), phi1 - phi2))
}

pub fn gouy_delta_free(cfg: &PhysicalConfig, t: f64) -> Result<f64> {
    Ok(cw_free_params(cfg, t)?.delta_mu)
}

pub fn gouy_delta_slit(cfg: &PhysicalConfig) -> Result<f64> {
    Ok(cw_screen_params(cfg)?.delta_mu_prime)
}

/// Smallest overlap magnitude accepted by [`quasi_prob`].
pub const MIN_OVERLAP: f64 = 1e-12;

/// ρ = CW / ⟨φ|ψ⟩.
pub fn quasi_prob(field: &PhaseSpaceField, overlap: Complex64) -> Result<PhaseSpaceField> {
    if !(overlap.norm() >= MIN_OVERLAP) {
        return Err(Error::DegenerateOverlap {
            magnitude: overlap.norm(),
        });
    }
    Ok(field.map(|v| v / overlap))
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn neutron() -> PhysicalConfig {
        PhysicalConfig::neutron()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn free_params_reference() {
        // extended-precision evaluation of the closed forms
        let p = cw_free_params(&neutron(), 0.05).unwrap();
        let want = [
            (p.n, 0.062464569199384445),
            (p.a, 6.7615288179852549e19),
            (p.a1, 24375036.901594529),
            (p.a2, -632493074.86497894),
            (p.a3, 1.2158977566440854e-10),
            (p.a4, 2.3411766585739388e-12),
            (p.a5, -0.076961757349570637),
            (p.a6, -1.997034045509814),
            (p.a11, 8196952684.3710114),
            (p.a22, -474193740.41555781),
            (p.xi, -0.0096261687477764727),
            (p.delta_mu, 0.76613867937472284),
        ];
        for (i, (got, w)) in want.iter().enumerate() {
            assert!(close(*got, *w, 1e-9), "entry {i}: {got} vs {w}");
        }
        let p = cw_free_params(&neutron().with_gamma(-1.0), 0.05).unwrap();
        assert!(close(p.a22, 7744963635.0743364, 1e-9));
        assert!(close(p.a2, -633197337.79768452, 1e-9));
        assert!(close(p.delta_mu, 0.77576484812249931, 1e-9));
    }

    #[test]
    fn contractive_gouy_larger() {
        let d0 = gouy_delta_free(&neutron(), 0.05).unwrap().abs();
        let d1 = gouy_delta_free(&neutron().with_gamma(-1.0), 0.05).unwrap().abs();
        assert!(d1 > d0);
    }

    #[test]
    fn reduces_to_wigner_at_t0() {
        let c = neutron();
        let p = cw_free_params(&c, 0.0).unwrap();
        assert_eq!(p.a2, 0.0);
        assert_eq!(p.a5, 0.0);
        assert_eq!(p.a6, 0.0);
        assert_eq!(p.delta_mu, 0.0);
        let s0 = c.sigma0;
        let peak = eval_cw_free(&p, 0.0, 0.0);
        assert!((peak.re - 1.0 / PI).abs() < 1e-14 && peak.im == 0.0);
        for (x, k) in [(3e-6, 0.0), (0.0, 1e5), (-7e-6, 2.2e5)] {
            let w = (-x * x / (s0 * s0) - k * k * s0 * s0).exp() / PI;
            let v = eval_cw_free(&p, x, k);
            assert!((v.re - w).abs() < 1e-12 / PI && v.im.abs() < 1e-12 / PI);
        }
    }

    #[test]
    fn contractive_wigner_at_t0() {
        let c = neutron().with_gamma(-1.0);
        let p = cw_free_params(&c, 0.0).unwrap();
        assert_eq!(p.delta_mu, 0.0);
        let s0 = c.sigma0;
        for (x, k) in [(3e-6, 0.0), (0.0, 1e5), (-7e-6, 2.2e5), (5e-6, -1e5)] {
            let kk = k + c.gamma * x / (s0 * s0);
            let w = (-x * x / (s0 * s0) - kk * kk * s0 * s0).exp() / PI;
            let v = eval_cw_free(&p, x, k);
            assert!((v.re - w).abs() < 1e-12 && v.im.abs() < 1e-12, "{v} {w}");
        }
    }

    #[test]
    fn slit_gouy_reference() {
        let d = gouy_delta_slit(&neutron()).unwrap();
        assert!(close(d, 1.5322916200446911, 1e-9), "{d}");
    }

    #[test]
    fn gouy_only_rotates() {
        let p = cw_free_params(&neutron().with_gamma(-1.0), 0.05).unwrap();
        let q = p.without_gouy();
        let rot = Complex64::from_polar(1.0, p.delta_mu);
        for (x, k) in [(1e-4, 1e5), (-3e-4, -2e5), (0.0, 0.0)] {
            let a = eval_cw_free(&p, x, k);
            let b = eval_cw_free(&q, x, k);
            assert!((a - b * rot).norm() <= 1e-12 * a.norm().max(1e-300));
        }
    }

    #[test]
    fn slits_quarter_wave_relation() {
        // Im CW equals Re CW with the phase argument advanced by π/2.
        let p = cw_slits_params(&neutron()).unwrap();
        let b2 = p.b_width * p.b_width;
        for (x, k) in [(1e-4, 1e5), (-2e-4, 3e4), (5e-5, -2e5)] {
            let q = k + p.chirp * x;
            let env = (-(x * x / b2 + q * q * b2)).exp() / PI;
            let arg = q * p.d_sep - 2.0 * p.delta * x;
            let v = eval_cw_slits(&p, x, k);
            assert!((v.im - env * (arg - PI / 2.0).cos()).abs() < 1e-15);
            assert!((v.re - env * arg.cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn degenerate_overlap_rejected() {
        let (x, k) = default_axes(&neutron(), 16, 16).unwrap();
        let f = PhaseSpaceField::from_fn(x, k, Provenance::Analytic, |_, _| Complex64::new(1.0, 0.0));
        assert!(matches!(
            quasi_prob(&f, Complex64::new(1e-13, 0.0)),
            Err(Error::DegenerateOverlap { .. })
        ));
        let r = quasi_prob(&f, Complex64::new(0.0, 2.0)).unwrap();
        assert_eq!(r.get(3, 4), Complex64::new(0.0, -0.5));
        assert_eq!(r.provenance, Provenance::Analytic);
    }

    #[test]
    fn field_shape_checked() {
        let a = Axis::symmetric(1.0, 4).unwrap();
        assert!(PhaseSpaceField::new(a, a, vec![Complex64::new(0.0, 0.0); 15], Provenance::Oracle).is_err());
    }

    #[test]
    fn screen_params_positive_decay() {
        for g in [-1.0, 0.0, 1.0] {
            let p = cw_screen_params(&neutron().with_gamma(g)).unwrap();
            assert!(p.b2 > 0.0 && p.b3 > 0.0);
        }
    }
}
