//! Brute-force quadrature of the defining integrals.
//!
//! Everything here is independent of the closed forms in
//! [`crate::crosswigner`]; it only needs pointwise wavefunction values.

use crate::crosswigner::{PhaseSpaceField, Provenance};
use crate::grid::{trapezoid, Axis};
use crate::propagation::{kernel, slit_evolve, transmission, ScreenState, Slit};
use crate::states::{GaussianState, PhysicalConfig};
use crate::{Complex64, Error, Result};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Envelope cut-off in widths; e^{-72} ≈ 5e-32 in amplitude.
const SUPPORT_WIDTHS: f64 = 12.0;
/// Spectral tail allowance in inverse widths for Gaussian envelopes.
const ENVELOPE_BAND: f64 = 9.0;
/// Oversampling of the integrand's band limit.
const OVERSAMPLE: f64 = 1.5;
/// Integrand at the edge of the range must be below this fraction of scale.
const TRUNCATION: f64 = 1e-12;

/// A wavefunction that can be evaluated anywhere on its support.
pub trait Wavefunction: Sync {
    fn eval(&self, x: f64) -> Complex64;
    /// Interval outside of which the function is negligible.
    fn support(&self) -> (f64, f64);
    /// Upper bound on the angular frequency content over `[lo, hi]`.
    fn bandwidth(&self, lo: f64, hi: f64) -> f64;
    /// Upper bound on |ψ|.
    fn sup_norm(&self) -> f64;
}

impl Wavefunction for GaussianState {
    fn eval(&self, x: f64) -> Complex64 {
        GaussianState::eval(self, x)
    }

    fn support(&self) -> (f64, f64) {
        let w = SUPPORT_WIDTHS * self.width;
        (self.center - w, self.center + w)
    }

    fn bandwidth(&self, lo: f64, hi: f64) -> f64 {
        let reach = (lo - self.center).abs().max((hi - self.center).abs());
        self.chirp.abs() * reach + self.tilt.abs() + ENVELOPE_BAND / self.width
    }

    fn sup_norm(&self) -> f64 {
        self.norm.norm()
    }
}

impl Wavefunction for ScreenState {
    fn eval(&self, x: f64) -> Complex64 {
        ScreenState::eval(self, x)
    }

    fn support(&self) -> (f64, f64) {
        let (a, b) = self.plus.support();
        let (c, d) = self.minus.support();
        (a.min(c), b.max(d))
    }

    fn bandwidth(&self, lo: f64, hi: f64) -> f64 {
        self.plus.bandwidth(lo, hi).max(self.minus.bandwidth(lo, hi))
    }

    fn sup_norm(&self) -> f64 {
        (self.plus.sup_norm() + self.minus.sup_norm()) / self.norm
    }
}

/// Pointwise sum of two wavefunctions.
pub struct Sum<'a>(pub &'a dyn Wavefunction, pub &'a dyn Wavefunction);

impl Wavefunction for Sum<'_> {
    fn eval(&self, x: f64) -> Complex64 {
        self.0.eval(x) + self.1.eval(x)
    }

    fn support(&self) -> (f64, f64) {
        let (a, b) = self.0.support();
        let (c, d) = self.1.support();
        (a.min(c), b.max(d))
    }

    fn bandwidth(&self, lo: f64, hi: f64) -> f64 {
        self.0.bandwidth(lo, hi).max(self.1.bandwidth(lo, hi))
    }

    fn sup_norm(&self) -> f64 {
        self.0.sup_norm() + self.1.sup_norm()
    }
}

/// Samples on a uniform axis with linear interpolation in between.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledWavefunction {
    pub x_axis: Axis,
    pub values: Vec<Complex64>,
}

impl SampledWavefunction {
    pub fn new(x_axis: Axis, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != x_axis.len() {
            return Err(Error::AxisMismatch(format!(
                "{} samples for an axis of {}",
                values.len(),
                x_axis.len()
            )));
        }
        Ok(SampledWavefunction { x_axis, values })
    }

    pub fn sample(w: &dyn Wavefunction, x_axis: Axis) -> Self {
        SampledWavefunction {
            values: x_axis.values().into_iter().map(|x| w.eval(x)).collect(),
            x_axis,
        }
    }

    /// Default 4096-point axis spanning the support of `w`.
    pub fn sample_default(w: &dyn Wavefunction) -> Result<Self> {
        let (lo, hi) = w.support();
        Ok(Self::sample(w, Axis::new(lo, hi, 4096)?))
    }

    pub fn norm_sqr(&self) -> f64 {
        let v: Vec<Complex64> = self.values.iter().map(|z| Complex64::new(z.norm_sqr(), 0.0)).collect();
        trapezoid(&v, self.x_axis.step()).re
    }

    fn edge_ratio(&self) -> f64 {
        let peak = self.sup_norm();
        if peak == 0.0 {
            return 0.0;
        }
        let n = self.values.len();
        self.values[0].norm().max(self.values[n - 1].norm()) / peak
    }

    fn check_decay(&self) -> Result<()> {
        let r = self.edge_ratio();
        if r > TRUNCATION.sqrt() {
            return Err(Error::Truncation { ratio: r });
        }
        Ok(())
    }
}

impl Wavefunction for SampledWavefunction {
    fn eval(&self, x: f64) -> Complex64 {
        match self.x_axis.locate(x) {
            Some((i, f)) => self.values[i] * (1.0 - f) + self.values[i + 1] * f,
            None => Complex64::new(0.0, 0.0),
        }
    }

    fn support(&self) -> (f64, f64) {
        (self.x_axis.lo(), self.x_axis.hi())
    }

    fn bandwidth(&self, _lo: f64, _hi: f64) -> f64 {
        PI / self.x_axis.step()
    }

    fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Quadrature plan for the y-integral at fixed x.
struct YPlan {
    lo: f64,
    h: f64,
    n: usize,
}

fn y_plan(phi: &dyn Wavefunction, psi: &dyn Wavefunction, x: f64, k_max: f64) -> Option<YPlan> {
    // φ*(x + y/2) ψ(x - y/2): both arguments must stay in their supports
    let (pa, pb) = phi.support();
    let (qa, qb) = psi.support();
    let lo = (2.0 * (pa - x)).max(2.0 * (x - qb));
    let hi = (2.0 * (pb - x)).min(2.0 * (x - qa));
    if !(hi > lo) {
        return None;
    }
    let band = 0.5 * phi.bandwidth(x + lo / 2.0, x + hi / 2.0)
        + 0.5 * psi.bandwidth(x - hi / 2.0, x - lo / 2.0)
        + k_max;
    let h_max = 2.0 * PI / (OVERSAMPLE * band);
    let n = ((hi - lo) / h_max).ceil().max(2.0) as usize + 1;
    Some(YPlan {
        lo,
        h: (hi - lo) / (n - 1) as f64,
        n,
    })
}

fn integrand(phi: &dyn Wavefunction, psi: &dyn Wavefunction, x: f64, plan: &YPlan) -> Result<Vec<(f64, Complex64)>> {
    let g: Vec<(f64, Complex64)> = (0..plan.n)
        .map(|j| {
            let y = if j + 1 == plan.n {
                plan.lo + (plan.n - 1) as f64 * plan.h
            } else {
                plan.lo + j as f64 * plan.h
            };
            (y, phi.eval(x + y / 2.0).conj() * psi.eval(x - y / 2.0))
        })
        .collect();
    let scale = phi.sup_norm() * psi.sup_norm();
    let edge = g[0].1.norm().max(g[plan.n - 1].1.norm());
    if scale > 0.0 && edge > TRUNCATION * scale {
        return Err(Error::Truncation { ratio: edge / scale });
    }
    Ok(g)
}

/// (1/2π) ∫ dy e^{-iky} φ*(x+y/2) ψ(x-y/2) by the trapezoid rule.
pub fn cw_quadrature(phi: &dyn Wavefunction, psi: &dyn Wavefunction, x: f64, k: f64) -> Result<Complex64> {
    let Some(plan) = y_plan(phi, psi, x, k.abs()) else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let g = integrand(phi, psi, x, &plan)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, (y, v)) in g.iter().enumerate() {
        let w = if j == 0 || j + 1 == plan.n { 0.5 } else { 1.0 };
        acc += v * Complex64::from_polar(w, -k * y);
    }
    Ok(acc * plan.h / (2.0 * PI))
}

fn cw_row(phi: &dyn Wavefunction, psi: &dyn Wavefunction, x: f64, k_axis: &Axis, row: &mut [Complex64]) -> Result<()> {
    let k_max = k_axis.lo().abs().max(k_axis.hi().abs());
    row.fill(Complex64::new(0.0, 0.0));
    let Some(plan) = y_plan(phi, psi, x, k_max) else {
        return Ok(());
    };
    let g = integrand(phi, psi, x, &plan)?;
    let (k0, dk) = (k_axis.lo(), k_axis.step());
    for (j, (y, v)) in g.iter().enumerate() {
        let w = if j == 0 || j + 1 == plan.n { 0.5 } else { 1.0 };
        let mut term = v * Complex64::from_polar(w, -k0 * y);
        let rot = Complex64::from_polar(1.0, -dk * y);
        for r in row.iter_mut() {
            *r += term;
            term *= rot;
        }
    }
    let s = plan.h / (2.0 * PI);
    for r in row.iter_mut() {
        *r *= s;
    }
    Ok(())
}

/// Cross-Wigner field on a grid, one quadrature per x row.
pub fn cw_field(phi: &dyn Wavefunction, psi: &dyn Wavefunction, x_axis: Axis, k_axis: Axis) -> Result<PhaseSpaceField> {
    let nk = k_axis.len();
    let mut values = vec![Complex64::new(0.0, 0.0); x_axis.len() * nk];
    values
        .par_chunks_mut(nk)
        .enumerate()
        .try_for_each(|(i, row)| cw_row(phi, psi, x_axis.value(i), &k_axis, row))?;
    PhaseSpaceField::new(x_axis, k_axis, values, Provenance::Oracle)
}

fn check_real(v: Complex64, scale: f64) -> Result<f64> {
    if v.im.abs() > 1e-12 * scale {
        return Err(Error::Inconsistent(format!(
            "Wigner quadrature has imaginary residue {:e}",
            v.im
        )));
    }
    Ok(v.re)
}

/// Wigner function of ψ at one point.
pub fn wigner_quadrature(psi: &dyn Wavefunction, x: f64, k: f64) -> Result<f64> {
    let v = cw_quadrature(psi, psi, x, k)?;
    check_real(v, psi.sup_norm().powi(2) / PI)
}

/// Wigner function on a grid; the imaginary residue is checked and kept.
pub fn wigner_field(psi: &dyn Wavefunction, x_axis: Axis, k_axis: Axis) -> Result<PhaseSpaceField> {
    let f = cw_field(psi, psi, x_axis, k_axis)?;
    let scale = psi.sup_norm().powi(2) / PI;
    for v in &f.values {
        check_real(*v, scale)?;
    }
    Ok(f)
}

/// ⟨φ|ψ⟩ on a shared sample axis.
pub fn overlap(phi: &SampledWavefunction, psi: &SampledWavefunction) -> Result<Complex64> {
    if phi.x_axis != psi.x_axis {
        return Err(Error::AxisMismatch("overlap needs a shared axis".into()));
    }
    let v: Vec<Complex64> = phi.values.iter().zip(&psi.values).map(|(a, b)| a.conj() * b).collect();
    Ok(trapezoid(&v, phi.x_axis.step()))
}

/// ⟨φ|ψ⟩ by trapezoid on the support intersection, step from the bandwidths.
pub fn overlap_fn(phi: &dyn Wavefunction, psi: &dyn Wavefunction) -> Complex64 {
    let (pa, pb) = phi.support();
    let (qa, qb) = psi.support();
    let (lo, hi) = (pa.max(qa), pb.min(qb));
    if !(hi > lo) {
        return Complex64::new(0.0, 0.0);
    }
    let band = phi.bandwidth(lo, hi) + psi.bandwidth(lo, hi);
    let n = ((hi - lo) * OVERSAMPLE * band / (2.0 * PI)).ceil().max(2.0) as usize + 1;
    let h = (hi - lo) / (n - 1) as f64;
    let v: Vec<Complex64> = (0..n)
        .map(|i| {
            let x = lo + i as f64 * h;
            phi.eval(x).conj() * psi.eval(x)
        })
        .collect();
    trapezoid(&v, h)
}

/// Fψ(k) = (1/√2π) ∫ dx e^{-ikx} ψ(x) on the given k axis.
pub fn fourier_transform(psi: &SampledWavefunction, k_axis: Axis) -> Result<SampledWavefunction> {
    psi.check_decay()?;
    let xs = psi.x_axis.values();
    let h = psi.x_axis.step();
    let values = k_axis
        .values()
        .into_par_iter()
        .map(|k| {
            let v: Vec<Complex64> = xs
                .iter()
                .zip(&psi.values)
                .map(|(&x, &p)| p * Complex64::from_polar(1.0, -k * x))
                .collect();
            trapezoid(&v, h) / (2.0 * PI).sqrt()
        })
        .collect();
    SampledWavefunction::new(k_axis, values)
}

/// Fourier transform of an analytic wavefunction, sampled finely enough
/// for every k on the axis.
pub fn fourier_transform_fn(w: &dyn Wavefunction, k_axis: Axis) -> Result<SampledWavefunction> {
    let (lo, hi) = w.support();
    let k_max = k_axis.lo().abs().max(k_axis.hi().abs());
    let band = w.bandwidth(lo, hi) + k_max;
    let n = ((hi - lo) * OVERSAMPLE * band / (2.0 * PI)).ceil().max(2.0) as usize + 1;
    fourier_transform(&SampledWavefunction::sample(w, Axis::new(lo, hi, n)?), k_axis)
}

/// Evolve samples by `dt` with the free propagator, evaluating at `out`.
pub fn propagate(cfg: &PhysicalConfig, input: &SampledWavefunction, dt: f64, out: &Axis) -> Result<SampledWavefunction> {
    input.check_decay()?;
    let xs = input.x_axis.values();
    let h = input.x_axis.step();
    let values = out
        .values()
        .into_par_iter()
        .map(|x| -> Result<Complex64> {
            let mut v = Vec::with_capacity(xs.len());
            for (&y, &p) in xs.iter().zip(&input.values) {
                v.push(kernel(cfg, x, y, dt)? * p);
            }
            Ok(trapezoid(&v, h))
        })
        .collect::<Result<Vec<_>>>()?;
    SampledWavefunction::new(*out, values)
}

/// Sample axis over the support of `w` fine enough to propagate it by `dt`
/// to any point within `reach` of the origin.
pub fn propagation_axis(cfg: &PhysicalConfig, w: &dyn Wavefunction, dt: f64, reach: f64) -> Result<Axis> {
    let (lo, hi) = w.support();
    let dist = (reach + lo.abs()).max(reach + hi.abs());
    let band = w.bandwidth(lo, hi) + cfg.mass * dist / (cfg.hbar * dt);
    let n = ((hi - lo) * OVERSAMPLE * band / (2.0 * PI)).ceil().max(2.0) as usize + 1;
    Axis::new(lo, hi, n)
}

/// ψ₀ (or any state) evolved by `dt` through kernel quadrature.
pub fn propagate_state(cfg: &PhysicalConfig, w: &dyn Wavefunction, dt: f64, out: &Axis) -> Result<SampledWavefunction> {
    let reach = out.lo().abs().max(out.hi().abs());
    let ax = propagation_axis(cfg, w, dt, reach)?;
    propagate(cfg, &SampledWavefunction::sample(w, ax), dt, out)
}

/// Slit-path wave at the screen by kernel quadrature: evolve ψ₀ for t,
/// multiply by the Gaussian aperture, renormalize, evolve for τ.
pub fn propagate_through_slit(cfg: &PhysicalConfig, which: Slit, out: &Axis) -> Result<SampledWavefunction> {
    let psi0 = crate::states::make_initial_state(cfg)?;
    let s = slit_evolve(cfg)?;
    let b = s.free.b;
    let beff = (1.0 / (cfg.beta * cfg.beta) + 1.0 / (b * b)).powf(-0.5);
    let c = -which.sign() * cfg.d / 2.0 * b * b / (b * b + cfg.beta * cfg.beta);
    // envelope of aperture × ψ(t) is a Gaussian of width β_eff around c
    let (lo, hi) = (c - SUPPORT_WIDTHS * beff, c + SUPPORT_WIDTHS * beff);
    let reach = out.lo().abs().max(out.hi().abs());
    let dist = reach + lo.abs().max(hi.abs());
    let band = s.free.chirp.abs() * lo.abs().max(hi.abs()) + ENVELOPE_BAND / beff + cfg.mass * dist / (cfg.hbar * cfg.tau);
    let n = ((hi - lo) * OVERSAMPLE * band / (2.0 * PI)).ceil().max(2.0) as usize + 1;
    let mid_axis = Axis::new(lo, hi, n)?;
    let at_slit = propagate_state(cfg, &psi0, cfg.t, &mid_axis)?;
    let mut passed = at_slit.clone();
    for (v, x) in passed.values.iter_mut().zip(mid_axis.values()) {
        *v *= transmission(cfg, which, x);
    }
    let norm = passed.norm_sqr().sqrt();
    for v in passed.values.iter_mut() {
        *v /= norm;
    }
    propagate(cfg, &passed, cfg.tau, out)
}

/// ∫ K(x,y,dt₁) K(y,ξ,dt₂) dy with a Gaussian damping window about the
/// stationary point, extrapolated to zero damping.
pub fn kernel_composition(cfg: &PhysicalConfig, x: f64, xi: f64, dt1: f64, dt2: f64) -> Result<Complex64> {
    let a = cfg.mass / (2.0 * cfg.hbar) * (1.0 / dt1 + 1.0 / dt2);
    let y_star = (x * dt2 + xi * dt1) / (dt1 + dt2);
    let eps0 = 0.05 * a;
    let damped = |eps: f64| -> Result<Complex64> {
        let half = (40.0 / eps).sqrt();
        let h_max = PI * (eps / (40.0 * (eps * eps + a * a))).sqrt();
        let n = (2.0 * half / h_max).ceil() as usize + 1;
        let h = 2.0 * half / (n - 1) as f64;
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            let u = -half + i as f64 * h;
            let y = y_star + u;
            v.push(kernel(cfg, x, y, dt1)? * kernel(cfg, y, xi, dt2)? * (-eps * u * u).exp());
        }
        Ok(trapezoid(&v, h))
    };
    let i1 = damped(eps0)?;
    let i2 = damped(eps0 / 2.0)?;
    let i4 = damped(eps0 / 4.0)?;
    // Richardson table for a series in ε
    let r12 = 2.0 * i2 - i1;
    let r24 = 2.0 * i4 - i2;
    Ok((4.0 * r24 - r12) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagation::free_state;
    use crate::states::make_initial_state;

    fn neutron() -> PhysicalConfig {
        PhysicalConfig::neutron()
    }

    #[test]
    fn gaussian_wigner_peak() {
        let s = make_initial_state(&neutron()).unwrap();
        let w = wigner_quadrature(&s, 0.0, 0.0).unwrap();
        assert!((w - 1.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn gaussian_wigner_shape() {
        let c = neutron().with_gamma(-1.0);
        let s = make_initial_state(&c).unwrap();
        let s0 = c.sigma0;
        for (x, k) in [(0.0, 0.0), (4e-6, 0.0), (-3e-6, 1e5), (1e-5, -5e4), (2e-6, 2e5)] {
            let kk = k + c.gamma * x / (s0 * s0);
            let want = (-x * x / (s0 * s0) - kk * kk * s0 * s0).exp() / PI;
            let got = wigner_quadrature(&s, x, k).unwrap();
            assert!((got - want).abs() < 1e-12, "({x},{k}) {got} {want}");
        }
    }

    #[test]
    fn odd_even_orthogonal() {
        // x·e^{-x²/2} against e^{-x²/2} via difference of shifted Gaussians
        let s = 7.8e-6;
        let even = GaussianState::normalized(0.0, s, 0.0, 0.0, 0.0);
        let a = GaussianState::normalized(s / 3.0, s, 0.0, 0.0, 0.0);
        let mut b = GaussianState::normalized(-s / 3.0, s, 0.0, 0.0, 0.0);
        b.norm = -b.norm;
        let odd = Sum(&a, &b);
        let x = Axis::symmetric(10.0 * s, 161).unwrap();
        let k = Axis::symmetric(10.0 / s, 161).unwrap();
        let f = cw_field(&even, &odd, x, k).unwrap();
        assert!(f.grid_integral().norm() < 1e-8);
    }

    #[test]
    fn conjugate_symmetry() {
        let c = neutron().with_gamma(-1.0);
        let p = make_initial_state(&c).unwrap();
        let q = free_state(&c, 3e-3).unwrap();
        for (x, k) in [(1e-6, 2e4), (-1e-5, -1e5), (3e-5, 0.0)] {
            let a = cw_quadrature(&p, &q, x, k).unwrap();
            let b = cw_quadrature(&q, &p, x, k).unwrap();
            assert!((a - b.conj()).norm() < 1e-12 * a.norm().max(1e-3));
        }
    }

    #[test]
    fn overlap_and_parseval() {
        let c = neutron().with_gamma(0.5);
        let s = SampledWavefunction::sample_default(&make_initial_state(&c).unwrap()).unwrap();
        assert!((overlap(&s, &s).unwrap().re - 1.0).abs() < 1e-10);
        let f = fourier_transform(&s, Axis::symmetric(12.0 * 1.2 / c.sigma0, 2048).unwrap()).unwrap();
        assert!((f.norm_sqr() - 1.0).abs() < 1e-8, "{}", f.norm_sqr());
    }

    #[test]
    fn fourier_of_gaussian() {
        let c = neutron();
        let s = SampledWavefunction::sample_default(&make_initial_state(&c).unwrap()).unwrap();
        let k = Axis::symmetric(6.0 / c.sigma0, 121).unwrap();
        let f = fourier_transform(&s, k).unwrap();
        let s0 = c.sigma0;
        for (i, kv) in k.values().into_iter().enumerate() {
            let want = (s0 / PI.sqrt()).sqrt() * (-kv * kv * s0 * s0 / 2.0).exp();
            assert!((f.values[i] - want).norm() < 1e-10 * (s0 / PI.sqrt()).sqrt());
        }
    }

    #[test]
    fn mismatched_axes() {
        let s = make_initial_state(&neutron()).unwrap();
        let a = SampledWavefunction::sample(&s, Axis::symmetric(1e-4, 100).unwrap());
        let b = SampledWavefunction::sample(&s, Axis::symmetric(1e-4, 101).unwrap());
        assert!(matches!(overlap(&a, &b), Err(Error::AxisMismatch(_))));
    }

    #[test]
    fn truncation_flagged() {
        let s = make_initial_state(&neutron()).unwrap();
        let a = SampledWavefunction::sample(&s, Axis::symmetric(1e-5, 200).unwrap());
        assert!(matches!(
            fourier_transform(&a, Axis::symmetric(1e5, 10).unwrap()),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn chapman_kolmogorov() {
        let c = neutron();
        let t0 = c.tau0();
        for (x, xi, d1, d2) in [(0.0, 0.0, 0.1 * t0, 0.2 * t0), (3e-6, -2e-6, 0.05 * t0, 0.05 * t0), (1e-5, 4e-6, 0.3 * t0, 0.1 * t0)] {
            let got = kernel_composition(&c, x, xi, d1, d2).unwrap();
            let want = kernel(&c, x, xi, d1 + d2).unwrap();
            assert!((got - want).norm() < 1e-4 * want.norm(), "{got} {want}");
        }
    }

    #[test]
    fn kernel_reproduces_free_evolution() {
        let c = neutron().with_gamma(-1.0);
        let t = 5.0 * c.tau0();
        let b = crate::propagation::free_evolve(&c, t).unwrap().b;
        let out = Axis::symmetric(5.0 * b, 101).unwrap();
        let num = propagate_state(&c, &make_initial_state(&c).unwrap(), t, &out).unwrap();
        let exact = free_state(&c, t).unwrap();
        let err = out
            .values()
            .iter()
            .zip(&num.values)
            .map(|(&x, v)| (v - exact.eval(x)).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-5, "{err}");
    }
}
