//! Closed forms checked against the quadrature oracle.
//!
//! Each check reports a maximum error and the tolerance it is held to. The
//! report is deterministic: rows are evaluated in parallel but every
//! reduction runs in a fixed order.

use crate::crosswigner::{
    cw_free_params, cw_screen_params, cw_slits_params, default_axes, eval_cw_free, eval_cw_screen,
    eval_cw_slits, gouy_delta_free, PhaseSpaceField, Provenance,
};
use crate::grid::{integrate_1d, integrate_2d, Axis};
use crate::oracle::{
    cw_field, fourier_transform_fn, overlap_fn, propagate_state, propagate_through_slit, wigner_field, Sum,
    Wavefunction,
};
use crate::propagation::{free_evolve, free_state, ScreenState, Slit};
use crate::states::{make_initial_state, PhysicalConfig};
use crate::{Complex64, Result};
use std::f64::consts::PI;
use std::fmt::Write;

/// Deliberate defects used to prove the suite can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Flip the sign of a₅ in the free-evolution closed form.
    A5Sign,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, max_error: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            max_error,
            tolerance,
            passed: max_error.is_finite() && max_error < tolerance,
        }
    }

    /// Boolean check reported with error 0 or 1.
    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Check::new(name, if ok { 0.0 } else { 1.0 }, 0.5)
    }

    pub fn line(&self) -> String {
        format!(
            "{} {:.3e} {:.1e} {}",
            self.name,
            self.max_error,
            self.tolerance,
            if self.passed { "pass" } else { "fail" }
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    /// One line per check: name, max error, tolerance, verdict.
    pub fn to_text(&self) -> String {
        let mut s = String::from("# check max_error tolerance verdict\n");
        for c in &self.checks {
            writeln!(s, "{}", c.line()).unwrap();
        }
        s
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CertifyOptions {
    pub nx: usize,
    pub nk: usize,
    pub fault: Option<Fault>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            nx: 201,
            nk: 201,
            fault: None,
        }
    }
}

fn tag_gamma(g: f64) -> String {
    if g == 0.0 {
        "g0".into()
    } else if g < 0.0 {
        format!("gm{}", -g)
    } else {
        format!("g{g}")
    }
}

fn ms(t: f64) -> String {
    format!("{}ms", (t * 1e3 * 1e6).round() / 1e6)
}

fn free_params(cfg: &PhysicalConfig, t: f64, fault: Option<Fault>) -> Result<crate::crosswigner::CwFreeParams> {
    let mut p = cw_free_params(cfg, t)?;
    if fault == Some(Fault::A5Sign) {
        p.a5 = -p.a5;
    }
    Ok(p)
}

/// Grid x ∈ ±4·max(b(t), σ₀), k ∈ ±4/σ₀ used for the free scenario.
pub fn free_axes(cfg: &PhysicalConfig, t: f64, nx: usize, nk: usize) -> Result<(Axis, Axis)> {
    let b = free_evolve(cfg, t)?.b.max(cfg.sigma0);
    Ok((Axis::symmetric(4.0 * b, nx)?, Axis::symmetric(4.0 / cfg.sigma0, nk)?))
}

/// Relative-to-peak error of the free closed form against quadrature.
pub fn free_cw_error(cfg: &PhysicalConfig, t: f64, opts: &CertifyOptions) -> Result<f64> {
    let (xa, ka) = free_axes(cfg, t, opts.nx, opts.nk)?;
    let p = free_params(cfg, t, opts.fault)?;
    let analytic = PhaseSpaceField::from_fn(xa, ka, Provenance::Analytic, |x, k| eval_cw_free(&p, x, k));
    let oracle = cw_field(&free_state(cfg, t)?, &make_initial_state(cfg)?, xa, ka)?;
    analytic.relative_error(&oracle)
}

pub fn slits_cw_error(cfg: &PhysicalConfig, opts: &CertifyOptions) -> Result<f64> {
    let (xa, ka) = default_axes(cfg, opts.nx, opts.nk)?;
    let p = cw_slits_params(cfg)?;
    let scr = ScreenState::new(cfg)?;
    let analytic = PhaseSpaceField::from_fn(xa, ka, Provenance::Analytic, |x, k| eval_cw_slits(&p, x, k));
    let oracle = cw_field(&scr.plus, &scr.minus, xa, ka)?;
    analytic.relative_error(&oracle)
}

pub fn screen_cw_error(cfg: &PhysicalConfig, opts: &CertifyOptions) -> Result<f64> {
    let (xa, ka) = default_axes(cfg, opts.nx, opts.nk)?;
    let p = cw_screen_params(cfg)?;
    let analytic = PhaseSpaceField::from_fn(xa, ka, Provenance::Analytic, |x, k| eval_cw_screen(&p, x, k));
    let oracle = cw_field(&ScreenState::new(cfg)?, &make_initial_state(cfg)?, xa, ka)?;
    analytic.relative_error(&oracle)
}

/// One closed-form scenario with the pieces the identities need.
pub struct Scenario {
    pub name: String,
    pub phi: Box<dyn Wavefunction>,
    pub psi: Box<dyn Wavefunction>,
    pub cw: Box<dyn Fn(f64, f64) -> Complex64 + Sync>,
    pub x_axis: Axis,
    pub k_axis: Axis,
    /// Interval in k holding essentially all of CW(x, ·).
    pub k_window: Box<dyn Fn(f64) -> (f64, f64) + Sync>,
    /// Interval in x holding essentially all of CW(·, k).
    pub x_window: Box<dyn Fn(f64) -> (f64, f64) + Sync>,
}

const WINDOW: f64 = 14.0;

pub fn free_scenario(cfg: &PhysicalConfig, t: f64, fault: Option<Fault>) -> Result<Scenario> {
    let p = free_params(cfg, t, fault)?;
    let (xa, ka) = default_axes(cfg, 201, 201)?;
    let q = p;
    Ok(Scenario {
        name: format!("free.{}.t{}", tag_gamma(cfg.gamma), ms(t)),
        phi: Box::new(free_state(cfg, t)?),
        psi: Box::new(make_initial_state(cfg)?),
        cw: Box::new(move |x, k| eval_cw_free(&p, x, k)),
        x_axis: xa,
        k_axis: ka,
        k_window: Box::new(move |x| {
            let c = q.a5 * x / (2.0 * q.a3);
            let h = WINDOW / q.a3.sqrt();
            (c - h, c + h)
        }),
        x_window: Box::new(move |k| {
            let c = q.a5 * k / (2.0 * q.a1);
            let h = WINDOW / q.a1.sqrt();
            (c - h, c + h)
        }),
    })
}

pub fn slits_scenario(cfg: &PhysicalConfig) -> Result<Scenario> {
    let p = cw_slits_params(cfg)?;
    let scr = ScreenState::new(cfg)?;
    let (xa, ka) = default_axes(cfg, 201, 201)?;
    let b2 = p.b_width * p.b_width;
    Ok(Scenario {
        name: format!("slits.{}", tag_gamma(cfg.gamma)),
        phi: Box::new(scr.plus),
        psi: Box::new(scr.minus),
        cw: Box::new(move |x, k| eval_cw_slits(&p, x, k)),
        x_axis: xa,
        k_axis: ka,
        k_window: Box::new(move |x| {
            let c = -p.chirp * x;
            let h = WINDOW / p.b_width;
            (c - h, c + h)
        }),
        x_window: Box::new(move |k| {
            let quad = 1.0 / b2 + p.chirp * p.chirp * b2;
            let c = -k * p.chirp * b2 / quad;
            let h = WINDOW / quad.sqrt();
            (c - h, c + h)
        }),
    })
}

pub fn screen_scenario(cfg: &PhysicalConfig) -> Result<Scenario> {
    let p = cw_screen_params(cfg)?;
    let (xa, ka) = default_axes(cfg, 201, 201)?;
    Ok(Scenario {
        name: format!("screen.{}", tag_gamma(cfg.gamma)),
        phi: Box::new(ScreenState::new(cfg)?),
        psi: Box::new(make_initial_state(cfg)?),
        cw: Box::new(move |x, k| eval_cw_screen(&p, x, k)),
        x_axis: xa,
        k_axis: ka,
        k_window: Box::new(move |x| {
            let c1 = (-p.b4 * x + p.b6) / (2.0 * p.b2);
            let c2 = (-p.b4 * x - p.b6) / (2.0 * p.b2);
            let h = WINDOW / p.b2.sqrt();
            (c1.min(c2) - h, c1.max(c2) + h)
        }),
        x_window: Box::new(move |k| {
            let c1 = (-p.b4 * k + p.b5) / (2.0 * p.b3);
            let c2 = (-p.b4 * k - p.b5) / (2.0 * p.b3);
            let h = WINDOW / p.b3.sqrt();
            (c1.min(c2) - h, c1.max(c2) + h)
        }),
    })
}

/// max_x |∫CW dk - φ*ψ| relative to max |φ*ψ|, on every fourth grid column.
pub fn k_marginal_error(s: &Scenario) -> Result<f64> {
    use rayon::prelude::*;
    let xs: Vec<f64> = (0..s.x_axis.len()).step_by(4).map(|i| s.x_axis.value(i)).collect();
    let reference: Vec<Complex64> = xs.iter().map(|&x| s.phi.eval(x).conj() * s.psi.eval(x)).collect();
    let scale = reference.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let errs = xs
        .par_iter()
        .zip(&reference)
        .map(|(&x, r)| -> Result<f64> {
            let (lo, hi) = (s.k_window)(x);
            let v = integrate_1d(Axis::new(lo, hi, 401)?, |k| (s.cw)(x, k), 1e-11, scale)?;
            Ok((v - r).norm())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(errs.into_iter().fold(0.0, f64::max) / scale)
}

/// max_k |∫CW dx - conj(Fφ(-k))·Fψ(-k)| relative to its peak.
pub fn x_marginal_error(s: &Scenario) -> Result<f64> {
    use rayon::prelude::*;
    let ka = Axis::new(-s.k_axis.hi(), -s.k_axis.lo(), s.k_axis.len())?;
    let fphi = fourier_transform_fn(s.phi.as_ref(), ka)?;
    let fpsi = fourier_transform_fn(s.psi.as_ref(), ka)?;
    let n = ka.len();
    let reference: Vec<Complex64> = (0..n)
        .map(|j| {
            // sample j of the negated axis sits at -k_axis[j]
            fphi.values[j].conj() * fpsi.values[j]
        })
        .collect();
    let scale = reference.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let errs = (0..n)
        .into_par_iter()
        .map(|j| -> Result<f64> {
            let k = -ka.value(j);
            let (lo, hi) = (s.x_window)(k);
            let v = integrate_1d(Axis::new(lo, hi, 401)?, |x| (s.cw)(x, k), 1e-11, scale)?;
            Ok((v - reference[j]).norm())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(errs.into_iter().fold(0.0, f64::max) / scale)
}

/// ∫∫ CW over the default spans with nested refinement, and ⟨φ|ψ⟩.
pub fn total_and_overlap(s: &Scenario) -> Result<(Complex64, Complex64)> {
    let (total, _) = integrate_2d(s.x_axis, s.k_axis, |x, k| (s.cw)(x, k), 1e-7)?;
    Ok((total, overlap_fn(s.phi.as_ref(), s.psi.as_ref())))
}

/// Errors of ∫∫Re ρ - 1 and ∫∫Im ρ.
pub fn quasi_prob_sums(s: &Scenario) -> Result<(f64, f64)> {
    let (total, ov) = total_and_overlap(s)?;
    if ov.norm() < crate::crosswigner::MIN_OVERLAP {
        return Err(crate::Error::DegenerateOverlap { magnitude: ov.norm() });
    }
    let rho = total / ov;
    Ok(((rho.re - 1.0).abs(), rho.im.abs()))
}

/// Pointwise W_{ψ₁+ψ₂} - W_{ψ₁} - W_{ψ₂} - 2 Re CW_{ψ₁,ψ₂}, relative to peak of W_{ψ₁+ψ₂}.
pub fn interference_decomposition_error(cfg: &PhysicalConfig, nx: usize, nk: usize) -> Result<f64> {
    let (xa, ka) = default_axes(cfg, nx, nk)?;
    let scr = ScreenState::new(cfg)?;
    let sum = Sum(&scr.plus, &scr.minus);
    let w_sum = wigner_field(&sum, xa, ka)?;
    let w1 = wigner_field(&scr.plus, xa, ka)?;
    let w2 = wigner_field(&scr.minus, xa, ka)?;
    let c12 = cw_field(&scr.plus, &scr.minus, xa, ka)?;
    let peak = w_sum.peak();
    let err = (0..w_sum.values.len())
        .map(|i| (w_sum.values[i].re - w1.values[i].re - w2.values[i].re - 2.0 * c12.values[i].re).abs())
        .fold(0.0, f64::max);
    Ok(err / peak)
}

/// Largest violation of "Gouy term is a pure phase": relative |CW| mismatch
/// and deviation of the pointwise phase difference from Δμ.
pub fn gouy_pure_phase_error(with: &PhaseSpaceField, without: &PhaseSpaceField, delta: f64) -> Result<(f64, f64)> {
    let peak = with.peak();
    let mut mag: f64 = 0.0;
    let mut phase: f64 = 0.0;
    for (a, b) in with.values.iter().zip(&without.values) {
        mag = mag.max((a.norm() - b.norm()).abs() / peak);
        if b.norm() > 1e-6 * peak {
            let d = (a / b).arg() - delta;
            let wrapped = (d + PI).rem_euclid(2.0 * PI) - PI;
            phase = phase.max(wrapped.abs());
        }
    }
    if with.x_axis != without.x_axis || with.k_axis != without.k_axis {
        return Err(crate::Error::AxisMismatch("gouy comparison".into()));
    }
    Ok((mag, phase))
}

/// Kernel-quadrature ψ(t) versus the closed form on x ∈ [-5b, 5b]; max abs error.
pub fn free_propagation_error(cfg: &PhysicalConfig, t: f64) -> Result<f64> {
    let exact = free_state(cfg, t)?;
    let out = Axis::symmetric(5.0 * exact.width, 201)?;
    let num = propagate_state(cfg, &make_initial_state(cfg)?, t, &out)?;
    Ok(out
        .values()
        .iter()
        .zip(&num.values)
        .map(|(&x, v)| (v - exact.eval(x)).norm())
        .fold(0.0, f64::max))
}

/// Two-step kernel quadrature through one slit versus ψ₁ or ψ₂; max abs error.
pub fn slit_propagation_error(cfg: &PhysicalConfig, which: Slit) -> Result<f64> {
    let scr = ScreenState::new(cfg)?;
    let exact = match which {
        Slit::Plus => scr.plus,
        Slit::Minus => scr.minus,
    };
    let reach = 5.0 * exact.width + exact.center.abs();
    let out = Axis::symmetric(reach, 201)?;
    let num = propagate_through_slit(cfg, which, &out)?;
    Ok(out
        .values()
        .iter()
        .zip(&num.values)
        .map(|(&x, v)| (v - exact.eval(x)).norm())
        .fold(0.0, f64::max))
}

fn push(report: &mut Report, name: String, r: Result<f64>, tol: f64) {
    let err = r.unwrap_or(f64::INFINITY);
    report.checks.push(Check::new(name, err, tol));
}

/// Full oracle-versus-closed-form suite at the parameters of `base`
/// (its γ, t and τ are overridden by the fixed certification sets).
pub fn run(base: &PhysicalConfig, opts: &CertifyOptions) -> Result<Report> {
    base.validate()?;
    let mut r = Report::default();
    let gammas = [0.0, -1.0];
    let tt = base.t;

    for g in gammas {
        for t in [0.01, 0.05] {
            let c = base.with_gamma(g);
            push(&mut r, format!("free_cw.{}.t{}", tag_gamma(g), ms(t)), free_cw_error(&c, t, opts), 1e-6);
        }
    }
    let c0 = base.with_gamma(0.0);
    push(&mut r, "slits_cw.g0".into(), slits_cw_error(&c0, opts), 1e-6);
    for g in gammas {
        push(&mut r, format!("screen_cw.{}", tag_gamma(g)), screen_cw_error(&base.with_gamma(g), opts), 1e-5);
    }

    let mut scenarios = Vec::new();
    for g in gammas {
        scenarios.push(free_scenario(&base.with_gamma(g), tt, opts.fault)?);
    }
    scenarios.push(slits_scenario(&c0)?);
    for g in gammas {
        scenarios.push(screen_scenario(&base.with_gamma(g))?);
    }
    for s in &scenarios {
        push(&mut r, format!("marginal_k.{}", s.name), k_marginal_error(s), 1e-4);
        push(&mut r, format!("marginal_x.{}", s.name), x_marginal_error(s), 1e-4);
    }
    for s in &scenarios {
        if s.name.starts_with("slits") {
            // ψ₁ and ψ₂ are orthogonal to 1e-18 at these parameters; ρ is undefined
            continue;
        }
        match quasi_prob_sums(s) {
            Ok((re, im)) => {
                r.checks.push(Check::new(format!("rho_re.{}", s.name), re, 1e-3));
                r.checks.push(Check::new(format!("rho_im.{}", s.name), im, 1e-3));
            }
            Err(_) => {
                r.checks.push(Check::new(format!("rho_re.{}", s.name), f64::INFINITY, 1e-3));
                r.checks.push(Check::new(format!("rho_im.{}", s.name), f64::INFINITY, 1e-3));
            }
        }
    }

    push(
        &mut r,
        "interference_decomposition.g0".into(),
        interference_decomposition_error(&c0, opts.nx, opts.nk),
        1e-8,
    );

    let t0 = c0.tau0();
    let mu_lim = free_evolve(&c0, 100.0 * t0).map(|f| (f.mu + PI / 4.0).abs());
    push(&mut r, "gouy_limit.g0".into(), mu_lim, 0.01);
    let d0 = gouy_delta_free(&c0, 0.05)?.abs();
    let d1 = gouy_delta_free(&base.with_gamma(-1.0), 0.05)?.abs();
    r.checks.push(Check::flag("gouy_contractive_larger.t50ms", d1 > d0));
    let z0 = gouy_delta_free(&c0, 0.0)?;
    let z1 = gouy_delta_free(&base.with_gamma(-1.0), 0.0)?;
    r.checks.push(Check::flag("gouy_zero_at_t0", z0 == 0.0 && z1 == 0.0));

    for g in gammas {
        let c = base.with_gamma(g);
        let (xa, ka) = free_axes(&c, tt, opts.nx, opts.nk)?;
        let p = cw_free_params(&c, tt)?;
        let q = p.without_gouy();
        let a = PhaseSpaceField::from_fn(xa, ka, Provenance::Analytic, |x, k| eval_cw_free(&p, x, k));
        let b = PhaseSpaceField::from_fn(xa, ka, Provenance::Analytic, |x, k| eval_cw_free(&q, x, k));
        let (mag, ph) = gouy_pure_phase_error(&a, &b, p.delta_mu)?;
        r.checks.push(Check::new(format!("gouy_pure_phase_mag.free.{}", tag_gamma(g)), mag, 1e-12));
        r.checks.push(Check::new(format!("gouy_pure_phase_arg.free.{}", tag_gamma(g)), ph, 1e-12));

        let (xa, ka) = default_axes(&c, opts.nx, opts.nk)?;
        let p = cw_screen_params(&c)?;
        let q = p.without_gouy();
        let a = PhaseSpaceField::from_fn(xa, ka, Provenance::Analytic, |x, k| eval_cw_screen(&p, x, k));
        let b = PhaseSpaceField::from_fn(xa, ka, Provenance::Analytic, |x, k| eval_cw_screen(&q, x, k));
        let (mag, ph) = gouy_pure_phase_error(&a, &b, p.delta_mu_prime)?;
        r.checks.push(Check::new(format!("gouy_pure_phase_mag.screen.{}", tag_gamma(g)), mag, 1e-12));
        r.checks.push(Check::new(format!("gouy_pure_phase_arg.screen.{}", tag_gamma(g)), ph, 1e-12));
    }

    for g in [-1.0, 0.0, 1.0] {
        let c = base.with_gamma(g);
        for f in [0.5, 1.0, 5.0] {
            push(
                &mut r,
                format!("kernel_free.{}.t{}tau0", tag_gamma(g), f),
                free_propagation_error(&c, f * t0),
                1e-4,
            );
        }
        push(&mut r, format!("kernel_free.{}.t{}", tag_gamma(g), ms(tt)), free_propagation_error(&c, tt), 1e-4);
    }
    for g in gammas {
        let c = base.with_gamma(g);
        push(&mut r, format!("kernel_slit_plus.{}", tag_gamma(g)), slit_propagation_error(&c, Slit::Plus), 1e-4);
        push(&mut r, format!("kernel_slit_minus.{}", tag_gamma(g)), slit_propagation_error(&c, Slit::Minus), 1e-4);
    }
    Ok(r)
}
