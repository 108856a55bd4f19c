//! Intensity sinograms and filtered backprojection into phase space.
//!
//! The state leaving the slits is f(x)·e^{icx²/2} with f real. Removing
//! the chirp and scaling by s = (1/β² + 1/b²)^{-1/2} turns free flight for
//! a time τ into a rotation of the exit-plane Wigner function by
//! θ(τ) = atan2(κ, 1 + c′κ), κ = ħτ/(m s²), c′ = c s², with the detector
//! magnified by L = √((1 + c′κ)² + κ²). Only θ < atan2(1, c′) < π/2 is
//! reachable; the other half of the angular range comes from the mirror
//! symmetry of a real-envelope state.

use crate::crosswigner::{PhaseSpaceField, Provenance};
use crate::grid::Axis;
use crate::propagation::{slit_evolve, ScreenState};
use crate::states::PhysicalConfig;
use crate::{Complex64, Error, Result};
use rayon::prelude::*;
use rustfft::FftPlanner;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SinogramKind {
    Intensity,
    Interference,
}

/// Detector rows I(x, τ).
///
/// Sample `(i, j)` sits at physical position `x_axis[j] * row_scale[i]`,
/// which lets each row follow the spreading beam.
#[derive(Clone, Debug, PartialEq)]
pub struct Sinogram {
    pub x_axis: Axis,
    pub tau_axis: Vec<f64>,
    pub row_scale: Vec<f64>,
    /// Row-major, one row per τ.
    pub values: Vec<f64>,
    pub kind: SinogramKind,
    /// √(2 + 2⟨ψ₁|ψ₂⟩) at each τ; intensity rows are divided by its square.
    pub screen_norm: Vec<f64>,
}

impl Sinogram {
    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.x_axis.len();
        &self.values[i * n..(i + 1) * n]
    }
}

fn check_taus(tau_list: &[f64]) -> Result<()> {
    if tau_list.is_empty() {
        return Err(Error::config("tau", "empty list"));
    }
    for w in tau_list.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::config("tau", "list must be strictly increasing"));
        }
    }
    if !(tau_list[0] >= 0.0) || !tau_list.iter().all(|t| t.is_finite()) {
        return Err(Error::config("tau", "times must be finite and >= 0"));
    }
    Ok(())
}

fn rows<F>(cfg: &PhysicalConfig, x_axis: &Axis, tau_list: &[f64], row_scale: &[f64], f: F) -> Result<(Vec<f64>, Vec<f64>)>
where
    F: Fn(&ScreenState, f64) -> Result<f64> + Sync,
{
    check_taus(tau_list)?;
    if row_scale.len() != tau_list.len() {
        return Err(Error::AxisMismatch("one row scale per tau".into()));
    }
    let xs = x_axis.values();
    let per_row = tau_list
        .par_iter()
        .zip(row_scale)
        .map(|(&tau, &scale)| -> Result<(Vec<f64>, f64)> {
            let scr = ScreenState::new(&PhysicalConfig { tau, ..*cfg })?;
            let row = xs.iter().map(|&x| f(&scr, x * scale)).collect::<Result<Vec<_>>>()?;
            Ok((row, scr.norm))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut values = Vec::with_capacity(xs.len() * tau_list.len());
    let mut norms = Vec::with_capacity(tau_list.len());
    for (r, n) in per_row {
        values.extend(r);
        norms.push(n);
    }
    Ok((values, norms))
}

/// |Ψ(x, t, τ)|² rows with per-row detector scaling.
pub fn intensity_sinogram_scaled(cfg: &PhysicalConfig, x_axis: Axis, tau_list: &[f64], row_scale: &[f64]) -> Result<Sinogram> {
    let (values, screen_norm) = rows(cfg, &x_axis, tau_list, row_scale, |s, x| Ok(s.eval(x).norm_sqr()))?;
    Ok(Sinogram {
        x_axis,
        tau_axis: tau_list.to_vec(),
        row_scale: row_scale.to_vec(),
        values,
        kind: SinogramKind::Intensity,
        screen_norm,
    })
}

pub fn intensity_sinogram(cfg: &PhysicalConfig, x_axis: Axis, tau_list: &[f64]) -> Result<Sinogram> {
    intensity_sinogram_scaled(cfg, x_axis, tau_list, &vec![1.0; tau_list.len()])
}

/// Closed form 2√(I₁I₂)·cos(2Δx) of the interference term.
fn interference_closed(s: &ScreenState, x: f64) -> f64 {
    let i1 = s.plus.eval(x).norm_sqr();
    let i2 = s.minus.eval(x).norm_sqr();
    2.0 * (i1 * i2).sqrt() * (2.0 * s.slit.delta * x).cos()
}

/// |ψ₁+ψ₂|² − |ψ₁|² − |ψ₂|², checked against 2√(I₁I₂)cos(2Δx).
pub fn interference_term_scaled(cfg: &PhysicalConfig, x_axis: Axis, tau_list: &[f64], row_scale: &[f64]) -> Result<Sinogram> {
    let (values, screen_norm) = rows(cfg, &x_axis, tau_list, row_scale, |s, x| {
        let (a, b) = (s.plus.eval(x), s.minus.eval(x));
        let sub = (a + b).norm_sqr() - a.norm_sqr() - b.norm_sqr();
        let closed = interference_closed(s, x);
        let scale = s.plus.norm.norm_sqr() + s.minus.norm.norm_sqr();
        if (sub - closed).abs() > 1e-8 * scale {
            return Err(Error::Inconsistent(format!(
                "interference term {sub:e} disagrees with 2√(I₁I₂)cos(2Δx) = {closed:e} at x = {x:e}"
            )));
        }
        Ok(sub)
    })?;
    Ok(Sinogram {
        x_axis,
        tau_axis: tau_list.to_vec(),
        row_scale: row_scale.to_vec(),
        values,
        kind: SinogramKind::Interference,
        screen_norm,
    })
}

pub fn interference_term(cfg: &PhysicalConfig, x_axis: Axis, tau_list: &[f64]) -> Result<Sinogram> {
    interference_term_scaled(cfg, x_axis, tau_list, &vec![1.0; tau_list.len()])
}

/// Time-to-angle map of the chirp-removed, rescaled exit plane.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleMap {
    /// s, metres per dimensionless unit of x.
    pub scale_x: f64,
    /// 1/s.
    pub scale_k: f64,
    /// Exit-plane chirp c, 1/m².
    pub chirp: f64,
    /// c′ = c s².
    pub chirp_scaled: f64,
    /// κ per second, ħ/(m s²).
    pub kappa_rate: f64,
    pub tau: Vec<f64>,
    pub theta: Vec<f64>,
    /// Detector magnification L per row.
    pub magnification: Vec<f64>,
    /// Supremum of reachable angles, atan2(1, c′).
    pub theta_max: f64,
}

impl AngleMap {
    /// Frame for `cfg` with no rows yet.
    pub fn frame(cfg: &PhysicalConfig) -> Result<Self> {
        let s = slit_evolve(cfg)?;
        let b = s.free.b;
        let scale = (1.0 / (cfg.beta * cfg.beta) + 1.0 / (b * b)).powf(-0.5);
        let chirp = s.free.chirp;
        let cs = chirp * scale * scale;
        Ok(AngleMap {
            scale_x: scale,
            scale_k: 1.0 / scale,
            chirp,
            chirp_scaled: cs,
            kappa_rate: cfg.hbar / (cfg.mass * scale * scale),
            tau: Vec::new(),
            theta: Vec::new(),
            magnification: Vec::new(),
            theta_max: 1f64.atan2(cs),
        })
    }

    pub fn theta_of(&self, tau: f64) -> f64 {
        let k = self.kappa_rate * tau;
        k.atan2(1.0 + self.chirp_scaled * k)
    }

    pub fn magnification_of(&self, tau: f64) -> f64 {
        let k = self.kappa_rate * tau;
        (1.0 + self.chirp_scaled * k).hypot(k)
    }

    /// Flight time that realizes angle θ ∈ [0, θ_max).
    pub fn tau_of(&self, theta: f64) -> Result<f64> {
        if !(0.0..self.theta_max).contains(&theta) {
            return Err(Error::Coverage {
                span_deg: theta.to_degrees(),
                required_deg: self.theta_max.to_degrees(),
            });
        }
        let t = theta.tan();
        Ok(t / (1.0 - self.chirp_scaled * t) / self.kappa_rate)
    }

    /// Dimensionless exit-plane coordinates of the point (x, k) observed at
    /// flight time `tau_ref`.
    pub fn to_dimensionless(&self, cfg: &PhysicalConfig, x: f64, k: f64, tau_ref: f64) -> (f64, f64) {
        let p = -k;
        let u = x - cfg.hbar * tau_ref / cfg.mass * p;
        let w = p - self.chirp * u;
        (u / self.scale_x, w * self.scale_x)
    }
}

pub fn angle_map(cfg: &PhysicalConfig, tau_list: &[f64]) -> Result<AngleMap> {
    check_taus(tau_list)?;
    let mut m = AngleMap::frame(cfg)?;
    m.tau = tau_list.to_vec();
    m.theta = tau_list.iter().map(|&t| m.theta_of(t)).collect();
    m.magnification = tau_list.iter().map(|&t| m.magnification_of(t)).collect();
    for w in m.theta.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::config("tau", "angle map is not strictly increasing over the window"));
        }
    }
    Ok(m)
}

/// `n` flight times whose angles sit at the midpoints of n equal steps
/// between θ(lo) and θ(hi).
pub fn tau_window(cfg: &PhysicalConfig, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::config("tau-window", "need at least 2 projections"));
    }
    if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::config("tau-window", format!("need 0 <= lo < hi, got {lo:e}, {hi:e}")));
    }
    let m = AngleMap::frame(cfg)?;
    let (a, b) = (m.theta_of(lo), m.theta_of(hi));
    let d = (b - a) / n as f64;
    (0..n).map(|i| m.tau_of(a + (i as f64 + 0.5) * d)).collect()
}

/// θ-mapped projections P_θ(σ) of the dimensionless exit-plane field.
#[derive(Clone, Debug, PartialEq)]
pub struct Projections {
    pub theta: Vec<f64>,
    pub sigma: Axis,
    /// Row-major, one row per θ.
    pub values: Vec<f64>,
}

impl Projections {
    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.sigma.len();
        &self.values[i * n..(i + 1) * n]
    }

    /// Explicit mirror set: every row also at -θ.
    pub fn mirrored(&self) -> Projections {
        let mut theta = Vec::with_capacity(2 * self.theta.len());
        let mut values = Vec::with_capacity(2 * self.values.len());
        for i in (0..self.theta.len()).rev() {
            theta.push(-self.theta[i]);
            values.extend_from_slice(self.row(i));
        }
        theta.extend_from_slice(&self.theta);
        values.extend_from_slice(&self.values);
        Projections {
            theta,
            sigma: self.sigma,
            values,
        }
    }
}

/// P_θ(σ) = s·L·I(σ·s·L), reading each sinogram row by linear interpolation.
pub fn project(sino: &Sinogram, map: &AngleMap, sigma: Axis) -> Result<Projections> {
    if sino.tau_axis != map.tau {
        return Err(Error::AxisMismatch("sinogram and angle map use different tau".into()));
    }
    let n = sigma.len();
    let mut values = vec![0.0; n * sino.tau_axis.len()];
    for (i, out) in values.chunks_mut(n).enumerate() {
        let sl = map.scale_x * map.magnification[i];
        let row = sino.row(i);
        for (j, o) in out.iter_mut().enumerate() {
            let det = sigma.value(j) * sl / sino.row_scale[i];
            *o = match sino.x_axis.locate(det) {
                Some((a, f)) => sl * (row[a] * (1.0 - f) + row[a + 1] * f),
                None => 0.0,
            };
        }
    }
    Ok(Projections {
        theta: map.theta.clone(),
        sigma,
        values,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FbpOptions {
    /// Raised-cosine roll-off of the ramp reaching zero at Nyquist.
    pub window: bool,
    /// Backprojection is zeroed outside this radius (dimensionless units).
    pub fov: Option<f64>,
    /// Largest tolerated hole in the completed angular range, degrees.
    pub max_gap_deg: f64,
}

impl Default for FbpOptions {
    fn default() -> Self {
        FbpOptions {
            window: true,
            fov: Some(15.0),
            max_gap_deg: 5.0,
        }
    }
}

/// Band-limited ramp filter in its spatial form, applied by zero-padded FFT.
pub fn ramp_filter(rows: &[f64], n: usize, step: f64, window: bool) -> Vec<f64> {
    let mut m = 1;
    while m < 2 * n {
        m *= 2;
    }
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(m);

    let mut h: Vec<Complex64> = (0..m)
        .map(|i| {
            let k = if i < m / 2 { i as i64 } else { i as i64 - m as i64 };
            let v = if k == 0 {
                1.0 / (4.0 * step * step)
            } else if k % 2 != 0 {
                -1.0 / ((k * k) as f64 * PI * PI * step * step)
            } else {
                0.0
            };
            Complex64::new(v, 0.0)
        })
        .collect();
    fwd.process(&mut h);
    if window {
        for (i, v) in h.iter_mut().enumerate() {
            let f = if i < m / 2 { i as f64 } else { i as f64 - m as f64 } / m as f64;
            *v *= 0.5 * (1.0 + (2.0 * PI * f).cos());
        }
    }

    let mut out = vec![0.0; rows.len()];
    out.par_chunks_mut(n).enumerate().for_each(|(r, dst)| {
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for (b, &v) in buf.iter_mut().zip(&rows[r * n..(r + 1) * n]) {
            b.re = v;
        }
        let mut planner = FftPlanner::<f64>::new();
        planner.plan_fft_forward(m).process(&mut buf);
        for (b, hv) in buf.iter_mut().zip(&h) {
            *b *= hv.re;
        }
        planner.plan_fft_inverse(m).process(&mut buf);
        for (d, b) in dst.iter_mut().zip(&buf) {
            *d = b.re / m as f64 * step;
        }
    });
    out
}

/// π minus the largest angular hole, angles taken modulo π. Non-negative
/// sets are mirrored first.
pub fn coverage(theta: &[f64]) -> f64 {
    if theta.len() < 2 {
        return 0.0;
    }
    let mut t: Vec<f64> = theta.to_vec();
    if t.iter().all(|&v| v >= 0.0) {
        t.extend(theta.iter().map(|v| -v));
    }
    let mut t: Vec<f64> = t.into_iter().map(|v| v.rem_euclid(PI)).collect();
    t.sort_by(f64::total_cmp);
    let wrap = t[0] + PI - t[t.len() - 1];
    let gap = t.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max);
    PI - gap
}

/// Filtered backprojection evaluated at dimensionless points (U, W).
///
/// When every angle is non-negative the set is completed with the mirror
/// rows at -θ before filtering.
pub fn inverse_radon(proj: &Projections, points: &[(f64, f64)], opts: &FbpOptions) -> Result<Vec<f64>> {
    let full = if proj.theta.iter().all(|&t| t >= 0.0) {
        proj.mirrored()
    } else {
        proj.clone()
    };
    for w in full.theta.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::config("theta", "projection angles must be distinct and increasing"));
        }
    }
    let span = coverage(&full.theta);
    let required = PI - opts.max_gap_deg.to_radians();
    if span < required {
        return Err(Error::Coverage {
            span_deg: span.to_degrees(),
            required_deg: required.to_degrees(),
        });
    }

    let n = full.sigma.len();
    let step = full.sigma.step();
    let q = ramp_filter(&full.values, n, step, opts.window);
    let th = &full.theta;
    let weights: Vec<f64> = (0..th.len())
        .map(|i| {
            let lo = if i == 0 { th[1] - th[0] } else { th[i] - th[i - 1] };
            let hi = if i + 1 == th.len() { th[i] - th[i - 1] } else { th[i + 1] - th[i] };
            0.5 * (lo + hi)
        })
        .collect();
    let trig: Vec<(f64, f64)> = th.iter().map(|t| t.sin_cos()).collect();
    let sigma = full.sigma;
    let fov2 = opts.fov.map(|f| f * f);

    Ok(points
        .par_iter()
        .map(|&(u, w)| {
            if let Some(r2) = fov2 {
                if u * u + w * w > r2 {
                    return 0.0;
                }
            }
            let mut acc = 0.0;
            for (i, &(s, c)) in trig.iter().enumerate() {
                if let Some((a, f)) = sigma.locate(u * c + w * s) {
                    let row = &q[i * n..(i + 1) * n];
                    acc += weights[i] * (row[a] * (1.0 - f) + row[a + 1] * f);
                }
            }
            acc
        })
        .collect())
}

/// Parameters of the full pipeline.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TomographyOptions {
    /// Dimensionless detector half-width.
    pub sigma_max: f64,
    pub n_sigma: usize,
    pub fbp: FbpOptions,
}

impl Default for TomographyOptions {
    fn default() -> Self {
        TomographyOptions {
            sigma_max: 30.0,
            n_sigma: 2048,
            fbp: FbpOptions::default(),
        }
    }
}

/// Sinogram recorded on a magnified detector that tracks θ, its angle map
/// and the projections.
pub fn measure(cfg: &PhysicalConfig, tau_list: &[f64], kind: SinogramKind, opts: &TomographyOptions) -> Result<(Sinogram, AngleMap, Projections)> {
    let map = angle_map(cfg, tau_list)?;
    let sigma = Axis::symmetric(opts.sigma_max, opts.n_sigma)?;
    let det = Axis::symmetric(opts.sigma_max * map.scale_x, opts.n_sigma)?;
    let sino = match kind {
        SinogramKind::Intensity => intensity_sinogram_scaled(cfg, det, tau_list, &map.magnification)?,
        SinogramKind::Interference => interference_term_scaled(cfg, det, tau_list, &map.magnification)?,
    };
    let proj = project(&sino, &map, sigma)?;
    Ok((sino, map, proj))
}

/// Backproject onto an (x, k) grid observed at the screen time `cfg.tau`.
pub fn backproject_grid(cfg: &PhysicalConfig, proj: &Projections, map: &AngleMap, x_axis: Axis, k_axis: Axis, opts: &FbpOptions) -> Result<PhaseSpaceField> {
    let mut pts = Vec::with_capacity(x_axis.len() * k_axis.len());
    for i in 0..x_axis.len() {
        for j in 0..k_axis.len() {
            pts.push(map.to_dimensionless(cfg, x_axis.value(i), k_axis.value(j), cfg.tau));
        }
    }
    let v = inverse_radon(proj, &pts, opts)?;
    PhaseSpaceField::new(
        x_axis,
        k_axis,
        v.into_iter().map(|r| Complex64::new(r, 0.0)).collect(),
        Provenance::Reconstructed,
    )
}

/// Wigner function of the screen state from its intensity sinogram.
pub fn reconstruct_wigner(cfg: &PhysicalConfig, tau_list: &[f64], x_axis: Axis, k_axis: Axis, opts: &TomographyOptions) -> Result<(PhaseSpaceField, AngleMap)> {
    let (_, map, proj) = measure(cfg, tau_list, SinogramKind::Intensity, opts)?;
    Ok((backproject_grid(cfg, &proj, &map, x_axis, k_axis, &opts.fbp)?, map))
}

/// Re CW_{ψ₁,ψ₂} from the interference sinogram (half the backprojection).
pub fn reconstruct_cw(cfg: &PhysicalConfig, tau_list: &[f64], x_axis: Axis, k_axis: Axis, opts: &TomographyOptions) -> Result<(PhaseSpaceField, AngleMap)> {
    let (_, map, proj) = measure(cfg, tau_list, SinogramKind::Interference, opts)?;
    let f = backproject_grid(cfg, &proj, &map, x_axis, k_axis, &opts.fbp)?;
    Ok((f.map(|v| v * 0.5), map))
}

/// Inner half of each axis.
pub fn central_region(nx: usize, nk: usize) -> (std::ops::Range<usize>, std::ops::Range<usize>) {
    (nx / 4..nx - nx / 4, nk / 4..nk - nk / 4)
}

/// ‖rec − ref‖₂ / ‖ref‖₂ over the real parts in the central region.
pub fn l2_relative_error(rec: &PhaseSpaceField, reference: &PhaseSpaceField) -> Result<f64> {
    if rec.x_axis != reference.x_axis || rec.k_axis != reference.k_axis {
        return Err(Error::AxisMismatch("l2 error needs a shared grid".into()));
    }
    let (ri, rj) = central_region(rec.nx(), rec.nk());
    let (mut num, mut den) = (0.0, 0.0);
    for i in ri {
        for j in rj.clone() {
            let a = rec.get(i, j).re;
            let b = reference.get(i, j).re;
            num += (a - b) * (a - b);
            den += b * b;
        }
    }
    Ok((num / den).sqrt())
}
