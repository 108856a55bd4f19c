//! Uniform axes and trapezoid sums.

use crate::{Complex64, Error, Result};
use rayon::prelude::*;

/// Uniform, strictly increasing sample axis.
///
/// Stored by its endpoints so that a file carrying the sample values
/// reconstructs exactly the same axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    lo: f64,
    hi: f64,
    n: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::config("axis", format!("need at least 2 points, got {n}")));
        }
        if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
            return Err(Error::config("axis", format!("bounds [{lo:e}, {hi:e}] are not increasing")));
        }
        Ok(Axis { lo, hi, n })
    }

    pub fn symmetric(half_width: f64, n: usize) -> Result<Self> {
        Axis::new(-half_width, half_width, n)
    }

    /// Rebuild an axis from explicit samples, checking uniformity.
    pub fn from_values(v: &[f64]) -> Result<Self> {
        let ax = Axis::new(*v.first().unwrap_or(&0.0), *v.last().unwrap_or(&0.0), v.len())?;
        let tol = 1e-9 * ax.step();
        for (i, &x) in v.iter().enumerate() {
            if (x - ax.value(i)).abs() > tol {
                return Err(Error::AxisMismatch(format!("sample {i} ({x:e}) breaks uniform spacing")));
            }
        }
        Ok(ax)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * (i as f64 / (self.n - 1) as f64)
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.value(i)).collect()
    }

    /// Same span with every interval halved.
    pub fn refined(&self) -> Axis {
        Axis {
            lo: self.lo,
            hi: self.hi,
            n: 2 * self.n - 1,
        }
    }

    /// Interval index and fractional offset for linear interpolation.
    pub fn locate(&self, x: f64) -> Option<(usize, f64)> {
        if !(x >= self.lo && x <= self.hi) {
            return None;
        }
        let f = (x - self.lo) / self.step();
        let i = (f.floor() as usize).min(self.n - 2);
        Some((i, f - i as f64))
    }

    /// Trapezoid weight of sample `i` (step included).
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.n {
            0.5 * self.step()
        } else {
            self.step()
        }
    }
}

/// Trapezoid sum of equally spaced samples.
pub fn trapezoid(values: &[Complex64], h: f64) -> Complex64 {
    match values.len() {
        0 | 1 => Complex64::new(0.0, 0.0),
        n => {
            let inner: Complex64 = values[1..n - 1].iter().sum();
            (inner + 0.5 * (values[0] + values[n - 1])) * h
        }
    }
}

fn sum_2d<F>(x: &Axis, k: &Axis, f: &F) -> Complex64
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    let rows: Vec<Complex64> = (0..x.len())
        .into_par_iter()
        .map(|i| {
            let xv = x.value(i);
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..k.len() {
                acc += f(xv, k.value(j)) * k.weight(j);
            }
            acc * x.weight(i)
        })
        .collect();
    rows.iter().sum()
}

/// Double integral over the rectangle spanned by `x` and `k`, starting at
/// their resolution and halving both steps until two successive trapezoid
/// sums agree to `tol` (absolute, scaled by max(1, |I|)).
///
/// Returns the converged value and the points per axis of the last level.
pub fn integrate_2d<F>(x: Axis, k: Axis, f: F, tol: f64) -> Result<(Complex64, usize)>
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    let (mut x, mut k) = (x, k);
    let mut prev = sum_2d(&x, &k, &f);
    for _ in 0..6 {
        x = x.refined();
        k = k.refined();
        let cur = sum_2d(&x, &k, &f);
        if (cur - prev).norm() <= tol * cur.norm().max(1.0) {
            return Ok((cur, x.len()));
        }
        prev = cur;
    }
    Err(Error::Inconsistent(format!(
        "double integral not converged at {} points per axis",
        x.len()
    )))
}

/// One-dimensional analogue of [`integrate_2d`]; `scale` sets the absolute
/// tolerance `tol * scale`.
pub fn integrate_1d<F>(x: Axis, f: F, tol: f64, scale: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let sum = |ax: &Axis| -> Complex64 { (0..ax.len()).map(|i| f(ax.value(i)) * ax.weight(i)).sum() };
    let mut ax = x;
    let mut prev = sum(&ax);
    for _ in 0..10 {
        ax = ax.refined();
        let cur = sum(&ax);
        if (cur - prev).norm() <= tol * scale {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Inconsistent(format!("integral not converged at {} points", ax.len())))
}
