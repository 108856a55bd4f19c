//! Cross-Wigner distributions of correlated Gaussian matter waves.
//!
//! The crate evaluates closed-form cross-Wigner functions for free evolution
//! and for a Gaussian double slit, the Gouy-phase differences they carry, and
//! checks all of it against brute-force quadrature. A filtered-backprojection
//! pipeline recovers phase-space fields from intensity sinograms.
//!
//! Units are SI throughout. The cross-Wigner convention is
//! `CW(x,k) = (1/2π) ∫ dy e^{-iky} φ*(x+y/2) ψ(x-y/2)`.

// `!(a > b)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod cli;
pub mod crosswigner;
pub mod error;
pub mod grid;
pub mod io;
pub mod oracle;
pub mod propagation;
pub mod reconstruction;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64;
