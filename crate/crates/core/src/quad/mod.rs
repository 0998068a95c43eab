//! Quadrature engines.
//!
//! Adaptive Gauss-Kronrod on finite intervals and on the half-line (split and
//! power-mapped onto the unit interval), iterated quarter-plane integration,
//! and vertical-contour integration with envelope-driven truncation and
//! extrapolated oscillatory tails.

mod accel;
mod contour;
mod gk;

pub use accel::{oscillatory_tail, wynn_epsilon, TailResult};
pub use contour::{integrate_contour, Convergence, ContourPolicy, ContourSpec, Envelope};
pub(crate) use gk::adapt;
pub use gk::{
    integrate_finite, integrate_halfline, integrate_halfline_with, integrate_quarterplane,
    integrate_quarterplane_with, HalfLine,
};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Value of an integral with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub err_abs: f64,
    pub evals: usize,
    pub converged: bool,
}

impl QuadResult {
    pub fn zero() -> Self {
        QuadResult { value: Complex64::new(0.0, 0.0), err_abs: 0.0, evals: 0, converged: true }
    }

    /// Turns a non-converged result into `Error::NonConvergence`.
    pub fn ensure_converged(self, level: &str) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NonConvergence { level: level.to_string(), estimate: self.value.norm(), err_abs: self.err_abs })
        }
    }

    /// Relative error estimate.
    pub fn rel_err(&self) -> f64 {
        if self.value.norm() > 0.0 {
            self.err_abs / self.value.norm()
        } else {
            self.err_abs
        }
    }

    pub fn scale(self, k: Complex64) -> Self {
        QuadResult { value: self.value * k, err_abs: self.err_abs * k.norm(), ..self }
    }
}

/// Absolute and relative accuracy request.
///
/// The effective target is max(abs, rel |I|), never below the round-off floor
/// 100 eps int |f|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel }
    }

    pub fn rel(rel: f64) -> Self {
        Tolerance { abs: 0.0, rel }
    }

    pub(crate) fn target(&self, value: f64, resabs: f64) -> f64 {
        self.abs.max(self.rel * value).max(100.0 * f64::EPSILON * resabs)
    }
}

impl From<f64> for Tolerance {
    fn from(rel: f64) -> Self {
        Tolerance::rel(rel)
    }
}
