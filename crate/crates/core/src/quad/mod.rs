//! Quadrature engines.
//!
//! * [`integrate_adaptive`]: globally adaptive 7/15-point Gauss–Kronrod on a
//!   finite interval.
//! * [`integrate_double_exponential`]: tanh-sinh for integrable endpoint
//!   singularities.
//! * [`laguerre_rule`]: generalized Gauss–Laguerre rules for the weight
//!   `w^α e^{−w}` on `(0, ∞)`.
//! * [`integrate_real_line`]: `∫_ℝ` via truncation at a radius taken from a
//!   [`TailBound`] or from geometric probing.

mod adaptive;
mod double_exponential;
mod laguerre;
mod real_line;

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

pub use adaptive::{
    integrate_adaptive, integrate_adaptive_points, try_integrate_adaptive,
    try_integrate_adaptive_points,
};
pub use double_exponential::{
    integrate_double_exponential, integrate_double_exponential_complement, MAX_DE_LEVELS,
};
pub use laguerre::{laguerre_rule, laguerre_rule_shared, LaguerreRule};
pub use real_line::{integrate_real_line, try_integrate_real_line, TailBound};

use crate::{Error, Result};

/// Requested accuracy for the adaptive engines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadAccuracy {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadAccuracy {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
        }
    }
}

impl QuadAccuracy {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let acc = Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        };
        acc.validate()?;
        Ok(acc)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |t: f64| t.is_finite() && t > 0.0;
        if !ok(self.abs_tol) || !ok(self.rel_tol) || self.max_subdivisions == 0 {
            return Err(Error::InvalidArgument(format!(
                "tolerances must be finite and positive, subdivisions > 0: {self:?}"
            )));
        }
        Ok(())
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }

    /// The tolerance the result must satisfy given its magnitude.
    #[inline]
    pub fn target(&self, magnitude: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * magnitude)
    }
}

/// An integral together with its error estimate and evaluation count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub err_estimate: f64,
    pub evaluations: usize,
}

/// Values an integrand may return: real or complex.
pub trait QuadValue:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync
{
    fn magnitude(&self) -> f64;
    fn is_finite_value(&self) -> bool;
    fn to_complex(&self) -> Complex64;
}

impl QuadValue for f64 {
    #[inline]
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    #[inline]
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
    #[inline]
    fn to_complex(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
}

impl QuadValue for Complex64 {
    #[inline]
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    #[inline]
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    #[inline]
    fn to_complex(&self) -> Complex64 {
        *self
    }
}
