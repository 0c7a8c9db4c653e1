//! Tanh-sinh (double-exponential) quadrature.
//!
//! `x = c + h·tanh(π/2·sinh t)` maps `t ∈ ℝ` onto `(a, b)`; the Jacobian
//! decays double-exponentially, which swamps algebraic endpoint
//! singularities. The step in `t` is halved each level, reusing all
//! previous abscissae.

use std::f64::consts::FRAC_PI_2;

use super::{QuadAccuracy, QuadResult, QuadValue};
use crate::{Error, Result};

/// Hard cap on the number of step halvings.
pub const MAX_DE_LEVELS: usize = 12;

// Beyond this the endpoint distance underflows for unit half-widths.
const T_MAX: f64 = 6.2;
const MIN_LEVELS: usize = 3;

/// Abscissa pair at parameter `t > 0`: returns `(weight, complement)` where
/// `complement = 1 − tanh(π/2·sinh t)`, computed without cancellation.
#[inline]
fn node(t: f64) -> (f64, f64) {
    let u = FRAC_PI_2 * t.sinh();
    let e2 = (-2.0 * u).exp();
    let denom = 1.0 + e2;
    let complement = 2.0 * e2 / denom;
    let weight = FRAC_PI_2 * t.cosh() * 4.0 * e2 / (denom * denom);
    (weight, complement)
}

/// Tanh-sinh with endpoint distances passed to the integrand.
///
/// `f(x, x − a, b − x)`: the two distances are exact even where `x` itself
/// has rounded onto an endpoint, so integrands singular at `a` or `b` can be
/// written in terms of them.
pub fn integrate_double_exponential_complement<T, F>(
    mut f: F,
    a: f64,
    b: f64,
    acc: &QuadAccuracy,
) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: FnMut(f64, f64, f64) -> T,
{
    acc.validate()?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidArgument(format!(
            "need finite a < b, got [{a}, {b}]"
        )));
    }
    let half = 0.5 * (b - a);
    let width = b - a;
    let mut evaluations = 0usize;

    // Sum of weight·f over the nodes ±t.
    let mut pair_sum = |t: f64, evaluations: &mut usize| -> Result<T> {
        if t == 0.0 {
            let x = a + half;
            let v = f(x, half, half);
            *evaluations += 1;
            return if v.is_finite_value() {
                Ok(v * FRAC_PI_2)
            } else {
                Err(Error::NonFinite { at: x })
            };
        }
        let (w, c) = node(t);
        let d = half * c;
        if w == 0.0 || d < f64::MIN_POSITIVE {
            return Ok(T::default());
        }
        let far = width - d;
        let xl = a + d;
        let xr = b - d;
        let vl = f(xl, d, far);
        let vr = f(xr, far, d);
        *evaluations += 2;
        if !vl.is_finite_value() {
            return Err(Error::NonFinite { at: xl });
        }
        if !vr.is_finite_value() {
            return Err(Error::NonFinite { at: xr });
        }
        Ok((vl + vr) * w)
    };

    let mut step = 1.0;
    let mut sum = T::default();
    let mut k = 0usize;
    while k as f64 * step <= T_MAX {
        sum = sum + pair_sum(k as f64 * step, &mut evaluations)?;
        k += 1;
    }
    let mut estimate = sum * (step * half);
    let mut err = f64::INFINITY;

    for level in 1..MAX_DE_LEVELS {
        step *= 0.5;
        let mut k = 1usize;
        while k as f64 * step <= T_MAX {
            sum = sum + pair_sum(k as f64 * step, &mut evaluations)?;
            k += 2;
        }
        let next = sum * (step * half);
        err = (next - estimate).magnitude();
        estimate = next;
        if level + 1 >= MIN_LEVELS && err <= acc.target(estimate.magnitude()) {
            return Ok(QuadResult {
                value: estimate,
                err_estimate: err,
                evaluations,
            });
        }
    }
    Err(Error::LevelsExhausted {
        value: estimate.to_complex(),
        err_estimate: err,
    })
}

/// `∫_a^b f` for `f` with at worst integrable algebraic endpoint
/// singularities. Abscissae that round onto an endpoint are skipped.
pub fn integrate_double_exponential<T, F>(
    mut f: F,
    a: f64,
    b: f64,
    acc: &QuadAccuracy,
) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    integrate_double_exponential_complement(
        |x, _, _| {
            if x <= a || x >= b {
                T::default()
            } else {
                f(x)
            }
        },
        a,
        b,
        acc,
    )
}
