//! Integration over the whole real line by truncation.

use std::f64::consts::PI;

use statrs::function::erf::erfc;

use super::{try_integrate_adaptive_points, QuadAccuracy, QuadResult, QuadValue};
use crate::{Error, Result};

const MAX_RADIUS: f64 = 1e8;
const MAX_PROBE_DOUBLINGS: i32 = 40;
// probed tail mass must sit this far below abs_tol
const PROBE_SAFETY: f64 = 1e-3;
// share of abs_tol given to an analytic tail bound
const TAIL_SHARE: f64 = 0.1;

/// Analytic bound on `|f(x)|` for large `|x|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailBound {
    /// `f(x) = 0` for `|x| > radius`.
    Compact { radius: f64 },
    /// `|f(x)| ≤ amplitude · exp(−x²/(2·width²))`.
    Gaussian { amplitude: f64, width: f64 },
    /// `|f(x)| ≤ amplitude · exp(−rate·|x|)`.
    Exponential { amplitude: f64, rate: f64 },
    /// `|f(x)| ≤ amplitude · exp(−rate·√|x|)`.
    StretchedExponential { amplitude: f64, rate: f64 },
    /// `|f(x)| ≤ amplitude · |x|^{−power}` for `|x| ≥ 1`, `power > 1`.
    Algebraic { amplitude: f64, power: f64 },
}

impl TailBound {
    /// Bound on `∫_{|x|>radius} |f|`.
    pub fn mass_beyond(&self, radius: f64) -> f64 {
        match *self {
            TailBound::Compact { radius: r } => {
                if radius >= r {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            TailBound::Gaussian { amplitude, width } => {
                amplitude * width * (2.0 * PI).sqrt() * erfc(radius / (width * 2f64.sqrt()))
            }
            TailBound::Exponential { amplitude, rate } => {
                2.0 * amplitude * (-rate * radius).exp() / rate
            }
            TailBound::StretchedExponential { amplitude, rate } => {
                let s = rate * radius.max(0.0).sqrt();
                4.0 * amplitude * (1.0 + s) * (-s).exp() / (rate * rate)
            }
            TailBound::Algebraic { amplitude, power } => {
                if radius < 1.0 {
                    f64::INFINITY
                } else {
                    2.0 * amplitude * radius.powf(1.0 - power) / (power - 1.0)
                }
            }
        }
    }

    /// Smallest radius (to within a few percent) whose omitted mass is
    /// below `eps`.
    pub fn radius_for(&self, eps: f64) -> Result<f64> {
        if let TailBound::Compact { radius } = *self {
            return Ok(radius);
        }
        let mut hi = 1.0;
        while self.mass_beyond(hi) > eps {
            hi *= 2.0;
            if hi > MAX_RADIUS {
                return Err(Error::TailBoundUnavailable);
            }
        }
        let mut lo = 0.5 * hi;
        while hi - lo > 0.02 * hi {
            let mid = 0.5 * (lo + hi);
            if self.mass_beyond(mid) > eps {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(hi)
    }

    /// The bound for `g·f` when `|g| ≤ factor`.
    pub fn scaled(self, factor: f64) -> Self {
        match self {
            TailBound::Compact { .. } => self,
            TailBound::Gaussian { amplitude, width } => TailBound::Gaussian {
                amplitude: amplitude * factor,
                width,
            },
            TailBound::Exponential { amplitude, rate } => TailBound::Exponential {
                amplitude: amplitude * factor,
                rate,
            },
            TailBound::StretchedExponential { amplitude, rate } => {
                TailBound::StretchedExponential {
                    amplitude: amplitude * factor,
                    rate,
                }
            }
            TailBound::Algebraic { amplitude, power } => TailBound::Algebraic {
                amplitude: amplitude * factor,
                power,
            },
        }
    }
}

/// Breakpoints `−T, …, −2, −1, 0, 1, 2, …, T` (powers of two inside `T`).
fn symmetric_breakpoints(radius: f64) -> Vec<f64> {
    let mut positive = Vec::new();
    let mut r = 1.0;
    while r < radius {
        positive.push(r);
        r *= 2.0;
    }
    positive.push(radius);
    let mut points: Vec<f64> = positive.iter().rev().map(|p| -p).collect();
    points.push(0.0);
    points.extend(positive);
    points
}

/// Finds a truncation radius by sampling `|f|` on `[R, 2R]` for
/// `R = 1, 2, 4, …`; returns the radius and the estimated omitted mass.
fn probe_radius<T, F>(f: &mut F, acc: &QuadAccuracy) -> Result<(f64, f64)>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    let target = PROBE_SAFETY * acc.abs_tol;
    for k in 0..=MAX_PROBE_DOUBLINGS {
        let r = 2f64.powi(k);
        let mut peak = 0f64;
        for s in [1.0, 1.25, 1.5, 1.75, 2.0] {
            for x in [r * s, -r * s] {
                peak = peak.max(f(x)?.magnitude());
            }
        }
        if !peak.is_finite() {
            return Err(Error::TailBoundUnavailable);
        }
        let estimate = 2.0 * r * peak;
        if estimate <= target {
            return Ok((2.0 * r, estimate));
        }
    }
    Err(Error::TailBoundUnavailable)
}

/// `∫_ℝ f` for absolutely integrable `f`.
///
/// With a [`TailBound`] the truncation radius comes from the analytic bound
/// and the omitted mass is added to the error estimate; without one the
/// radius is found by probing.
pub fn try_integrate_real_line<T, F>(
    mut f: F,
    acc: &QuadAccuracy,
    tail: Option<&TailBound>,
) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    acc.validate()?;
    let (radius, tail_mass) = match tail {
        Some(bound) => {
            let radius = bound.radius_for(TAIL_SHARE * acc.abs_tol)?;
            (radius, bound.mass_beyond(radius))
        }
        None => probe_radius(&mut f, acc)?,
    };
    let points = symmetric_breakpoints(radius);
    let mut r = try_integrate_adaptive_points(f, &points, acc)?;
    r.err_estimate += tail_mass;
    Ok(r)
}

pub fn integrate_real_line<T, F>(
    mut f: F,
    acc: &QuadAccuracy,
    tail: Option<&TailBound>,
) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    try_integrate_real_line(|x| Ok(f(x)), acc, tail)
}
