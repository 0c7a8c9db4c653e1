//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use super::{QuadAccuracy, QuadResult, QuadValue};
use crate::{Error, Result};

// Kronrod abscissae on [-1, 1], descending; odd indices are the Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    err: f64,
    splittable: bool,
}

fn checked<T: QuadValue>(v: T, x: f64) -> Result<T> {
    if v.is_finite_value() {
        Ok(v)
    } else {
        Err(Error::NonFinite { at: x })
    }
}

/// One 15-point Kronrod evaluation with the QUADPACK error heuristic.
fn kronrod15<T, F>(f: &mut F, a: f64, b: f64) -> Result<Segment<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = checked(f(center)?, center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.magnitude() * WGK[7];

    let mut lower = [T::default(); 7];
    let mut upper = [T::default(); 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let (xl, xu) = (center - dx, center + dx);
        let fl = checked(f(xl)?, xl)?;
        let fu = checked(f(xu)?, xu)?;
        lower[j] = fl;
        upper[j] = fu;
        kronrod = kronrod + (fl + fu) * WGK[j];
        abs_sum += (fl.magnitude() + fu.magnitude()) * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + (fl + fu) * WG[j / 2];
        }
    }

    let mean = kronrod * 0.5;
    let mut asc = (fc - mean).magnitude() * WGK[7];
    for j in 0..7 {
        asc += ((lower[j] - mean).magnitude() + (upper[j] - mean).magnitude()) * WGK[j];
    }

    let width = half.abs();
    let value = kronrod * half;
    let res_abs = abs_sum * width;
    let res_asc = asc * width;
    let mut err = ((kronrod - gauss) * half).magnitude();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }

    let scale = a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    let splittable = (b - a) > 8.0 * f64::EPSILON * scale;
    Ok(Segment {
        a,
        b,
        value,
        err,
        splittable,
    })
}

/// Adaptive integration over consecutive intervals `[p0,p1], [p1,p2], …`.
///
/// Breakpoints seed the initial partition; the interval with the largest
/// error estimate is bisected until the global estimate meets the target.
pub fn try_integrate_adaptive_points<T, F>(
    mut f: F,
    points: &[f64],
    acc: &QuadAccuracy,
) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    acc.validate()?;
    if points.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two breakpoints".into(),
        ));
    }
    if points.iter().any(|p| !p.is_finite()) || points.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument(format!(
            "breakpoints must be finite and strictly increasing: {points:?}"
        )));
    }

    let mut segments = Vec::with_capacity(acc.max_subdivisions.max(points.len()));
    for w in points.windows(2) {
        segments.push(kronrod15(&mut f, w[0], w[1])?);
    }
    let mut evaluations = 15 * segments.len();

    loop {
        let total = segments
            .iter()
            .fold(T::default(), |s: T, seg| s + seg.value);
        let total_err: f64 = segments.iter().map(|s| s.err).sum();
        if total_err <= acc.target(total.magnitude()) {
            return Ok(QuadResult {
                value: total,
                err_estimate: total_err,
                evaluations,
            });
        }

        let worst = segments
            .iter()
            .enumerate()
            .filter(|(_, s)| s.splittable)
            .max_by(|(_, x), (_, y)| x.err.total_cmp(&y.err))
            .map(|(i, _)| i);
        let Some(i) = worst.filter(|_| segments.len() < acc.max_subdivisions) else {
            return Err(Error::SubdivisionLimit {
                value: total.to_complex(),
                err_estimate: total_err,
            });
        };

        let seg = segments[i];
        let mid = 0.5 * (seg.a + seg.b);
        let left = kronrod15(&mut f, seg.a, mid)?;
        let right = kronrod15(&mut f, mid, seg.b)?;
        evaluations += 30;
        segments[i] = left;
        segments.push(right);
    }
}

pub fn try_integrate_adaptive<T, F>(
    f: F,
    a: f64,
    b: f64,
    acc: &QuadAccuracy,
) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    try_integrate_adaptive_points(f, &[a, b], acc)
}

pub fn integrate_adaptive_points<T, F>(
    mut f: F,
    points: &[f64],
    acc: &QuadAccuracy,
) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    try_integrate_adaptive_points(|x| Ok(f(x)), points, acc)
}

/// `∫_a^b f` for `f` smooth on `[a, b]`.
pub fn integrate_adaptive<T, F>(f: F, a: f64, b: f64, acc: &QuadAccuracy) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    integrate_adaptive_points(f, &[a, b], acc)
}
