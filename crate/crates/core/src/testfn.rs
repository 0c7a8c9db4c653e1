//! Rapidly decreasing test functions and their Fourier transforms.
//!
//! Convention: `φ̂(u) = ∫ e^{−iut} φ(t) dt`, with inversion constant `2π`,
//! so that `∫ φ̂(u) du = 2π φ(0)`.

use std::f64::consts::{E, PI};
use std::fmt;

use num_complex::Complex64;

use crate::quad::{try_integrate_real_line, QuadAccuracy, TailBound};
use crate::{ComplexVal, Error, Result};

/// The analytic form of a corpus member.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    /// `exp(−t²/(2σ²))`.
    Gaussian { sigma: f64 },
    /// `t² exp(−t²/2)`; vanishes at the origin.
    HermiteDamped,
    /// `exp(−1/(1−t²))` on `|t| < 1`, zero elsewhere.
    Bump,
    /// `(1+t²)^{−3}`: smooth and integrable but only algebraically decaying.
    CauchyLike,
}

/// A named test function with its tail bound and Fourier data.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    name: String,
    shape: Shape,
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl TestFunction {
    pub fn new(name: impl Into<String>, shape: Shape) -> Self {
        Self {
            name: name.into(),
            shape,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self.shape {
            Shape::Gaussian { sigma } => {
                let s = t / sigma;
                (-0.5 * s * s).exp()
            }
            Shape::HermiteDamped => t * t * (-0.5 * t * t).exp(),
            Shape::Bump => {
                if t.abs() < 1.0 {
                    (-1.0 / (1.0 - t * t)).exp()
                } else {
                    0.0
                }
            }
            Shape::CauchyLike => (1.0 + t * t).powi(-3),
        }
    }

    pub fn value_at_zero(&self) -> f64 {
        self.eval(0.0)
    }

    /// `sup |φ|`.
    pub fn sup_norm(&self) -> f64 {
        match self.shape {
            Shape::Gaussian { .. } | Shape::CauchyLike => 1.0,
            Shape::HermiteDamped => 2.0 / E,
            Shape::Bump => 1.0 / E,
        }
    }

    /// Member of the rapidly decreasing class (the Cauchy-like stress case
    /// is not).
    pub fn in_class(&self) -> bool {
        !matches!(self.shape, Shape::CauchyLike)
    }

    pub fn is_even(&self) -> bool {
        true
    }

    pub fn tail(&self) -> TailBound {
        match self.shape {
            Shape::Gaussian { sigma } => TailBound::Gaussian {
                amplitude: 1.0,
                width: sigma,
            },
            // t² e^{−t²/4} ≤ 4/e
            Shape::HermiteDamped => TailBound::Gaussian {
                amplitude: 4.0 / E,
                width: 2f64.sqrt(),
            },
            Shape::Bump => TailBound::Compact { radius: 1.0 },
            Shape::CauchyLike => TailBound::Algebraic {
                amplitude: 1.0,
                power: 6.0,
            },
        }
    }

    /// Closed-form transform, where one is wired in.
    pub fn fourier_exact(&self, u: f64) -> Option<ComplexVal> {
        let sqrt_2pi = (2.0 * PI).sqrt();
        match self.shape {
            Shape::Gaussian { sigma } => {
                let s = sigma * u;
                Some(Complex64::new(sigma * sqrt_2pi * (-0.5 * s * s).exp(), 0.0))
            }
            Shape::HermiteDamped => Some(Complex64::new(
                sqrt_2pi * (1.0 - u * u) * (-0.5 * u * u).exp(),
                0.0,
            )),
            // residue at t = −i·sign(u)
            Shape::CauchyLike => {
                let a = u.abs();
                Some(Complex64::new(
                    PI / 8.0 * (3.0 + 3.0 * a + a * a) * (-a).exp(),
                    0.0,
                ))
            }
            Shape::Bump => None,
        }
    }

    /// Tail bound of `φ̂`, where one is known analytically.
    pub fn fourier_tail(&self) -> Option<TailBound> {
        let sqrt_2pi = (2.0 * PI).sqrt();
        match self.shape {
            Shape::Gaussian { sigma } => Some(TailBound::Gaussian {
                amplitude: sigma * sqrt_2pi,
                width: 1.0 / sigma,
            }),
            // |1 − u²| e^{−u²/4} ≤ 4 e^{−5/4} < 1.15
            Shape::HermiteDamped => Some(TailBound::Gaussian {
                amplitude: 1.15 * sqrt_2pi,
                width: 2f64.sqrt(),
            }),
            // (3 + 3a + a²) e^{−a/2} peaks near 4.81
            Shape::CauchyLike => Some(TailBound::Exponential {
                amplitude: 5.0 * PI / 8.0,
                rate: 0.5,
            }),
            // sampled envelope of the saddle-point decay: ratio to e^{−√|u|}
            // stays below 1.12
            Shape::Bump => Some(TailBound::StretchedExponential {
                amplitude: 1.2,
                rate: 1.0,
            }),
        }
    }
}

/// The test-function corpus.
pub fn corpus() -> Vec<TestFunction> {
    vec![
        TestFunction::new("gaussian", Shape::Gaussian { sigma: 1.0 }),
        TestFunction::new("scaled-gaussian", Shape::Gaussian { sigma: 2.0 }),
        TestFunction::new("narrow-gaussian", Shape::Gaussian { sigma: 0.5 }),
        TestFunction::new("hermite-damped", Shape::HermiteDamped),
        TestFunction::new("bump", Shape::Bump),
        TestFunction::new("cauchy-like", Shape::CauchyLike),
    ]
}

/// Looks up a corpus member by name.
pub fn by_name(name: &str) -> Result<TestFunction> {
    corpus()
        .into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::UnknownTestFunction(name.to_owned()))
}

pub fn corpus_names() -> Vec<String> {
    corpus().into_iter().map(|f| f.name).collect()
}

/// `φ̂(u)` by quadrature of `e^{−iut} φ(t)` over the real line.
pub fn fourier_transform_numeric(
    phi: &TestFunction,
    u: f64,
    acc: &QuadAccuracy,
) -> Result<ComplexVal> {
    let tail = phi.tail();
    let r = try_integrate_real_line(
        |t| Ok(Complex64::new(0.0, -u * t).exp() * phi.eval(t)),
        acc,
        Some(&tail),
    )?;
    Ok(r.value)
}

/// `φ̂(u)`: the closed form when available, quadrature otherwise.
pub fn fourier_transform(phi: &TestFunction, u: f64, acc: &QuadAccuracy) -> Result<ComplexVal> {
    match phi.fourier_exact(u) {
        Some(v) => Ok(v),
        None => fourier_transform_numeric(phi, u, acc),
    }
}

/// `∫_ℝ φ̂(u) du`, which should equal `2π φ(0)`.
pub fn classical_delta_check(phi: &TestFunction, acc: &QuadAccuracy) -> Result<f64> {
    // inner transforms need headroom below the outer absolute tolerance, but
    // not below the Kronrod roundoff floor 50ε·‖φ‖₁
    let tail = phi.tail();
    let l1 = try_integrate_real_line(|t| Ok(phi.eval(t).abs()), acc, Some(&tail))?.value;
    let inner = acc.with_abs_tol((acc.abs_tol * 1e-3).max(100.0 * f64::EPSILON * l1));
    let fourier_tail = phi.fourier_tail();
    let r = try_integrate_real_line(
        |u| fourier_transform(phi, u, &inner),
        acc,
        fourier_tail.as_ref(),
    )?;
    Ok(r.value.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn acc() -> QuadAccuracy {
        QuadAccuracy::default()
    }

    #[test]
    fn corpus_contents() {
        let names = corpus_names();
        for required in [
            "gaussian",
            "scaled-gaussian",
            "hermite-damped",
            "bump",
            "cauchy-like",
        ] {
            assert!(names.iter().any(|n| n == required), "{required} missing");
        }
        assert!(!by_name("cauchy-like").unwrap().in_class());
        assert!(matches!(
            by_name("nope"),
            Err(Error::UnknownTestFunction(_))
        ));
    }

    #[test]
    fn values_at_zero() {
        for phi in corpus() {
            assert_eq!(phi.value_at_zero(), phi.eval(0.0));
        }
        assert_eq!(by_name("gaussian").unwrap().value_at_zero(), 1.0);
        assert_eq!(by_name("hermite-damped").unwrap().value_at_zero(), 0.0);
    }

    #[test]
    fn gaussian_transform_values() {
        let g = by_name("gaussian").unwrap();
        let at0 = g.fourier_exact(0.0).unwrap();
        assert!((at0.re - (2.0 * PI).sqrt()).abs() < 1e-15);
        assert!((at0.re - 2.5066283).abs() < 1e-7);
        let at1 = g.fourier_exact(1.0).unwrap();
        assert!((at1.re - 1.5203469).abs() < 1e-7);
        // ∫ e^{-t²/2} dt, computed independently
        let direct =
            crate::quad::integrate_adaptive(|t: f64| (-0.5 * t * t).exp(), -40.0, 40.0, &acc())
                .unwrap()
                .value;
        assert!((direct - at0.re).abs() < 1e-12);
    }

    #[test]
    fn bump_vanishes_to_all_orders_at_support_edge() {
        let b = by_name("bump").unwrap();
        assert_eq!(b.eval(1.0), 0.0);
        assert_eq!(b.eval(-1.0), 0.0);
        // value and finite-difference derivatives near the edge are negligible
        let h = 1e-3;
        for &x in &[0.97, -0.97] {
            let f0 = b.eval(x);
            let d1 = (b.eval(x + h) - b.eval(x - h)) / (2.0 * h);
            let d2 = (b.eval(x + h) - 2.0 * f0 + b.eval(x - h)) / (h * h);
            assert!(
                f0 < 1e-7 && d1.abs() < 1e-4 && d2.abs() < 1e-1,
                "{f0} {d1} {d2}"
            );
        }
    }

    #[test]
    fn rapid_decrease_probes() {
        for phi in corpus().into_iter().filter(|p| p.in_class()) {
            for k in 0..=4 {
                let probe: Vec<f64> = [4.0, 8.0, 16.0, 32.0]
                    .iter()
                    .map(|&x: &f64| (x.powi(k) * phi.eval(x)).abs())
                    .collect();
                assert!(probe[3] < 1e-12, "{} k={k}: {probe:?}", phi.name());
                assert!(probe.windows(2).all(|w| w[1] <= w[0]), "{}", phi.name());
            }
        }
        // the stress case stalls: t^6 (1+t²)^{-3} → 1
        let c = by_name("cauchy-like").unwrap();
        assert!((32f64.powi(6) * c.eval(32.0) - 1.0).abs() < 0.01);
    }

    #[test]
    fn numeric_and_exact_transforms_agree() {
        for phi in corpus() {
            for &u in &[0.0, 0.5, -0.5, 1.0, -1.0, 5.0, -5.0] {
                if let Some(exact) = phi.fourier_exact(u) {
                    let numeric = fourier_transform_numeric(&phi, u, &acc()).unwrap();
                    assert!((exact - numeric).norm() < 1e-9, "{} u={u}", phi.name());
                }
            }
        }
    }

    #[test]
    fn cauchy_like_transform_matches_residue_formula() {
        let c = by_name("cauchy-like").unwrap();
        for &u in &[0.0, 0.5, 2.0, -3.0, 7.0] {
            let a = f64::abs(u);
            let residue = PI / 8.0 * (3.0 + 3.0 * a + a * a) * (-a).exp();
            let numeric = fourier_transform_numeric(&c, u, &acc()).unwrap();
            assert!((numeric.re - residue).abs() < 1e-9, "u={u}");
            assert_eq!(c.fourier_exact(u).unwrap().re, residue);
        }
    }

    #[test]
    fn even_functions_have_real_transforms() {
        for phi in corpus() {
            for &u in &[0.3, 1.7, -4.0, 12.0] {
                let v = fourier_transform(&phi, u, &acc()).unwrap();
                assert!(v.im.abs() < acc().abs_tol, "{} u={u}: {v}", phi.name());
                let w = fourier_transform(&phi, -u, &acc()).unwrap();
                assert!((v.re - w.re).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn classical_check_examples() {
        let g = classical_delta_check(&by_name("gaussian").unwrap(), &acc()).unwrap();
        assert!((g - 2.0 * PI).abs() < 1e-8);
        let h = classical_delta_check(&by_name("hermite-damped").unwrap(), &acc()).unwrap();
        assert!(h.abs() < 1e-10);
        let s = classical_delta_check(&by_name("scaled-gaussian").unwrap(), &acc()).unwrap();
        assert!((s - 2.0 * PI).abs() < 1e-8);
        let c = classical_delta_check(&by_name("cauchy-like").unwrap(), &acc()).unwrap();
        assert!((c - 2.0 * PI).abs() < 1e-8);
    }

    #[test]
    fn fourier_tails_bound_the_transforms() {
        for phi in corpus() {
            let Some(bound) = phi.fourier_tail() else {
                continue;
            };
            for &u in &[0.0, 1.0, 3.0, 10.0, 40.0, 150.0, 600.0] {
                let v = fourier_transform(&phi, u, &acc()).unwrap().norm();
                let envelope = match bound {
                    TailBound::Gaussian { amplitude, width } => {
                        amplitude * (-0.5 * (u / width).powi(2)).exp()
                    }
                    TailBound::Exponential { amplitude, rate } => amplitude * (-rate * u).exp(),
                    TailBound::StretchedExponential { amplitude, rate } => {
                        amplitude * (-rate * u.sqrt()).exp()
                    }
                    _ => unreachable!(),
                };
                assert!(
                    v <= envelope + 1e-15,
                    "{} u={u}: {v} > {envelope}",
                    phi.name()
                );
            }
        }
    }

    #[test]
    fn classical_check_bump() {
        let b = by_name("bump").unwrap();
        let v = classical_delta_check(&b, &acc()).unwrap();
        assert!((v - 2.0 * PI / E).abs() < 1e-8 * (1.0 + 1.0 / E), "{v}");
    }
}
