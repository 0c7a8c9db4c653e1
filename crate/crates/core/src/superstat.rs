//! Gamma-mixture expectations and the superstatistics representation
//!
//! ```text
//!     e_q(−iut) = E_W[ e^{−iut(q−1)W} ],   W ~ Gamma(shape = 1/(q−1), scale = 1).
//! ```
//!
//! Expectations use the generalized Gauss–Laguerre rule with
//! `α = 1/(q−1) − 1`. The rule resolves `e^{−iλW}` well for `|λ| ≲ 5` at
//! order 256; beyond that the error grows like `(λ/√(1+λ²))^{2n}`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::qfunc::q_exponential;
use crate::quad::{
    laguerre_rule_shared, try_integrate_adaptive_points, try_integrate_real_line, QuadAccuracy,
    QuadValue,
};
use crate::testfn::{fourier_transform, TestFunction};
use crate::{ComplexVal, Error, QIndex, Result};

pub const MIN_EXPECTATION_ORDER: usize = 8;
pub const MIN_ROUTE_ORDER: usize = 32;

/// `E[g(W)]` for `W ~ Gamma(1/(q−1), 1)` with a fallible integrand.
pub fn try_gamma_expectation<T, G>(q: QIndex, mut g: G, order: usize) -> Result<T>
where
    T: QuadValue,
    G: FnMut(f64) -> Result<T>,
{
    if order < MIN_EXPECTATION_ORDER {
        return Err(Error::InvalidArgument(format!(
            "expectation order must be at least {MIN_EXPECTATION_ORDER}, got {order}"
        )));
    }
    let rule = laguerre_rule_shared(q.shape() - 1.0, order)?;
    let weights = rule.probability_weights();
    let mut sum = T::default();
    for (&node, &w) in rule.nodes().iter().zip(&weights) {
        let v = g(node)?;
        if !v.is_finite_value() {
            return Err(Error::NonFinite { at: node });
        }
        sum = sum + v * w;
    }
    Ok(sum)
}

/// `E[g(W)]` for `W ~ Gamma(1/(q−1), 1)`, by an `order`-point Laguerre rule.
pub fn gamma_expectation<T, G>(q: QIndex, mut g: G, order: usize) -> Result<T>
where
    T: QuadValue,
    G: FnMut(f64) -> T,
{
    try_gamma_expectation(q, |w| Ok(g(w)), order)
}

/// `E_W[exp(−iut(q−1)W)]`, which converges to `e_q(−iut)` as the order grows.
pub fn superstat_qexp(q: QIndex, u: f64, t: f64, order: usize) -> Result<ComplexVal> {
    let freq = u * t * (q.value() - 1.0);
    gamma_expectation(q, |w| Complex64::new(0.0, -freq * w).exp(), order)
}

/// `⟨T_{e_q(−iut)}, φ⟩ = ∫ e_q(−iut) φ(t) dt` by direct quadrature.
pub fn qexp_pairing(
    q: QIndex,
    u: f64,
    phi: &TestFunction,
    acc: &QuadAccuracy,
) -> Result<ComplexVal> {
    // |e_q(−iut)| ≤ 1, so φ's tail bound covers the product
    let tail = phi.tail();
    let r = try_integrate_real_line(
        |t| Ok(q_exponential(q, Complex64::new(0.0, -u * t))? * phi.eval(t)),
        acc,
        Some(&tail),
    )?;
    Ok(r.value)
}

/// The same pairing after exchanging the order of integration:
/// `E_W[φ̂(u(q−1)W)]`.
pub fn superstat_route(
    q: QIndex,
    u: f64,
    phi: &TestFunction,
    order: usize,
    acc: &QuadAccuracy,
) -> Result<ComplexVal> {
    if order < MIN_ROUTE_ORDER {
        return Err(Error::InvalidArgument(format!(
            "route order must be at least {MIN_ROUTE_ORDER}, got {order}"
        )));
    }
    let scale = u * (q.value() - 1.0);
    // |φ̂| ≤ ‖φ‖₁: nodes whose weight makes the term negligible are skipped,
    // sparing transforms at very large arguments
    let tail = phi.tail();
    let l1 = try_integrate_real_line(|t| Ok(phi.eval(t).abs()), acc, Some(&tail))?.value;
    let negligible = 1e-6 * acc.abs_tol / l1.max(f64::MIN_POSITIVE);

    let rule = laguerre_rule_shared(q.shape() - 1.0, order)?;
    let mut sum = Complex64::default();
    for (&node, &w) in rule.nodes().iter().zip(&rule.probability_weights()) {
        if w < negligible {
            continue;
        }
        let v = fourier_transform(phi, scale * node, acc)?;
        if !v.is_finite_value() {
            return Err(Error::NonFinite { at: node });
        }
        sum += v * w;
    }
    Ok(sum)
}

/// Probability density of a fluctuating intensive parameter on `(0, ∞)`.
#[derive(Clone)]
pub struct MixtureSpec {
    name: String,
    density: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for MixtureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MixtureSpec")
            .field("name", &self.name)
            .finish()
    }
}

const MIXTURE_NORM_TOL: f64 = 1e-8;
// log-coordinates beyond ±700 leave the range of exp
const MAX_LOG_RADIUS: f64 = 700.0;

impl MixtureSpec {
    /// Wraps `density`, checking nonnegativity and unit mass numerically.
    pub fn new(
        name: impl Into<String>,
        density: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let spec = Self {
            name: name.into(),
            density: Arc::new(density),
        };
        let acc = QuadAccuracy::default();
        // ∫₀^∞ f(β) dβ = ∫ f(e^s) e^s ds
        let mass = spec.log_integral(
            |s, beta| spec.checked_density(beta).map(|f| f * s.exp()),
            &acc,
        )?;
        if (mass - 1.0).abs() > MIXTURE_NORM_TOL {
            return Err(Error::NotNormalized { integral: mass });
        }
        Ok(spec)
    }

    /// Gamma density with shape `k` and scale `θ`.
    pub fn gamma(shape: f64, scale: f64) -> Result<Self> {
        if !(shape > 0.0 && scale > 0.0 && shape.is_finite() && scale.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "Gamma mixture needs positive shape and scale, got {shape}, {scale}"
            )));
        }
        let ln_norm = ln_gamma(shape) + shape * scale.ln();
        Self::new(
            format!("gamma(k={shape}, theta={scale})"),
            move |beta: f64| {
                if beta <= 0.0 {
                    0.0
                } else {
                    ((shape - 1.0) * beta.ln() - beta / scale - ln_norm).exp()
                }
            },
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn density(&self, beta: f64) -> f64 {
        (self.density)(beta)
    }

    fn checked_density(&self, beta: f64) -> Result<f64> {
        let f = self.density(beta);
        if !f.is_finite() {
            return Err(Error::NonFinite { at: beta });
        }
        if f < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "mixture density {} is negative ({f}) at beta = {beta}",
                self.name
            )));
        }
        Ok(f)
    }

    /// `∫_ℝ h(s, e^s) ds` with each side truncated by probing.
    fn log_integral<H>(&self, mut h: H, acc: &QuadAccuracy) -> Result<f64>
    where
        H: FnMut(f64, f64) -> Result<f64>,
    {
        let target = 1e-3 * acc.abs_tol;
        let radius = |sign: f64, h: &mut H| -> Result<Option<f64>> {
            let mut r = 1.0;
            while r <= MAX_LOG_RADIUS {
                let peak = [1.0, 1.25, 1.5, 1.75, 2.0f64]
                    .iter()
                    .map(|&m| {
                        let s = (sign * r * m).clamp(-MAX_LOG_RADIUS, MAX_LOG_RADIUS);
                        h(s, s.exp()).map(f64::abs)
                    })
                    .try_fold(0f64, |p, v| v.map(|v| p.max(v)))?;
                if 2.0 * r * peak <= target {
                    return Ok(Some((2.0 * r).min(MAX_LOG_RADIUS)));
                }
                r *= 2.0;
            }
            Ok(None)
        };
        let left = radius(-1.0, &mut h)?.ok_or(Error::DivergentAtOrigin)?;
        let right = radius(1.0, &mut h)?.ok_or(Error::TailBoundUnavailable)?;

        let mut points = Vec::new();
        let mut p = -left;
        points.push(p);
        while p < right {
            p = if p < -1.0 {
                p / 2.0
            } else if p < 1.0 {
                p + 1.0
            } else {
                p * 2.0
            };
            points.push(p.min(right));
        }
        points.dedup();
        let r = try_integrate_adaptive_points(|s| h(s, s.exp()), &points, acc)?;
        Ok(r.value)
    }
}

/// Beck–Cohen factor `∫₀^∞ (dβ/β) f(β) e^{−βE}`, integrated in `s = ln β`.
pub fn bc_factor(spec: &MixtureSpec, energy: f64, acc: &QuadAccuracy) -> Result<f64> {
    if !(energy >= 0.0 && energy.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "energy must be finite and nonnegative, got {energy}"
        )));
    }
    spec.log_integral(
        |_, beta| Ok(spec.checked_density(beta)? * (-beta * energy).exp()),
        acc,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfn::{by_name, corpus};
    use statrs::function::gamma::gamma;

    fn q(v: f64) -> QIndex {
        QIndex::new(v).unwrap()
    }

    #[test]
    fn expectation_examples() {
        for &qv in &[1.1, 1.5, 1.9] {
            let one: f64 = gamma_expectation(q(qv), |_| 1.0, 16).unwrap();
            assert!((one - 1.0).abs() < 1e-12);
        }
        let mean: f64 = gamma_expectation(q(1.5), |w| w, 16).unwrap();
        assert!((mean - 2.0).abs() < 1e-12);
        // E[1/W] = 1/(shape − 1) = 1 for shape 2; 1/w is not polynomial so
        // the rule only converges
        let inv: f64 = gamma_expectation(q(1.5), |w| 1.0 / w, 256).unwrap();
        assert!((inv - 1.0).abs() < 1e-2, "{inv}");
        let inv_hi: f64 = gamma_expectation(q(1.5), |w| 1.0 / w, 512).unwrap();
        assert!((inv_hi - 1.0).abs() < (inv - 1.0).abs());
    }

    #[test]
    fn expectation_rejects_low_order_and_non_finite() {
        assert!(gamma_expectation(q(1.5), |_| 1.0, 4).is_err());
        let err =
            gamma_expectation(q(1.5), |w| if w > 3.0 { f64::INFINITY } else { w }, 16).unwrap_err();
        assert!(matches!(err, Error::NonFinite { at } if at > 3.0));
    }

    #[test]
    fn moment_ladder() {
        for &qv in &[1.1, 1.25, 1.5, 1.75, 1.9] {
            let k = q(qv);
            let s = k.shape();
            for m in 0..=6 {
                let got: f64 = gamma_expectation(k, |w| w.powi(m), 64).unwrap();
                let exact = gamma(s + m as f64) / gamma(s);
                assert!(((got - exact) / exact).abs() < 1e-9, "q={qv} m={m}");
            }
        }
    }

    #[test]
    fn superstat_qexp_examples() {
        let v = superstat_qexp(q(1.5), 0.0, 3.0, 64).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        let v = superstat_qexp(q(1.5), 1.0, 1.0, 64).unwrap();
        assert!((v - Complex64::new(0.48, -0.64)).norm() < 1e-8);
        let closed = q_exponential(q(1.25), Complex64::new(0.0, -2.0)).unwrap();
        let v = superstat_qexp(q(1.25), 2.0, 1.0, 128).unwrap();
        assert!((v - closed).norm() < 1e-8);
    }

    #[test]
    fn identity_holds_where_the_rule_resolves_the_oscillation() {
        let mut worst = 0f64;
        for i in 1..=9 {
            let k = q(1.0 + i as f64 / 10.0);
            for u in -5..=5 {
                for t in -5..=5 {
                    let (u, t) = (u as f64, t as f64);
                    if (u * t * (k.value() - 1.0)).abs() > 5.0 {
                        continue;
                    }
                    let a = superstat_qexp(k, u, t, 256).unwrap();
                    let b = q_exponential(k, Complex64::new(0.0, -u * t)).unwrap();
                    worst = worst.max((a - b).norm());
                }
            }
        }
        assert!(worst <= 1e-8, "{worst:e}");
    }

    #[test]
    fn higher_order_extends_the_resolved_range() {
        // λ = 10 needs roughly n ≈ 9·(1+λ²)/2 nodes for 1e-8
        for &qv in &[1.5, 1.9] {
            let k = q(qv);
            let t = 10.0 / (qv - 1.0);
            let closed = q_exponential(k, Complex64::new(0.0, -t)).unwrap();
            let lo = (superstat_qexp(k, 1.0, t, 256).unwrap() - closed).norm();
            let hi = (superstat_qexp(k, 1.0, t, 2048).unwrap() - closed).norm();
            assert!(hi < 1e-8, "q={qv}: {hi:e}");
            assert!(lo > hi);
        }
    }

    #[test]
    fn convergence_in_order_is_monotone() {
        for &(qv, u, t) in &[(1.5, 2.0, 2.0), (1.25, -3.0, 4.0), (1.8, 5.0, 1.0)] {
            let k = q(qv);
            let closed = q_exponential(k, Complex64::new(0.0, -u * t)).unwrap();
            let errs: Vec<f64> = [32, 64, 128, 256]
                .iter()
                .map(|&n| (superstat_qexp(k, u, t, n).unwrap() - closed).norm())
                .collect();
            assert!(
                errs.windows(2).all(|w| w[1] <= w[0] + 1e-12),
                "q={qv}: {errs:?}"
            );
        }
    }

    #[test]
    fn gamma_mixture_bc_factor_closed_form() {
        let acc = QuadAccuracy::default();
        for &(k, theta) in &[(2.5, 1.0), (4.0, 0.5), (30.0, 1.0 / 30.0), (1.7, 3.0)] {
            let spec = MixtureSpec::gamma(k, theta).unwrap();
            for &e in &[0.0, 0.3, 1.0, 7.5] {
                let closed = gamma(k - 1.0) / gamma(k) / theta * (1.0 + theta * e).powf(1.0 - k);
                let got = bc_factor(&spec, e, &acc).unwrap();
                assert!(
                    (got - closed).abs() < 1e-8 * closed.max(1.0),
                    "k={k} E={e}: {got} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn bc_factor_at_zero_energy_is_mean_inverse_beta() {
        let spec = MixtureSpec::gamma(3.0, 2.0).unwrap();
        let got = bc_factor(&spec, 0.0, &QuadAccuracy::default()).unwrap();
        // E[1/β] = 1/(θ(k−1))
        assert!((got - 0.25).abs() < 1e-10);
    }

    #[test]
    fn gamma_mixture_reproduces_a_q_exponential_shape() {
        let acc = QuadAccuracy::default();
        let (k, theta) = (4.0, 0.5);
        let spec = MixtureSpec::gamma(k, theta).unwrap();
        let base = bc_factor(&spec, 0.0, &acc).unwrap();
        let (xs, ys): (Vec<f64>, Vec<f64>) = [0.5, 1.0, 2.0, 4.0, 8.0]
            .iter()
            .map(|&e| {
                let ratio = bc_factor(&spec, e, &acc).unwrap() / base;
                ((1.0 + theta * e).ln(), ratio.ln())
            })
            .unzip();
        let slope = crate::fit::least_squares_slope(&xs, &ys).unwrap();
        // ratio = (1+θE)^{-(k-1)} = e_q̃(−θ(k−1)E) with q̃ = 1 + 1/(k−1)
        let q_tilde = 1.0 - 1.0 / slope;
        assert!(
            (q_tilde - (1.0 + 1.0 / (k - 1.0))).abs() < 1e-8,
            "{q_tilde}"
        );
    }

    #[test]
    fn mixture_admissibility() {
        // k = 1: f(β)/β ~ 1/β at the origin
        let spec = MixtureSpec::gamma(1.0, 1.0).unwrap();
        assert_eq!(
            bc_factor(&spec, 1.0, &QuadAccuracy::default()).unwrap_err(),
            Error::DivergentAtOrigin
        );
        assert!(matches!(
            MixtureSpec::new("half", |b: f64| 0.5 * (-b).exp()),
            Err(Error::NotNormalized { .. })
        ));
        assert!(bc_factor(
            &MixtureSpec::gamma(3.0, 1.0).unwrap(),
            -1.0,
            &QuadAccuracy::default()
        )
        .is_err());
    }

    #[test]
    fn route_examples() {
        let acc = QuadAccuracy::default();
        let g = by_name("gaussian").unwrap();
        let v = superstat_route(q(1.5), 0.0, &g, 64, &acc).unwrap();
        assert!((v.re - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12);
        let route = superstat_route(q(1.5), 1.0, &g, 128, &acc).unwrap();
        let direct = qexp_pairing(q(1.5), 1.0, &g, &acc).unwrap();
        assert!((route - direct).norm() < 1e-7, "{route} vs {direct}");
    }

    #[test]
    fn route_equivalence_over_corpus() {
        let acc = QuadAccuracy::default();
        for phi in corpus() {
            for &qv in &[1.25, 1.5, 1.75] {
                for &u in &[-5.0, -1.5, 0.5, 2.0, 5.0] {
                    let route = superstat_route(q(qv), u, &phi, 256, &acc)
                        .unwrap_or_else(|e| panic!("{} q={qv} u={u}: {e:?}", phi.name()));
                    let direct = qexp_pairing(q(qv), u, &phi, &acc).unwrap();
                    assert!(
                        (route - direct).norm() < 1e-7,
                        "{} q={qv} u={u}: {route} vs {direct}",
                        phi.name()
                    );
                }
            }
        }
    }

    #[test]
    fn pairing_decays_algebraically_in_u() {
        // E_W[φ̂(λW)] = ∫ w e^{-w} φ̂(λw) dw at q = 1.5; expanding e^{-w}
        // gives √(2π)/λ² − π/λ³ + O(λ^{-4})
        let acc = QuadAccuracy::default();
        let g = by_name("gaussian").unwrap();
        let u = 50.0;
        let lambda = 0.5 * u;
        let asymptotic = (2.0 * std::f64::consts::PI).sqrt() / (lambda * lambda)
            - std::f64::consts::PI / lambda.powi(3);
        let direct = qexp_pairing(q(1.5), u, &g, &acc).unwrap();
        assert!(
            ((direct.re - asymptotic) / asymptotic).abs() < 5e-3,
            "{direct} vs {asymptotic}"
        );
        let far = qexp_pairing(q(1.5), 4.0 * u, &g, &acc).unwrap();
        assert!(far.norm() < direct.norm() / 10.0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn mixture_reproduces_q_exponential(qv in 1.01f64..1.99, u in -3.0f64..3.0, t in -3.0f64..3.0) {
                prop_assume!((u * t * (qv - 1.0)).abs() <= 2.0);
                let mixed = superstat_qexp(q(qv), u, t, 256).unwrap();
                let exact = crate::q_exponential(q(qv), ComplexVal::new(0.0, -u * t)).unwrap();
                prop_assert!((mixed - exact).norm() <= 1e-8);
            }

            #[test]
            fn expectation_of_one_is_one(qv in 1.01f64..1.99, order in 8usize..300) {
                let e: f64 = gamma_expectation(q(qv), |_| 1.0, order).unwrap();
                prop_assert!((e - 1.0).abs() <= 1e-13);
            }
        }
    }
}
