//! Generalized Gauss–Laguerre rules for the weight `w^α e^{−w}` on `(0, ∞)`.
//!
//! Nodes start from the eigenvalues of the Jacobi matrix and are polished by
//! Newton's method on the three-term recurrence. The recurrence is rescaled
//! as it runs, so large orders do not overflow; weights are formed in
//! log-space from `L_{n−1}` at each node.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use statrs::function::gamma::ln_gamma;

use super::QuadValue;
use crate::{Error, Result};

const MAX_NEWTON: usize = 100;
const RESCALE: f64 = 1e150;

/// A Gauss–Laguerre rule exact for `w^k`, `k ≤ 2·order − 1`, against
/// `w^α e^{−w}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaguerreRule {
    alpha: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    log_weights: Vec<f64>,
}

impl LaguerreRule {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights; may underflow to zero for far nodes or overflow for very
    /// large `α`. [`Self::log_weights`] is always finite.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    /// `Σ wᵢ g(xᵢ) ≈ ∫₀^∞ g(w) w^α e^{−w} dw`.
    pub fn integrate<T: QuadValue>(&self, mut g: impl FnMut(f64) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::default(), |acc, (&x, &w)| acc + g(x) * w)
    }

    /// Weights divided by their sum (`Γ(α+1)` in exact arithmetic): the
    /// rule for the expectation of a Gamma(α+1, 1) random variable.
    pub fn probability_weights(&self) -> Vec<f64> {
        let peak = self
            .log_weights
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let total: f64 = self.log_weights.iter().map(|lw| (lw - peak).exp()).sum();
        let ln_norm = peak + total.ln();
        self.log_weights
            .iter()
            .map(|lw| (lw - ln_norm).exp())
            .collect()
    }
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL.
///
/// `off[i]` couples `diag[i]` and `diag[i+1]`; its last entry is ignored.
fn tridiagonal_eigenvalues(mut diag: Vec<f64>, mut off: Vec<f64>) -> Option<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Some(diag);
    }
    off.resize(n, 0.0);
    off[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return None;
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    diag.sort_by(f64::total_cmp);
    Some(diag)
}

/// `(L_n(x), L_{n−1}(x), ln_scale)` with both values divided by
/// `exp(ln_scale)`.
fn laguerre_pair(n: usize, alpha: f64, x: f64) -> (f64, f64, f64) {
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    let mut ln_scale = 0.0;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            ln_scale += RESCALE.ln();
        }
    }
    (cur, prev, ln_scale)
}

/// Builds the `order`-point rule for weight `w^α e^{−w}`.
pub fn laguerre_rule(alpha: f64, order: usize) -> Result<LaguerreRule> {
    if !(alpha.is_finite() && alpha > -1.0) || order == 0 {
        return Err(Error::InvalidArgument(format!(
            "Laguerre rule needs alpha > -1 and order >= 1, got alpha = {alpha}, order = {order}"
        )));
    }
    let n = order;
    let nf = n as f64;
    let diag: Vec<f64> = (0..n).map(|i| 2.0 * i as f64 + alpha + 1.0).collect();
    let off: Vec<f64> = (0..n)
        .map(|i| {
            let k = (i + 1) as f64;
            (k * (k + alpha)).sqrt()
        })
        .collect();
    let guesses = tridiagonal_eigenvalues(diag, off).ok_or(Error::NodeFinding {
        index: 0,
        alpha,
        order,
    })?;

    let ln_const = ln_gamma(nf + alpha + 1.0) - ln_gamma(nf + 1.0) - 2.0 * (nf + alpha).ln();
    let mut nodes = Vec::with_capacity(n);
    let mut log_weights = Vec::with_capacity(n);
    for (index, &guess) in guesses.iter().enumerate() {
        let mut x = guess.max(f64::MIN_POSITIVE);
        let mut converged = false;
        let mut last_step = f64::INFINITY;
        for _ in 0..MAX_NEWTON {
            let (ln, lnm1, _) = laguerre_pair(n, alpha, x);
            let denom = nf * ln - (nf + alpha) * lnm1;
            if denom == 0.0 {
                break;
            }
            let step = ln * x / denom;
            let mut next = x - step;
            if next <= 0.0 {
                next = 0.5 * x;
            }
            x = next;
            if step.abs() <= 4.0 * f64::EPSILON * x {
                converged = true;
                break;
            }
            // stalled at roundoff level
            if step.abs() >= last_step && step.abs() <= 1e-10 * x {
                converged = true;
                break;
            }
            last_step = step.abs();
        }
        if !converged || !x.is_finite() {
            return Err(Error::NodeFinding {
                index,
                alpha,
                order,
            });
        }
        let (_, lnm1, ln_scale) = laguerre_pair(n, alpha, x);
        let lw = ln_const + x.ln() - 2.0 * (lnm1.abs().ln() + ln_scale);
        nodes.push(x);
        log_weights.push(lw);
    }

    if nodes[0] <= 0.0 || nodes.windows(2).any(|w| !(w[0] < w[1])) {
        let index = nodes
            .windows(2)
            .position(|w| !(w[0] < w[1]))
            .map_or(0, |i| i + 1);
        return Err(Error::NodeFinding {
            index,
            alpha,
            order,
        });
    }

    let weights = log_weights.iter().map(|lw| lw.exp()).collect();
    Ok(LaguerreRule {
        alpha,
        nodes,
        weights,
        log_weights,
    })
}

type RuleCache = Mutex<HashMap<(u64, usize), Arc<LaguerreRule>>>;

/// Memoized [`laguerre_rule`], keyed by the bit pattern of `α` and the order.
pub fn laguerre_rule_shared(alpha: f64, order: usize) -> Result<Arc<LaguerreRule>> {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (alpha.to_bits(), order);
    if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&key) {
        return Ok(Arc::clone(rule));
    }
    // Built outside the lock; a concurrent duplicate build is harmless.
    let rule = Arc::new(laguerre_rule(alpha, order)?);
    cache
        .lock()
        .expect("rule cache poisoned")
        .entry(key)
        .or_insert_with(|| Arc::clone(&rule));
    Ok(rule)
}
