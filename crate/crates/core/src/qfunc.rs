//! The nonextensivity index, the complex q-exponential and Tsallis entropy.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use statrs::function::gamma::{gamma, ln_gamma};

use crate::{Error, Result};

/// Complex values used for q-exponentials and Fourier integrands.
pub type ComplexVal = Complex64;

/// A validated nonextensivity index `q` in the open interval `(1, 2)`.
///
/// Carries the two derived constants used throughout the crate: the Gamma
/// shape `1/(q−1)` of the mixing variable and the delta normalization
/// `c_q = 2π/(2−q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QIndex {
    q: f64,
    shape: f64,
    cq: f64,
}

impl QIndex {
    pub fn new(q: f64) -> Result<Self> {
        if !(q.is_finite() && q > 1.0 && q < 2.0) {
            return Err(Error::InvalidQ(q));
        }
        Ok(Self {
            q,
            shape: 1.0 / (q - 1.0),
            cq: 2.0 * PI / (2.0 - q),
        })
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.q
    }

    /// Shape `1/(q−1)` of the Gamma-distributed mixing variable.
    #[inline]
    pub fn shape(&self) -> f64 {
        self.shape
    }

    /// Normalization constant `2π/(2−q)`.
    #[inline]
    pub fn cq(&self) -> f64 {
        self.cq
    }

    /// Exponent `(2−q)/(q−1)` governing the kernel envelope and `I_q`.
    #[inline]
    pub fn envelope_exponent(&self) -> f64 {
        (2.0 - self.q) / (self.q - 1.0)
    }
}

impl fmt::Display for QIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

impl TryFrom<f64> for QIndex {
    type Error = Error;

    fn try_from(q: f64) -> Result<Self> {
        Self::new(q)
    }
}

/// Principal `ln(1 + ζ)`, accurate when `ζ` is small.
fn ln_1p_complex(zeta: Complex64) -> Complex64 {
    let re = 0.5 * (2.0 * zeta.re + zeta.norm_sqr()).ln_1p();
    let im = zeta.im.atan2(1.0 + zeta.re);
    Complex64::new(re, im)
}

/// `e_q(z) = (1 + (1−q) z)^{1/(1−q)}` on the principal branch.
///
/// The cut is where `w = 1 + (1−q)z` is real and non-positive, i.e. real
/// `z ≥ 1/(q−1)`. The power is evaluated as `exp(ln w / (1−q))`.
pub fn q_exponential(q: QIndex, z: ComplexVal) -> Result<ComplexVal> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite argument {z}")));
    }
    let zeta = z * (1.0 - q.value());
    if zeta.im == 0.0 && 1.0 + zeta.re <= 0.0 {
        return Err(Error::BranchCut { re: z.re, im: z.im });
    }
    let exponent = 1.0 / (1.0 - q.value());
    Ok((ln_1p_complex(zeta) * exponent).exp())
}

/// Real-argument convenience wrapper around [`q_exponential`].
pub fn q_exponential_real(q: QIndex, x: f64) -> Result<f64> {
    q_exponential(q, Complex64::new(x, 0.0)).map(|v| v.re)
}

/// Closed form of `|e_q(−iut)| = (1 + (q−1)²u²t²)^{−1/(2(q−1))}`.
pub fn q_exp_modulus(q: QIndex, u: f64, t: f64) -> f64 {
    let s = (q.value() - 1.0) * u * t;
    (-(s * s).ln_1p() * 0.5 * q.shape()).exp()
}

/// `Γ(1/(q−1) − 1) / ((q−1) Γ(1/(q−1)))`, the constant left over after both
/// Fubini exchanges. Equals `1/(2−q)`.
pub fn gamma_ratio_constant(q: QIndex) -> f64 {
    // 1/(q−1) − 1 cancels for q near 2; (2−q)/(q−1) is formed from exact
    // differences
    let a = q.envelope_exponent();
    let ratio = if a < 170.0 {
        gamma(a) / gamma(a + 1.0)
    } else {
        (ln_gamma(a) - ln_gamma(a + 1.0)).exp()
    };
    ratio / (q.value() - 1.0)
}

/// A nonnegative density sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledDensity {
    start: f64,
    step: f64,
    values: Vec<f64>,
}

impl SampledDensity {
    pub fn new(start: f64, step: f64, values: Vec<f64>) -> Result<Self> {
        if !(step > 0.0 && step.is_finite() && start.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "grid step must be positive and finite, got {step}"
            )));
        }
        if values.len() < 2 {
            return Err(Error::InvalidArgument(
                "a sampled density needs at least two grid points".into(),
            ));
        }
        Ok(Self {
            start,
            step,
            values,
        })
    }

    /// Samples `f` at `points` equally spaced nodes spanning `[a, b]`.
    pub fn from_fn(a: f64, b: f64, points: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if points < 2 || !(b > a) {
            return Err(Error::InvalidArgument(format!(
                "need b > a and at least two points, got [{a}, {b}] with {points}"
            )));
        }
        let step = (b - a) / (points - 1) as f64;
        let values = (0..points).map(|i| f(a + step * i as f64)).collect();
        Self::new(a, step, values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Composite trapezoid rule of `g(f(x))` over the grid.
    fn trapezoid(&self, g: impl Fn(f64) -> f64) -> f64 {
        let n = self.values.len();
        let inner: f64 = self.values[1..n - 1].iter().map(|&v| g(v)).sum();
        self.step * (inner + 0.5 * (g(self.values[0]) + g(self.values[n - 1])))
    }

    pub fn integral(&self) -> f64 {
        self.trapezoid(|v| v)
    }
}

/// Which entropy to evaluate: Shannon (`q = 1`) or Tsallis with `q ∈ (1,2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntropyIndex {
    Shannon,
    Tsallis(QIndex),
}

const NORMALIZATION_TOL: f64 = 1e-8;

/// `H_q(f) = (1 − ∫f^q)/(q−1)`, or `−∫ f ln f` for the Shannon index.
///
/// The prefactor is `1/(q−1)` so that `H_q → H_1` as `q → 1⁺`. Grid
/// integrals use the trapezoid rule; `0·ln 0 = 0`.
pub fn tsallis_entropy(density: &SampledDensity, index: EntropyIndex) -> Result<f64> {
    if let Some((i, &v)) = density
        .values
        .iter()
        .enumerate()
        .find(|(_, v)| !(**v >= 0.0) || !v.is_finite())
    {
        return Err(Error::NegativeDensity { index: i, value: v });
    }
    let mass = density.integral();
    if (mass - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { integral: mass });
    }
    let h = match index {
        EntropyIndex::Shannon => -density.trapezoid(|v| if v > 0.0 { v * v.ln() } else { 0.0 }),
        EntropyIndex::Tsallis(q) => {
            let qm1 = q.value() - 1.0;
            // ∫ f^q − ∫ f = ∫ f·expm1((q−1) ln f); keeps the q → 1 limit stable.
            let excess = density.trapezoid(|v| {
                if v > 0.0 {
                    v * (qm1 * v.ln()).exp_m1()
                } else {
                    0.0
                }
            });
            ((1.0 - mass) - excess) / qm1
        }
    };
    Ok(h)
}
