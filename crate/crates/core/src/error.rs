use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("nonextensivity index q = {0} outside the open interval (1, 2)")]
    InvalidQ(f64),

    #[error(
        "q-exponential argument {re}{im:+}i lies on the branch cut (1 + (1-q)z real and <= 0)"
    )]
    BranchCut { re: f64, im: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite integrand value at x = {at}")]
    NonFinite { at: f64 },

    #[error("subdivision limit reached: best value {value} with error estimate {err_estimate:e}")]
    SubdivisionLimit { value: Complex64, err_estimate: f64 },

    #[error("double-exponential levels exhausted: best value {value} with error estimate {err_estimate:e}")]
    LevelsExhausted { value: Complex64, err_estimate: f64 },

    #[error("Laguerre node {index} did not converge (alpha = {alpha}, order = {order})")]
    NodeFinding {
        index: usize,
        alpha: f64,
        order: usize,
    },

    #[error("no tail bound available and the integrand does not decay over the probed radii")]
    TailBoundUnavailable,

    #[error("density integrates to {integral}, not 1")]
    NotNormalized { integral: f64 },

    #[error("density is negative ({value}) at grid index {index}")]
    NegativeDensity { index: usize, value: f64 },

    #[error("mixture density divided by beta is not integrable at the origin")]
    DivergentAtOrigin,

    #[error("unknown test function `{0}`")]
    UnknownTestFunction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
