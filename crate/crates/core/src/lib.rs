//! Complex q-exponentials, Gamma-mixture superstatistics and a numerical
//! certification harness for the q-exponential representation of the Dirac
//! delta,
//!
//! ```text
//!     ∫_ℝ ⟨e_q(−iut), φ⟩ du = (2π / (2 − q)) φ(0),    1 < q < 2,
//! ```
//!
//! together with the trigonometric integral
//! `∫₀^{π/2} sin(bθ) cos^{b−1}θ / sinθ dθ = π/2`, `b = (2 − q)/(q − 1)`.
//!
//! Module map:
//!
//! * [`qfunc`]: validated index [`QIndex`], complex [`q_exponential`], Tsallis entropy.
//! * [`quad`]: adaptive Gauss–Kronrod, tanh-sinh, generalized Gauss–Laguerre,
//!   real-line integration with tail bounds.
//! * [`testfn`]: rapidly decreasing test functions and their Fourier transforms.
//! * [`superstat`]: Gamma-mixture expectations and the superstatistics route.
//! * [`deltaseq`]: truncated kernel, pairing, convergence reports, `I_q`.
//! * [`cli`]: the batch verification front-end behind the `qdelta` binary.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod deltaseq;
mod error;
pub mod fit;
pub mod qfunc;
pub mod quad;
pub mod superstat;
pub mod testfn;

pub use error::{Error, Result};
pub use qfunc::{q_exponential, ComplexVal, QIndex};
pub use quad::{QuadAccuracy, QuadResult};
