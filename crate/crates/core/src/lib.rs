//! Numerical laboratory for the principal matrix logarithm addition law.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: dense complex matrices, LU inversion and the complex Schur
//!   decomposition every matrix function goes through.
//! - [`matfun`]: principal logarithm, exponential, `phi(z) = (e^z - 1)/z` and
//!   Hermite-interpolation polynomial representations.
//! - [`scalar`]: scalar complex analysis; the set of nonzero roots of
//!   `e^u = 1 + u`, level sets of `phi`, and argument-principle zero counts
//!   for `f(z) = e^z - lambda z - 1`.
//! - [`laws`]: generators, verifiers and falsification searches for the
//!   statement "`log(xy) = log x + log y` forces `xy = yx`".
//!
//! All numerical thresholds live in [`config::Tolerances`].

pub mod config;
pub mod laws;
pub mod linalg;
pub mod matfun;
pub mod scalar;

pub use config::Tolerances;
pub use linalg::{ComplexMatrix, SchurForm};
pub use num_complex::Complex64;

/// Crate version embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
