//! Centralized numerical thresholds.
//!
//! Every comparison in the crate reads its threshold from [`Tolerances`], and
//! every report embeds the full record so a result can be reproduced from its
//! output alone. Names are stable: they are what `--tol name=value` accepts.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("unknown tolerance name `{0}`")]
    UnknownName(String),
    #[error("tolerance `{name}` must be a finite positive number, got {value}")]
    InvalidValue { name: String, value: f64 },
    #[error("malformed tolerance override `{0}`, expected name=value")]
    Malformed(String),
}

macro_rules! tolerances {
    ($( $(#[doc = $doc:literal])* $field:ident = $default:expr ),+ $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
        pub struct Tolerances {
            $( $(#[doc = $doc])* pub $field: f64, )+
        }

        impl Default for Tolerances {
            fn default() -> Self {
                Self { $( $field: $default, )+ }
            }
        }

        impl Tolerances {
            /// Names accepted by [`Tolerances::set`], in declaration order.
            pub const NAMES: &'static [&'static str] = &[$( stringify!($field), )+];

            pub fn get(&self, name: &str) -> Option<f64> {
                match name {
                    $( stringify!($field) => Some(self.$field), )+
                    _ => None,
                }
            }

            pub fn set(&mut self, name: &str, value: f64) -> Result<(), ConfigError> {
                if !(value.is_finite() && value > 0.0) {
                    return Err(ConfigError::InvalidValue { name: name.to_string(), value });
                }
                match name {
                    $( stringify!($field) => self.$field = value, )+
                    _ => return Err(ConfigError::UnknownName(name.to_string())),
                }
                Ok(())
            }
        }
    };
}

tolerances! {
    /// Schur factor unitarity, `||q q* - I||_F`.
    unitarity = 1e-12,
    /// Schur reconstruction, relative to `||A||_F`.
    reconstruction = 1e-11,
    /// QR deflation: subdiagonal is zeroed below this times the adjacent diagonal magnitudes.
    deflation = 1e-14,
    /// Inversion rejects when the estimated smallest singular value falls below this times `||A||_F`.
    inverse_floor = 1e-13,
    /// Spectrum counts as on the branch cut when its distance to `]-inf, 0]` is at most this.
    cut = 1e-12,
    /// Cut distances below this are flagged as low-confidence in reports.
    low_confidence_cut = 1e-6,
    /// Largest `||a||_F` accepted by the matrix exponential.
    exp_budget = 700.0,
    /// Inverse scaling and squaring stops taking square roots once `||T - I||_1` is below this.
    log_sqrt_target = 0.25,
    /// `phi(A)` is computed by a linear solve when every eigenvalue modulus exceeds this.
    phi_solve_threshold = 0.1,
    /// Eigenvalues closer than this are merged into one Hermite node.
    hermite_cluster = 1e-6,
    /// Normalized log-law residual below which the law is judged to hold.
    law = 1e-8,
    /// Normalized commutator below which a pair is judged commuting.
    commuting = 1e-8,
    /// Lower edge of the band in which identity verdicts are reported as borderline.
    borderline_lo = 1e-9,
    /// Upper edge of the borderline band.
    borderline_hi = 1e-7,
    /// Census aborts when a sampled boundary value of `|f|` drops below this.
    census_floor = 1e-10,
    /// Boundary clearance required for a window to be accepted in the two-zero census.
    window_clearance = 1e-6,
    /// Newton stops when `|step| < newton_step * (1 + |z|)`.
    newton_step = 1e-14,
    /// Accepted residual `|e^r - 1 - r|` for roots of `e^u = 1 + u`.
    root_residual = 1e-12,
    /// Two roots closer than this are the same root.
    root_separation = 1e-6,
    /// Accepted `|phi(u) - phi(v)|` for a companion pair.
    companion_level = 1e-12,
    /// Relative `||e^(a+b) - e^a e^b||` accepted for exceptional pairs.
    item3_identity = 1e-10,
    /// Relative `||e^(a+b) - e^a e^b||` below which the exponential identity holds.
    identity = 1e-8,
    /// Scalar equalities inside the block-triangular classification.
    prop3_item = 1e-6,
    /// Entries of `w` above this count as nonzero when locating the pivot.
    pivot = 1e-10,
    /// Normalized commutator floor for falsification samples.
    noncommuting_floor = 1e-2,
    /// Law residuals below this on noncommuting samples are counterexample candidates.
    counterexample = 1e-8,
    /// Hermitian symmetry check, relative to `max(1, ||x||_F)`.
    hermitian = 1e-12,
    /// Commutator bound for `xy` in the Hermitian chain check.
    hermitian_chain = 1e-6,
    /// Gap membership in `2 pi i Z*` and the phi-level test of the 2x2 classifier.
    classify = 1e-8,
    /// Distance to a root of `e^u = 1 + u` accepted by the 2x2 classifier.
    classify_root = 1e-6,
}

impl Tolerances {
    /// Applies a `name=value` override.
    pub fn apply_override(&mut self, spec: &str) -> Result<(), ConfigError> {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| ConfigError::Malformed(spec.to_string()))?;
        let value: f64 = value
            .parse()
            .map_err(|_| ConfigError::Malformed(spec.to_string()))?;
        self.set(name, value)
    }
}
