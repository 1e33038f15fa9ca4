//! Generators, verifiers and falsification searches for the statement that
//! `log(xy) = log x + log y` forces `xy = yx`.
//!
//! Every randomized routine draws from a ChaCha stream keyed by
//! `(seed, trial index)`, so results do not depend on scheduling.

mod commuting;
mod falsify;
mod item3;
mod law;
mod prop3;
mod prop4;
pub mod random;
pub mod suites;

use thiserror::Error;

pub use commuting::{commuting_arg_pair_from, gen_commuting_arg_pair, ARG_MARGIN};
pub use falsify::{
    falsify_theorem, falsify_with_budget, Argmin, ControlSummary, Flag, HistogramBin, SearchOutcome, SearchReport,
    Target, TrialRow, DEFAULT_SEARCH_ITERATIONS,
};
pub use item3::{classify_prop1, gen_item3_pair, Item3Instance, Membership, Prop1Classification};
pub use law::{evaluate_law, log_law_report, CutDistances, LawReport, Provenance, Verdict};
pub use prop3::{random_prop3_instance, verify_prop3, EnsembleKind, Prop3Instance, Prop3Verdict};
pub use prop4::{verify_prop4_structure, Prop4Structure};

use crate::linalg::LinalgError;
use crate::matfun::MatFunError;
use crate::scalar::ScalarError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LawsError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    MatFun(#[from] MatFunError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("could not generate {what} after {attempts} attempts")]
    GenerationExhausted { what: &'static str, attempts: usize },
    #[error("trial count must be at least 1")]
    NoTrials,
}
