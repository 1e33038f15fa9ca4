use serde::Serialize;

use super::LawsError;
use crate::config::Tolerances;
use crate::linalg::{commutator, ComplexMatrix};
use crate::matfun::{log_with_cut_report, LogOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    LawHoldsCommuting,
    /// Candidate counterexample.
    LawHoldsNoncommuting,
    LawFails,
    Inapplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutDistances {
    pub x: f64,
    pub y: f64,
    pub xy: f64,
}

impl CutDistances {
    pub fn min(&self) -> f64 {
        self.x.min(self.y).min(self.xy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub seed: u64,
    pub trial: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawReport {
    /// `||log(xy) - log x - log y||_F / (||log x||_F + ||log y||_F + 1)`;
    /// absent when the law is inapplicable.
    pub law_residual: Option<f64>,
    /// `||xy - yx||_F / (||x||_F ||y||_F)`.
    pub commutator_norm: f64,
    pub cut_distances: CutDistances,
    pub verdict: Verdict,
    /// Some spectrum is off the cut but closer than `low_confidence_cut`.
    pub low_confidence: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl LawReport {
    pub fn with_provenance(mut self, seed: u64, trial: u64) -> Self {
        self.provenance = Some(Provenance { seed, trial });
        self
    }
}

pub fn log_law_report(x: &ComplexMatrix, y: &ComplexMatrix, tol: &Tolerances) -> Result<LawReport, LawsError> {
    if x.dim() != y.dim() {
        return Err(crate::linalg::LinalgError::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        }
        .into());
    }
    let lx = log_with_cut_report(x, tol);
    let ly = log_with_cut_report(y, tol);
    Ok(evaluate_law(x, &lx, y, &ly, tol))
}

/// Law report from precomputed logarithms of `x` and `y`.
///
/// Matrix-function failures become [`Verdict::Inapplicable`] with a note.
pub fn evaluate_law(
    x: &ComplexMatrix,
    lx: &Result<LogOutcome, crate::matfun::MatFunError>,
    y: &ComplexMatrix,
    ly: &Result<LogOutcome, crate::matfun::MatFunError>,
    tol: &Tolerances,
) -> LawReport {
    let xy = x * y;
    let commutator_norm = commutator(x, y)
        .map(|c| c.norm_fro() / (x.norm_fro() * y.norm_fro()))
        .unwrap_or(f64::NAN);
    let lxy = log_with_cut_report(&xy, tol);

    let distance = |o: &Result<LogOutcome, _>| o.as_ref().map_or(0.0, |o| o.cut.min_cut_distance);
    let cut_distances = CutDistances {
        x: distance(lx),
        y: distance(ly),
        xy: distance(&lxy),
    };
    let inapplicable = |note: String| LawReport {
        law_residual: None,
        commutator_norm,
        cut_distances,
        verdict: Verdict::Inapplicable,
        low_confidence: false,
        note: Some(note),
        provenance: None,
    };

    let mut logs = Vec::with_capacity(3);
    for (name, outcome) in [("x", lx), ("y", ly), ("xy", &lxy)] {
        match outcome {
            Ok(LogOutcome { log: Some(l), .. }) => logs.push(l),
            Ok(LogOutcome { cut, .. }) => {
                return inapplicable(format!(
                    "spectrum of {name} is within {:e} of the cut",
                    cut.min_cut_distance
                ))
            }
            Err(e) => return inapplicable(format!("log {name}: {e}")),
        }
    }
    let (log_x, log_y, log_xy) = (logs[0], logs[1], logs[2]);
    let defect = &(log_xy - log_x) - log_y;
    let law_residual = defect.norm_fro() / (log_x.norm_fro() + log_y.norm_fro() + 1.0);
    let verdict = if law_residual <= tol.law {
        if commutator_norm <= tol.commuting {
            Verdict::LawHoldsCommuting
        } else {
            Verdict::LawHoldsNoncommuting
        }
    } else {
        Verdict::LawFails
    };
    LawReport {
        law_residual: Some(law_residual),
        commutator_norm,
        cut_distances,
        verdict,
        low_confidence: cut_distances.min() < tol.low_confidence_cut,
        note: None,
        provenance: None,
    }
}
