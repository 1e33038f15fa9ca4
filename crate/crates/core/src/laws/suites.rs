//! Seeded verification suites with serializable reports.
//!
//! Each suite runs `trials` independent trials, each on its own stream
//! `(seed, trial)`, and embeds the full configuration in its report.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::commuting::commuting_arg_pair_from;
use super::item3::{classify_prop1, gen_item3_pair};
use super::law::{log_law_report, LawReport, Verdict};
use super::prop3::{random_prop3_instance, verify_prop3, EnsembleKind, Prop3Verdict};
use super::random::{random_similarity, trial_rng, unit_square};
use super::LawsError;
use crate::config::Tolerances;
use crate::scalar::census::ser_complex;
use crate::scalar::{companions, first_u_roots, phi_scalar, verify_prop2_window, Rectangle, ScalarError};
use crate::Complex64;

/// Roots of `e^u = 1 + u` consulted by the classifier.
pub const CLASSIFIER_ROOTS: usize = 20;
const COMPANION_GRID_STEP: f64 = 0.5;
const DRAWS_PER_TRIAL: usize = 8;
/// Fraction of `prop2` trials that must find a clean window.
pub const PROP2_RESOLVE_FRACTION: f64 = 0.95;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportHeader {
    pub command: String,
    pub seed: u64,
    pub trials: usize,
    pub version: &'static str,
    pub tolerances: Tolerances,
}

impl ReportHeader {
    fn new(target: &str, seed: u64, trials: usize, tol: &Tolerances) -> Self {
        Self {
            command: format!("verify {target}"),
            seed,
            trials,
            version: crate::VERSION,
            tolerances: *tol,
        }
    }
}

fn check_trials(trials: usize) -> Result<(), LawsError> {
    if trials == 0 {
        Err(LawsError::NoTrials)
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArgLawReport {
    #[serde(flatten)]
    pub header: ReportHeader,
    pub max_law_residual: f64,
    pub max_commutator_norm: f64,
    /// Trials whose verdict was not `LAW_HOLDS_COMMUTING`.
    pub failures: Vec<LawReport>,
    pub pass: bool,
}

/// Commuting pairs with `|arg l_j + arg m_j| < pi`, `n` cycling over 2, 3, 4.
pub fn run_arg_law(trials: usize, seed: u64, tol: &Tolerances) -> Result<ArgLawReport, LawsError> {
    check_trials(trials)?;
    let reports: Vec<LawReport> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let n = 2 + (trial % 3) as usize;
            let (x, y) = commuting_arg_pair_from(&mut rng, n, tol)?;
            Ok(log_law_report(&x, &y, tol)?.with_provenance(seed, trial))
        })
        .collect::<Result<_, LawsError>>()?;
    let max_law_residual = reports
        .iter()
        .map(|r| r.law_residual.unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    let max_commutator_norm = reports.iter().map(|r| r.commutator_norm).fold(0.0, f64::max);
    let failures: Vec<LawReport> = reports
        .into_iter()
        .filter(|r| r.verdict != Verdict::LawHoldsCommuting)
        .collect();
    Ok(ArgLawReport {
        header: ReportHeader::new("arg-law", seed, trials, tol),
        max_law_residual,
        max_commutator_norm,
        pass: failures.is_empty(),
        failures,
    })
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Item3Row {
    pub trial: u64,
    #[serde(serialize_with = "ser_complex")]
    pub u: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub v: Complex64,
    pub conjugated: bool,
    pub identity_residual: f64,
    pub commutator_norm: f64,
    /// `|phi(v - u) - phi(-u)|`.
    pub shift_residual: f64,
    pub classified_item3: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Item3Report {
    #[serde(flatten)]
    pub header: ReportHeader,
    pub max_identity_residual: f64,
    pub min_commutator_norm: f64,
    pub max_shift_residual: f64,
    pub rows: Vec<Item3Row>,
    pub pass: bool,
}

/// Exceptional pairs built from companions of random `u`, half of them
/// conjugated by a random similarity.
pub fn run_item3(trials: usize, seed: u64, tol: &Tolerances) -> Result<Item3Report, LawsError> {
    check_trials(trials)?;
    let roots = first_u_roots(CLASSIFIER_ROOTS, tol)?;
    let rows: Vec<Item3Row> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| item3_trial(seed, trial, &roots, tol))
        .collect::<Result<_, LawsError>>()?;
    let max_identity_residual = rows.iter().map(|r| r.identity_residual).fold(0.0, f64::max);
    let min_commutator_norm = rows.iter().map(|r| r.commutator_norm).fold(f64::INFINITY, f64::min);
    let max_shift_residual = rows.iter().map(|r| r.shift_residual).fold(0.0, f64::max);
    let pass = max_identity_residual <= tol.item3_identity
        && min_commutator_norm >= 1e-3
        && rows.iter().all(|r| r.classified_item3);
    Ok(Item3Report {
        header: ReportHeader::new("item3", seed, trials, tol),
        max_identity_residual,
        min_commutator_norm,
        max_shift_residual,
        rows,
        pass,
    })
}

fn item3_trial(seed: u64, trial: u64, roots: &[Complex64], tol: &Tolerances) -> Result<Item3Row, LawsError> {
    let mut rng = trial_rng(seed, trial);
    for _ in 0..DRAWS_PER_TRIAL {
        let u = Complex64::new(rng.gen_range(-2.0..=2.0), rng.gen_range(-3.0..=3.0));
        if u.norm() < 0.5 {
            continue;
        }
        let band = Rectangle::new(-8.0, 12.0, u.im + 2.0 * PI - 0.5, u.im + 4.0 * PI + 0.5)?;
        let Some(pair) = companions(u, band, COMPANION_GRID_STEP, tol)?.into_iter().next() else {
            continue;
        };
        let lambda = unit_square(&mut rng).scale(0.5);
        let mu = unit_square(&mut rng).scale(0.5);
        let conjugator = if trial % 2 == 1 {
            Some(random_similarity(&mut rng, 2, tol).ok_or(LawsError::GenerationExhausted {
                what: "similarity",
                attempts: DRAWS_PER_TRIAL,
            })?)
        } else {
            None
        };
        let inst = gen_item3_pair(pair.u, pair.v, lambda, mu, conjugator.as_ref().map(|(s, _)| s), tol)?;
        let class = classify_prop1(&inst.a, &inst.b, roots, tol)?;
        return Ok(Item3Row {
            trial,
            u: pair.u,
            v: pair.v,
            conjugated: conjugator.is_some(),
            identity_residual: inst.identity_residual,
            commutator_norm: inst.commutator_norm,
            shift_residual: (phi_scalar(pair.v - pair.u) - phi_scalar(-pair.u)).norm(),
            classified_item3: class.applicable && class.item3,
        });
    }
    Err(LawsError::GenerationExhausted {
        what: "companion pair",
        attempts: DRAWS_PER_TRIAL,
    })
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop2Row {
    pub trial: u64,
    #[serde(serialize_with = "ser_complex")]
    pub u: Complex64,
    /// Values of `u` that had no clean window before this one.
    pub redraws: usize,
    pub resolved: bool,
    pub a: Option<f64>,
    pub count: Option<usize>,
    pub segments: Option<usize>,
    pub rejected_offsets: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop2Report {
    #[serde(flatten)]
    pub header: ReportHeader,
    pub resolved: usize,
    pub required: usize,
    /// Resolved windows whose count differs from 2.
    pub violations: Vec<u64>,
    pub rows: Vec<Prop2Row>,
    pub pass: bool,
}

/// Two-zero windows for random `u` with `|u| >= 0.5`, `|Im u| < 2 pi`.
pub fn run_prop2(trials: usize, seed: u64, tol: &Tolerances) -> Result<Prop2Report, LawsError> {
    check_trials(trials)?;
    let rows: Vec<Prop2Row> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| prop2_trial(seed, trial, tol))
        .collect::<Result<_, LawsError>>()?;
    let resolved = rows.iter().filter(|r| r.resolved).count();
    let required = (PROP2_RESOLVE_FRACTION * trials as f64).ceil() as usize;
    let violations: Vec<u64> = rows
        .iter()
        .filter(|r| r.resolved && r.count != Some(2))
        .map(|r| r.trial)
        .collect();
    Ok(Prop2Report {
        header: ReportHeader::new("prop2", seed, trials, tol),
        pass: violations.is_empty() && resolved >= required,
        resolved,
        required,
        violations,
        rows,
    })
}

fn prop2_trial(seed: u64, trial: u64, tol: &Tolerances) -> Result<Prop2Row, LawsError> {
    let mut rng = trial_rng(seed, trial);
    let draw = |rng: &mut rand_chacha::ChaCha8Rng| loop {
        let u = Complex64::new(rng.gen_range(-6.0..=6.0), rng.gen_range(-0.98..=0.98) * 2.0 * PI);
        if u.norm() >= 0.5 {
            return u;
        }
    };
    let mut u = draw(&mut rng);
    for redraws in 0..3 {
        match verify_prop2_window(u, tol) {
            Ok(w) => {
                return Ok(Prop2Row {
                    trial,
                    u,
                    redraws,
                    resolved: true,
                    a: Some(w.a),
                    count: Some(w.census.count),
                    segments: Some(w.census.segments),
                    rejected_offsets: Some(w.rejected_offsets),
                })
            }
            Err(ScalarError::NoValidWindow { .. }) => u = draw(&mut rng),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Prop2Row {
        trial,
        u,
        redraws: 3,
        resolved: false,
        a: None,
        count: None,
        segments: None,
        rejected_offsets: None,
    })
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop3Row {
    pub trial: u64,
    pub n: usize,
    pub kind: EnsembleKind,
    #[serde(flatten)]
    pub verdict: Prop3Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop3Report {
    #[serde(flatten)]
    pub header: ReportHeader,
    pub identity_holds: usize,
    pub disagreements: Vec<u64>,
    pub borderline: Vec<u64>,
    pub necessity_failures: Vec<u64>,
    pub rows: Vec<Prop3Row>,
    pub pass: bool,
}

/// Random block instances, `n` cycling over 3, 4, 5 and the ensemble kind
/// over [`EnsembleKind::ALL`].
pub fn run_prop3(trials: usize, seed: u64, tol: &Tolerances) -> Result<Prop3Report, LawsError> {
    check_trials(trials)?;
    let roots = first_u_roots(3, tol)?;
    let band = Rectangle::new(-8.0, 12.0, 2.0 * PI, 4.0 * PI + 1.0)?;
    let mut pairs = Vec::new();
    for u in [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.7), Complex64::new(0.5, -1.5)] {
        pairs.extend(companions(u, band, COMPANION_GRID_STEP, tol)?.into_iter().map(|p| (p.u, p.v)));
    }
    let rows: Vec<Prop3Row> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let n = 3 + (trial % 3) as usize;
            let kind = EnsembleKind::ALL[(trial % 4) as usize];
            let inst = random_prop3_instance(&mut rng, n, kind, &pairs, &roots)?;
            Ok(Prop3Row {
                trial,
                n,
                kind,
                verdict: verify_prop3(&inst, tol)?,
            })
        })
        .collect::<Result<_, LawsError>>()?;
    let select = |f: &dyn Fn(&Prop3Verdict) -> bool| -> Vec<u64> {
        rows.iter().filter(|r| f(&r.verdict)).map(|r| r.trial).collect()
    };
    let disagreements = select(&|v| !v.agrees());
    let borderline = select(&|v| v.borderline);
    let necessity_failures = select(&|v| !v.necessity_ok());
    Ok(Prop3Report {
        header: ReportHeader::new("prop3", seed, trials, tol),
        identity_holds: rows.iter().filter(|r| r.verdict.identity_holds).count(),
        pass: disagreements.is_empty() && borderline.is_empty() && necessity_failures.is_empty(),
        disagreements,
        borderline,
        necessity_failures,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn arg_law_small_run() {
        let r = run_arg_law(12, 3, &tol()).unwrap();
        assert!(r.pass && r.max_law_residual <= 1e-8, "{:?}", r.failures);
    }

    #[test]
    fn item3_small_run() {
        let r = run_item3(4, 7, &tol()).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.max_shift_residual < 1e-10);
        assert!(r.rows.iter().any(|row| row.conjugated));
    }

    #[test]
    fn prop2_small_run() {
        let r = run_prop2(6, 1, &tol()).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn prop3_small_run() {
        let r = run_prop3(12, 2, &tol()).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.identity_holds >= 9);
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(matches!(run_arg_law(0, 0, &tol()), Err(LawsError::NoTrials)));
        assert!(matches!(run_prop2(0, 0, &tol()), Err(LawsError::NoTrials)));
    }
}
