//! Randomized searches for noncommuting pairs obeying the log addition law.
//!
//! Each trial samples a noncommuting pair from the target class, then runs a
//! derivative-free compass search on the law residual: a random coordinate
//! of `x` or `y` is moved by `+delta` then `-delta`; a success grows the step,
//! two failures halve it. The search keeps the pair inside the class, inside
//! the sampling envelope and above the noncommuting floor.

use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::commuting::commuting_arg_pair_from;
use super::law::{evaluate_law, LawReport, Verdict};
use super::random::{
    hermitian_part, in_norm_range, random_unitary, sample_dense, sample_hermitian_pd, sample_upper_triangular,
    trial_rng, unit_square, MIN_CUT_DISTANCE, NORM_RANGE,
};
use super::LawsError;
use crate::config::Tolerances;
use crate::linalg::ComplexMatrix;
use crate::matfun::{log_with_cut_report, LogOutcome, MatFunError};
use crate::Complex64;

pub const DEFAULT_SEARCH_ITERATIONS: usize = 200;
const INITIAL_STEP: f64 = 0.25;
const MAX_STEP: f64 = 1.0;
/// The search stops once the step falls below this.
const MIN_STEP: f64 = 1e-6;
const SAMPLE_ATTEMPTS: usize = 32;
/// One commuting control per this many search trials (at least one).
const CONTROL_RATIO: usize = 20;
/// Control trials draw from streams offset by this much.
const CONTROL_STREAM_BASE: u64 = 1 << 40;
const HISTOGRAM_DECADES: std::ops::RangeInclusive<i32> = -16..=2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// Dense `2 x 2` pairs.
    Thm1,
    /// Simultaneously upper triangular `n x n` pairs.
    Thm2 { n: usize },
    /// Hermitian positive definite `n x n` pairs.
    Prop4 { n: usize },
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Self::Thm1 => "thm1",
            Self::Thm2 { .. } => "thm2",
            Self::Prop4 { .. } => "prop4",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Self::Thm1 => 2,
            Self::Thm2 { n } | Self::Prop4 { n } => n,
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (n = {})", self.name(), self.dim())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Flag {
    pub trial: u64,
    pub law_residual: f64,
    pub commutator_norm: f64,
    pub verdict: Verdict,
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistogramBin {
    /// Inclusive lower edge; the first bin also holds everything below.
    pub lo: f64,
    /// Exclusive upper edge; the last bin also holds everything above.
    pub hi: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Argmin {
    pub trial: u64,
    pub law_residual: f64,
    pub commutator_norm: f64,
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ControlSummary {
    pub count: usize,
    pub law_holds_commuting: usize,
    /// Control indices whose verdict was not `LAW_HOLDS_COMMUTING`.
    pub failures: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub command: String,
    pub target: &'static str,
    pub dim: usize,
    pub seed: u64,
    pub trials: usize,
    pub version: &'static str,
    pub tolerances: Tolerances,
    pub search_iterations: usize,
    pub noncommuting_samples: usize,
    /// Trials where no admissible noncommuting pair was drawn.
    pub skipped_trials: usize,
    pub min_law_residual: Option<f64>,
    pub argmin: Option<Argmin>,
    pub flags: Vec<Flag>,
    pub histogram: Vec<HistogramBin>,
    pub controls: ControlSummary,
    pub pass: bool,
}

/// One CSV row per trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRow {
    pub trial: u64,
    pub kind: &'static str,
    pub initial_residual: Option<f64>,
    pub final_residual: Option<f64>,
    pub commutator_norm: Option<f64>,
    pub evaluations: usize,
    pub verdict: Option<Verdict>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub report: SearchReport,
    pub rows: Vec<TrialRow>,
}

struct SearchResult {
    trial: u64,
    x: ComplexMatrix,
    y: ComplexMatrix,
    initial: f64,
    report: LawReport,
    evaluations: usize,
}

pub fn falsify_theorem(
    target: Target,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<SearchOutcome, LawsError> {
    falsify_with_budget(target, trials, seed, DEFAULT_SEARCH_ITERATIONS, tol)
}

pub fn falsify_with_budget(
    target: Target,
    trials: usize,
    seed: u64,
    iterations: usize,
    tol: &Tolerances,
) -> Result<SearchOutcome, LawsError> {
    if trials == 0 {
        return Err(LawsError::NoTrials);
    }
    if target.dim() == 0 {
        return Err(LawsError::Precondition("dimension must be positive".into()));
    }
    let searches: Vec<Option<SearchResult>> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| search_trial(target, seed, trial, iterations, tol))
        .collect();
    let control_count = (trials / CONTROL_RATIO).max(1);
    let controls: Vec<(u64, Option<LawReport>)> = (0..control_count as u64)
        .into_par_iter()
        .map(|k| (k, control_trial(target, seed, k, tol)))
        .collect();

    let mut rows = Vec::with_capacity(trials + control_count);
    let mut flags = Vec::new();
    let mut argmin: Option<Argmin> = None;
    let mut counts = vec![0usize; HISTOGRAM_DECADES.count()];
    let mut noncommuting = 0;
    let mut skipped = 0;
    for (trial, result) in searches.into_iter().enumerate() {
        let Some(r) = result else {
            skipped += 1;
            rows.push(TrialRow {
                trial: trial as u64,
                kind: "skipped",
                initial_residual: None,
                final_residual: None,
                commutator_norm: None,
                evaluations: 0,
                verdict: None,
            });
            continue;
        };
        noncommuting += 1;
        let residual = r.report.law_residual.expect("admissible pairs have a residual");
        counts[histogram_slot(residual)] += 1;
        if residual < tol.counterexample || r.report.verdict == Verdict::LawHoldsNoncommuting {
            flags.push(Flag {
                trial: r.trial,
                law_residual: residual,
                commutator_norm: r.report.commutator_norm,
                verdict: r.report.verdict,
                x: r.x.clone(),
                y: r.y.clone(),
            });
        }
        rows.push(TrialRow {
            trial: r.trial,
            kind: "search",
            initial_residual: Some(r.initial),
            final_residual: Some(residual),
            commutator_norm: Some(r.report.commutator_norm),
            evaluations: r.evaluations,
            verdict: Some(r.report.verdict),
        });
        if argmin.as_ref().is_none_or(|a| residual < a.law_residual) {
            argmin = Some(Argmin {
                trial: r.trial,
                law_residual: residual,
                commutator_norm: r.report.commutator_norm,
                x: r.x,
                y: r.y,
            });
        }
    }

    let mut control_summary = ControlSummary {
        count: control_count,
        law_holds_commuting: 0,
        failures: Vec::new(),
    };
    for (k, report) in controls {
        let verdict = report.as_ref().map(|r| r.verdict);
        if verdict == Some(Verdict::LawHoldsCommuting) {
            control_summary.law_holds_commuting += 1;
        } else {
            control_summary.failures.push(k);
        }
        rows.push(TrialRow {
            trial: k,
            kind: "control",
            initial_residual: None,
            final_residual: report.as_ref().and_then(|r| r.law_residual),
            commutator_norm: report.as_ref().map(|r| r.commutator_norm),
            evaluations: 1,
            verdict,
        });
    }

    let histogram = HISTOGRAM_DECADES
        .zip(counts)
        .map(|(e, count)| HistogramBin {
            lo: 10f64.powi(e),
            hi: 10f64.powi(e + 1),
            count,
        })
        .collect();
    let pass = flags.is_empty() && control_summary.failures.is_empty() && noncommuting > 0;
    let report = SearchReport {
        command: format!("verify {}", target.name()),
        target: target.name(),
        dim: target.dim(),
        seed,
        trials,
        version: crate::VERSION,
        tolerances: *tol,
        search_iterations: iterations,
        noncommuting_samples: noncommuting,
        skipped_trials: skipped,
        min_law_residual: argmin.as_ref().map(|a| a.law_residual),
        argmin,
        flags,
        histogram,
        controls: control_summary,
        pass,
    };
    Ok(SearchOutcome { report, rows })
}

fn histogram_slot(residual: f64) -> usize {
    let lo = *HISTOGRAM_DECADES.start();
    let hi = *HISTOGRAM_DECADES.end();
    let e = if residual > 0.0 { residual.log10().floor() as i32 } else { lo };
    (e.clamp(lo, hi) - lo) as usize
}

type Log = Result<LogOutcome, MatFunError>;

/// Law report if the pair is inside the search constraints.
fn admissible(
    x: &ComplexMatrix,
    lx: &Log,
    y: &ComplexMatrix,
    ly: &Log,
    tol: &Tolerances,
) -> Option<LawReport> {
    if !in_norm_range(x) || !in_norm_range(y) {
        return None;
    }
    let report = evaluate_law(x, lx, y, ly, tol);
    let ok = report.law_residual.is_some()
        && report.cut_distances.min() >= MIN_CUT_DISTANCE
        && report.commutator_norm >= tol.noncommuting_floor;
    ok.then_some(report)
}

fn sample(target: Target, rng: &mut impl Rng, tol: &Tolerances) -> Option<ComplexMatrix> {
    match target {
        Target::Thm1 => sample_dense(rng, 2, tol),
        Target::Thm2 { n } => sample_upper_triangular(rng, n, tol),
        Target::Prop4 { n } => Some(sample_hermitian_pd(rng, n)),
    }
}

/// Moves one coordinate while staying in the target class.
fn perturb(target: Target, m: &ComplexMatrix, rng: &mut impl Rng, step: f64) -> (ComplexMatrix, (usize, usize), Complex64) {
    let n = m.dim();
    let (i, j) = match target {
        Target::Thm1 => (rng.gen_range(0..n), rng.gen_range(0..n)),
        Target::Thm2 { .. } | Target::Prop4 { .. } => {
            let i = rng.gen_range(0..n);
            (i, rng.gen_range(i..n))
        }
    };
    let mut delta = unit_square(rng) * step;
    if matches!(target, Target::Prop4 { .. }) && i == j {
        delta.im = 0.0;
    }
    (apply(target, m, (i, j), delta), (i, j), delta)
}

fn apply(target: Target, m: &ComplexMatrix, (i, j): (usize, usize), delta: Complex64) -> ComplexMatrix {
    let mut out = m.clone();
    out[(i, j)] += delta;
    if matches!(target, Target::Prop4 { .. }) && i != j {
        out[(j, i)] += delta.conj();
    }
    out
}

fn search_trial(target: Target, seed: u64, trial: u64, iterations: usize, tol: &Tolerances) -> Option<SearchResult> {
    let mut rng = trial_rng(seed, trial);
    let (mut x, mut lx, mut y, mut ly, mut best) = (0..SAMPLE_ATTEMPTS).find_map(|_| {
        let x = sample(target, &mut rng, tol)?;
        let y = sample(target, &mut rng, tol)?;
        let lx = log_with_cut_report(&x, tol);
        let ly = log_with_cut_report(&y, tol);
        let report = admissible(&x, &lx, &y, &ly, tol)?;
        Some((x, lx, y, ly, report))
    })?;
    let initial = best.law_residual.expect("admissible");

    let mut step = INITIAL_STEP;
    let mut evaluations = 0;
    while evaluations < iterations && step >= MIN_STEP {
        let move_x = rng.gen::<bool>();
        let current = if move_x { &x } else { &y };
        let (plus, at, delta) = perturb(target, current, &mut rng, step);
        let mut improved = false;
        for candidate in [plus, apply(target, current, at, -delta)] {
            if evaluations >= iterations {
                break;
            }
            evaluations += 1;
            let lc = log_with_cut_report(&candidate, tol);
            let report = if move_x {
                admissible(&candidate, &lc, &y, &ly, tol)
            } else {
                admissible(&x, &lx, &candidate, &lc, tol)
            };
            let Some(report) = report else { continue };
            if report.law_residual < best.law_residual {
                if move_x {
                    (x, lx) = (candidate, lc);
                } else {
                    (y, ly) = (candidate, lc);
                }
                best = report;
                improved = true;
                break;
            }
        }
        step = if improved { (step * 1.5).min(MAX_STEP) } else { step * 0.5 };
    }
    Some(SearchResult {
        trial,
        x,
        y,
        initial,
        report: best.with_provenance(seed, trial),
        evaluations,
    })
}

/// A commuting pair from the target class; its verdict must be `LAW_HOLDS_COMMUTING`.
fn control_trial(target: Target, seed: u64, k: u64, tol: &Tolerances) -> Option<LawReport> {
    let mut rng = trial_rng(seed, CONTROL_STREAM_BASE + k);
    let (x, y) = match target {
        Target::Thm1 | Target::Thm2 { .. } => commuting_arg_pair_from(&mut rng, target.dim(), tol).ok()?,
        Target::Prop4 { n } => {
            let q = random_unitary(&mut rng, n);
            let hi = NORM_RANGE.1 / (n as f64).sqrt();
            let mut pd = || {
                let d: Vec<Complex64> = (0..n)
                    .map(|_| Complex64::new(rng.gen_range(MIN_CUT_DISTANCE..=hi), 0.0))
                    .collect();
                hermitian_part(&(&(&q * &ComplexMatrix::from_diag(&d)) * &q.conj_transpose()))
            };
            let x = pd();
            (x, pd())
        }
    };
    let lx = log_with_cut_report(&x, tol);
    let ly = log_with_cut_report(&y, tol);
    Some(evaluate_law(&x, &lx, &y, &ly, tol).with_provenance(seed, CONTROL_STREAM_BASE + k))
}
