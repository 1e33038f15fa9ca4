mod args;

use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::Parser;
use matlog_core::laws::{self, suites, LawsError, Target};
use matlog_core::matfun::MatrixFunction;
use matlog_core::scalar::{self, format_complex, Rectangle, ScalarError, USetScan};
use matlog_core::{ComplexMatrix, Tolerances};

use args::{Cli, Command, MatrixIo, RootsArgs, VerifyArgs, VerifyTarget, ZerosArgs};

/// A failed run and the exit status it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    /// Bad input, bad configuration or I/O.
    fn config(error: impl Into<anyhow::Error>) -> Self {
        Self { code: 1, error: error.into() }
    }

    /// The input is well formed but outside the domain of the computation.
    fn domain(error: impl Into<anyhow::Error>) -> Self {
        Self { code: 2, error: error.into() }
    }

    /// A run completed and raised a flag or broke an invariant.
    fn flagged(error: impl Into<anyhow::Error>) -> Self {
        Self { code: 3, error: error.into() }
    }
}

impl From<LawsError> for Failure {
    fn from(e: LawsError) -> Self {
        match e {
            LawsError::NoTrials | LawsError::Precondition(_) => Self::config(e),
            _ => Self::domain(e),
        }
    }
}

impl From<ScalarError> for Failure {
    fn from(e: ScalarError) -> Self {
        match e {
            ScalarError::InvalidRectangle(_)
            | ScalarError::ParseComplex(_)
            | ScalarError::BandTouchesOrigin(_)
            | ScalarError::Precondition(_) => Self::config(e),
            ScalarError::CensusMismatch { .. } => Self::flagged(e),
            _ => Self::domain(e),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let mut tol = Tolerances::default();
    for spec in &cli.tol {
        tol.apply_override(spec).map_err(Failure::config)?;
    }
    match cli.command {
        Command::Exp(io) => matrix_command(MatrixFunction::Exp, &io, &tol),
        Command::Log(io) => matrix_command(MatrixFunction::Log, &io, &tol),
        Command::Phi(io) => matrix_command(MatrixFunction::Phi, &io, &tol),
        Command::Verify(v) => verify(&v, &tol),
        Command::Zeros(z) => zeros(&z, &tol),
        Command::RootsU(r) => roots_u(&r, &tol),
    }
}

fn emit(output: Option<&Path>, text: &str) -> CmdResult {
    match output {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::config),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}").map_err(Failure::config)
        }
    }
}

fn matrix_command(f: MatrixFunction, io: &MatrixIo, tol: &Tolerances) -> CmdResult {
    let text = fs::read_to_string(&io.input)
        .with_context(|| format!("reading {}", io.input.display()))
        .map_err(Failure::config)?;
    let a: ComplexMatrix = serde_json::from_str(&text)
        .with_context(|| format!("parsing matrix from {}", io.input.display()))
        .map_err(Failure::config)?;
    let result = f
        .apply(&a, tol)
        .map_err(|e| Failure::domain(anyhow!("{f}: {e}")))?;
    let json = serde_json::to_string(&result).map_err(Failure::config)?;
    emit(io.output.as_deref(), &json)
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value).map_err(Failure::config)
}

fn verify(v: &VerifyArgs, tol: &Tolerances) -> CmdResult {
    let trials = v.trials.unwrap_or_else(|| v.target.default_trials());
    let search = match v.target {
        VerifyTarget::Thm1 => Some(Target::Thm1),
        VerifyTarget::Thm2 => Some(Target::Thm2 { n: v.dim }),
        VerifyTarget::Prop4 => Some(Target::Prop4 { n: v.dim }),
        _ => None,
    };
    if search.is_none() && v.csv.is_some() {
        return Err(Failure::config(anyhow!(
            "--csv is available for thm1, thm2 and prop4 only"
        )));
    }

    let (json, pass, summary) = match (v.target, search) {
        (_, Some(target)) => {
            let outcome = laws::falsify_theorem(target, trials, v.seed, tol)?;
            if let Some(path) = &v.csv {
                write_csv(path, &outcome.rows)?;
            }
            let r = &outcome.report;
            let summary = format!(
                "{target}: {} noncommuting samples, {} skipped, min law residual {}, {} flags",
                r.noncommuting_samples,
                r.skipped_trials,
                r.min_law_residual.map_or("n/a".to_string(), |x| format!("{x:.3e}")),
                r.flags.len(),
            );
            (to_json(r)?, r.pass, summary)
        }
        (VerifyTarget::ArgLaw, None) => {
            let r = suites::run_arg_law(trials, v.seed, tol)?;
            let summary = format!(
                "arg-law: {} failures, max law residual {:.3e}",
                r.failures.len(),
                r.max_law_residual
            );
            (to_json(&r)?, r.pass, summary)
        }
        (VerifyTarget::Item3, None) => {
            let r = suites::run_item3(trials, v.seed, tol)?;
            (to_json(&r)?, r.pass, format!("item3: {trials} pairs"))
        }
        (VerifyTarget::Prop2, None) => {
            let r = suites::run_prop2(trials, v.seed, tol)?;
            (to_json(&r)?, r.pass, format!("prop2: {trials} trials"))
        }
        (VerifyTarget::Prop3, None) => {
            let r = suites::run_prop3(trials, v.seed, tol)?;
            (to_json(&r)?, r.pass, format!("prop3: {trials} trials"))
        }
        (VerifyTarget::Thm1 | VerifyTarget::Thm2 | VerifyTarget::Prop4, None) => unreachable!(),
    };
    emit(v.output.as_deref(), &json)?;
    eprintln!("{summary}: {}", if pass { "PASS" } else { "FAIL" });
    if pass {
        Ok(())
    } else {
        Err(Failure::flagged(anyhow!("verification did not pass; see the report")))
    }
}

fn write_csv(path: &Path, rows: &[laws::TrialRow]) -> CmdResult {
    let mut w = csv::Writer::from_path(path)
        .with_context(|| format!("creating {}", path.display()))
        .map_err(Failure::config)?;
    for row in rows {
        w.serialize(row).map_err(Failure::config)?;
    }
    w.flush().map_err(Failure::config)
}

fn rectangle(v: &[f64]) -> Result<Rectangle, Failure> {
    match *v {
        [a, b, c, d] => Ok(Rectangle::new(a, b, c, d)?),
        _ => Err(Failure::config(anyhow!("a rectangle needs four numbers"))),
    }
}

fn zeros(z: &ZerosArgs, tol: &Tolerances) -> CmdResult {
    let lambda = scalar::parse_complex(&z.lambda)?;
    let rect = rectangle(&z.rect)?;
    let census = scalar::winding_zero_count(lambda, rect, tol)?;
    emit(None, &to_json(&census)?)
}

fn roots_u(r: &RootsArgs, tol: &Tolerances) -> CmdResult {
    if r.count == 0 {
        return Err(Failure::config(anyhow!("--count must be at least 1")));
    }
    let band = match &r.band {
        Some(v) => rectangle(v)?,
        None => scalar::default_u_band(r.count),
    };
    let roots = scalar::solve_u_set(r.count, band, tol)?;
    let mut text = String::new();
    let mut violations = Vec::new();
    for &u in &roots {
        let residual = USetScan::residual(u);
        text.push_str(&format!("{}\t{residual:.3e}\n", format_complex(u)));
        if u.im.abs() <= 2.0 * std::f64::consts::PI {
            violations.push(format!("|Im {}| <= 2 pi", format_complex(u)));
        }
        if residual > tol.root_residual {
            violations.push(format!("residual {residual:e} at {}", format_complex(u)));
        }
    }
    print!("{text}");
    if roots.len() < r.count {
        eprintln!("band {band} holds only {} roots", roots.len());
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::flagged(anyhow!(violations.join("; "))))
    }
}
