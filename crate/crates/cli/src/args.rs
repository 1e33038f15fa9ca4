use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "matlog", version, about = "Principal matrix logarithm laboratory")]
pub struct Cli {
    /// Override a named tolerance, e.g. `--tol law=1e-9`. Repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE", global = true)]
    pub tol: Vec<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Matrix exponential of a JSON matrix.
    Exp(MatrixIo),
    /// Principal logarithm of a JSON matrix.
    Log(MatrixIo),
    /// `phi(a) = (e^a - I) a^-1` of a JSON matrix.
    Phi(MatrixIo),
    /// Run a verification suite or falsification search.
    Verify(VerifyArgs),
    /// Count zeros of `e^z - lambda z - 1` inside a rectangle.
    #[command(allow_negative_numbers = true)]
    Zeros(ZerosArgs),
    /// List nonzero roots of `e^u = 1 + u`.
    #[command(name = "roots-u", allow_negative_numbers = true)]
    RootsU(RootsArgs),
}

#[derive(Debug, Args)]
pub struct MatrixIo {
    /// Input matrix: {"n": N, "data": [[re, im], ...]}.
    #[arg(short, long)]
    pub input: PathBuf,
    /// Output path; standard output when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyTarget {
    ArgLaw,
    Item3,
    Prop2,
    Prop3,
    Thm1,
    Thm2,
    Prop4,
}

impl VerifyTarget {
    pub fn default_trials(self) -> usize {
        match self {
            Self::ArgLaw | Self::Prop3 => 200,
            Self::Item3 => 50,
            Self::Prop2 => 100,
            Self::Thm1 | Self::Thm2 | Self::Prop4 => 10_000,
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub target: VerifyTarget,
    /// Number of trials; defaults depend on the target.
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Matrix dimension for thm2 and prop4.
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    /// Report path; standard output when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Per-trial CSV summary (thm1, thm2, prop4).
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ZerosArgs {
    /// The `lambda` in `e^z - lambda z - 1`, written `a+bi`.
    #[arg(long)]
    pub lambda: String,
    #[arg(long, num_args = 4, value_names = ["RE_LO", "RE_HI", "IM_LO", "IM_HI"])]
    pub rect: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct RootsArgs {
    #[arg(long)]
    pub count: usize,
    /// Search band; a band above the origin holding `count` roots by default.
    #[arg(long, num_args = 4, value_names = ["RE_LO", "RE_HI", "IM_LO", "IM_HI"])]
    pub band: Option<Vec<f64>>,
}
