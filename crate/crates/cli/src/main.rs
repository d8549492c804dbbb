//! `trace-relations`: enumerate trace invariants and compute, tabulate and
//! verify the linear relations among them.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage or input error,
//! 3 resource cap exceeded, 4 certification failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use trace_relations::{Error, ScalarMode};

#[derive(Parser, Debug)]
#[command(
    name = "trace-relations",
    version,
    about = "Linear relations among orthogonal trace invariants"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Seed for all random streams; a random seed is drawn and recorded when omitted.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Scalar mode for sampling.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Rational)]
    pub mode: ModeArg,

    /// Integer entries are drawn from [-B, B].
    #[arg(long, global = true, default_value_t = 10)]
    pub entry_bound: u64,

    /// Extra sample rows beyond the number of invariants.
    #[arg(long, global = true, default_value_t = 10)]
    pub oversample: usize,

    /// Fresh samples used to certify each relation.
    #[arg(long, global = true, default_value_t = 20)]
    pub verify_trials: usize,

    /// Relative singular-value cutoff in complex mode.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub float_tolerance: f64,

    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Admit long runs such as the n = 4 symmetrizer engine.
    #[arg(long, global = true)]
    pub allow_long: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the degree-d invariant basis, optionally evaluated on a matrix file.
    Enumerate {
        #[arg(long)]
        d: usize,
        /// JSON matrix file: {"n": .., "mode": "rational"|"complex", "entries": [[..]]}.
        #[arg(long)]
        evaluate: Option<PathBuf>,
    },
    /// Compute the relations of degree d on n x n matrices.
    Relations {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Montecarlo)]
        method: MethodArg,
    },
    /// Tabulate relation dimensions for 1 <= d <= max-d, 1 <= n <= max-n.
    Dims {
        #[arg(long)]
        max_d: usize,
        #[arg(long)]
        max_n: usize,
        /// Sample the stable-range cells (d <= n) instead of reporting 0 directly.
        #[arg(long)]
        compute_stable: bool,
    },
    /// Re-check every relation in a relation file on fresh samples.
    Verify { file: PathBuf },
    /// Time both engines on the same (n, d).
    Bench {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Rational,
    Complex,
}

impl From<ModeArg> for ScalarMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Rational => ScalarMode::Rational,
            ModeArg::Complex => ScalarMode::Complex,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodArg {
    Montecarlo,
    Symmetrizer,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Library(Error),
    Io(std::io::Error),
    Certification(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Library(Error::InvalidInput(_) | Error::Json(_)) => 2,
            CliError::Library(Error::ResourceCap { .. }) => 3,
            CliError::Library(Error::NonReproducibleKernel { .. }) => 4,
            CliError::Certification(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Library(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
            CliError::Certification(m) => write!(f, "certification failed: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Library(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
