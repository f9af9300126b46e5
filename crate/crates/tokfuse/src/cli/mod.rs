//! The `tokfuse` command line.
//!
//! Exit codes: 0 success, 1 I/O or file-format failure, 2 usage or
//! validation failure. Failures print one line to stderr.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::FormatError;

mod bench;
mod compare;
mod gen;
mod reduce;
mod sweep;

/// Environment variable capping the worker threads used by `compare` and `bench`.
pub const THREADS_ENV: &str = "TOKFUSE_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "tokfuse",
    version,
    about = "Visual-token fusion and reduction baselines"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduce one token file with one strategy.
    Reduce(reduce::ReduceArgs),
    /// Sweep the fusion threshold and print one CSV row per value.
    Sweep(sweep::SweepArgs),
    /// Generate a clustered synthetic token file and its labels.
    Gen(gen::GenArgs),
    /// Run several strategies on one input and tabulate them.
    Compare(compare::CompareArgs),
    /// Time strategies over a grid of synthetic input sizes.
    Bench(bench::BenchArgs),
}

/// Parameters shared by `reduce` and `compare`.
#[derive(Debug, Args)]
pub struct StrategyParams {
    /// Similarity threshold for tofu/oracle.
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<f64>,
    /// Retained-token budget for random/topk/stride.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Importance scores for topk (TOK1 1xM or one-column CSV).
    #[arg(long)]
    pub scores: Option<PathBuf>,
    /// Seed for random sampling.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Text-token count used by the attention cost model.
    #[arg(long, default_value_t = 0)]
    pub text_tokens: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Core(#[from] tokfuse_core::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) | Self::Core(_) | Self::Format(FormatError::Invalid(_)) => 2,
            Self::Format(_) | Self::Io(_) => 1,
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

fn configure_threads() -> CliResult {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| {
            CliError::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got {value:?}"
            ))
        })?;
    // Fails only if a pool was already installed in this process.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

pub fn run(cli: Cli) -> CliResult {
    configure_threads()?;
    match cli.command {
        Command::Reduce(args) => reduce::run(args),
        Command::Sweep(args) => sweep::run(args),
        Command::Gen(args) => gen::run(args),
        Command::Compare(args) => compare::run(args),
        Command::Bench(args) => bench::run(args),
    }
}

/// Parses `std::env::args`, runs the command and maps failures to exit codes.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.kind().to_string();
            let detail = e.to_string();
            let line = detail
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or(&rendered)
                .trim_start_matches("error: ");
            eprintln!("tokfuse: {line}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tokfuse: {}", single_line(&e.to_string()));
            ExitCode::from(e.exit_code())
        }
    }
}

fn single_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn elapsed_ms(start: std::time::Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}
