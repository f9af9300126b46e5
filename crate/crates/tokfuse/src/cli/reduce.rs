use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use tokfuse_core::{reduce, ReductionConfig, Strategy};

use super::{elapsed_ms, CliError, CliResult, StrategyParams};
use crate::format::{read_scores, read_tokens, write_atomic, write_matrix};
use crate::report::ReductionReport;

#[derive(Debug, Args)]
pub struct ReduceArgs {
    /// Input token file (TOK1, or CSV by extension).
    #[arg(long)]
    pub input: PathBuf,
    /// tofu | tofu-auto | random | topk | stride | oracle
    #[arg(long)]
    pub strategy: String,
    #[command(flatten)]
    pub params: StrategyParams,
    /// Reduced tokens, written as TOK1.
    #[arg(long)]
    pub out: PathBuf,
    /// Report JSON.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

pub fn run(args: ReduceArgs) -> CliResult {
    let p = &args.params;
    let strategy = Strategy::from_parts(&args.strategy, p.tau, p.budget, p.seed)?;
    let wants_scores = matches!(strategy, Strategy::TopK { .. });
    if p.scores.is_some() != wants_scores {
        return Err(CliError::Usage(if wants_scores {
            "strategy `topk` requires `--scores`".into()
        } else {
            format!("strategy `{}` does not take `--scores`", strategy.name())
        }));
    }

    let seq = read_tokens(&args.input)?;
    let scores = p.scores.as_ref().map(read_scores).transpose()?;
    let start = Instant::now();
    let run = reduce(&seq, &ReductionConfig::from(strategy), scores.as_ref())?;
    let wall = elapsed_ms(start);

    let reduced = &run.reduced;
    write_matrix(&args.out, reduced.tokens(), reduced.len(), reduced.dims())?;
    if let Some(path) = &args.report {
        let report = ReductionReport::new(&seq, &strategy, &run, p.text_tokens, wall)?;
        write_atomic(path, report.to_json()?.as_bytes())?;
    }
    Ok(())
}
