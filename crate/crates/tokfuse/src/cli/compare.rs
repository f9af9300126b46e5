use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use rayon::prelude::*;
use tokfuse_core::{reduce, ReductionConfig, Strategy};

use super::{elapsed_ms, CliError, CliResult, StrategyParams};
use crate::format::{read_scores, read_tokens, write_atomic};
use crate::numfmt::sig6;
use crate::report::ReductionReport;

pub const HEADER: &str = "strategy,K,retention,recon_error_mean,attention_savings,pair_eval_count";

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Comma-separated strategy names, run in this order.
    #[arg(long, value_delimiter = ',', required = true)]
    pub strategies: Vec<String>,
    #[command(flatten)]
    pub params: StrategyParams,
    /// Directory receiving `<strategy>.json` reports and `compare.csv`.
    #[arg(long)]
    pub out_dir: PathBuf,
}

/// Picks from the shared flags exactly what `name` needs.
fn strategy_for(name: &str, p: &StrategyParams) -> CliResult<Strategy> {
    let canonical = Strategy::canonical_name(name)?;
    let strategy = match canonical {
        "tofu" | "oracle" => Strategy::from_parts(canonical, p.tau, None, None),
        "tofu-auto" => Strategy::from_parts(canonical, None, None, None),
        "random" => Strategy::from_parts(canonical, None, p.budget, p.seed),
        _ => Strategy::from_parts(canonical, None, p.budget, None),
    }?;
    if matches!(strategy, Strategy::TopK { .. }) && p.scores.is_none() {
        return Err(CliError::Usage(
            "strategy `topk` requires `--scores`".into(),
        ));
    }
    Ok(strategy)
}

pub fn run(args: CompareArgs) -> CliResult {
    let p = &args.params;
    let strategies = args
        .strategies
        .iter()
        .map(|name| strategy_for(name, p))
        .collect::<CliResult<Vec<_>>>()?;
    for (i, s) in strategies.iter().enumerate() {
        if strategies[..i].iter().any(|t| t.name() == s.name()) {
            return Err(CliError::Usage(format!(
                "strategy `{}` listed twice",
                s.name()
            )));
        }
    }

    let seq = read_tokens(&args.input)?;
    let scores = p.scores.as_ref().map(read_scores).transpose()?;
    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.out_dir.display())))?;

    // Runs may finish in any order; collect() keeps list order.
    let reports = strategies
        .par_iter()
        .map(|strategy| {
            let start = Instant::now();
            let run = reduce(&seq, &ReductionConfig::from(*strategy), scores.as_ref())?;
            let wall = elapsed_ms(start);
            let report = ReductionReport::new(&seq, strategy, &run, p.text_tokens, wall)?;
            let path = args.out_dir.join(format!("{}.json", strategy.name()));
            write_atomic(path, report.to_json()?.as_bytes())?;
            Ok(report)
        })
        .collect::<CliResult<Vec<_>>>()?;

    let mut csv = String::new();
    csv.push_str(HEADER);
    csv.push('\n');
    for r in &reports {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            r.strategy,
            r.output_tokens,
            sig6(r.retention_ratio),
            sig6(r.recon_error_mean),
            sig6(r.attention_savings),
            r.pair_eval_count
        );
    }
    write_atomic(args.out_dir.join("compare.csv"), csv.as_bytes())?;
    Ok(())
}
