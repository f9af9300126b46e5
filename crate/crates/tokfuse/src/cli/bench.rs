use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use tokfuse_core::{generate_clusters, reduce, ClusterSpec, ReductionConfig, Strategy};

use super::{elapsed_ms, CliError, CliResult};
use crate::format::write_atomic;
use crate::numfmt::sig6;

pub const HEADER: &str = "M,N,strategy,K,pair_eval_count,wall_time_ms";

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Token counts M (comma-separated); each must be a multiple of --clusters.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    /// Embedding dimensionalities N (comma-separated).
    #[arg(long, value_delimiter = ',', default_value = "32")]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 16)]
    pub clusters: usize,
    #[arg(long, default_value_t = 0.05)]
    pub spread: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.7, allow_hyphen_values = true)]
    pub tau: f64,
    /// Fusion strategies to time: tofu, tofu-auto, oracle.
    #[arg(long, value_delimiter = ',', default_value = "tofu,oracle")]
    pub strategies: Vec<String>,
    /// Timing CSV.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: BenchArgs) -> CliResult {
    let strategies = args
        .strategies
        .iter()
        .map(|name| match Strategy::canonical_name(name)? {
            "tofu-auto" => Ok(Strategy::TofuAuto),
            n @ ("tofu" | "oracle") => Ok(Strategy::from_parts(n, Some(args.tau), None, None)?),
            n => Err(CliError::Usage(format!(
                "bench times fusion strategies only, got `{n}`"
            ))),
        })
        .collect::<CliResult<Vec<_>>>()?;
    if args.clusters == 0 {
        return Err(CliError::Usage("--clusters must be at least 1".into()));
    }
    for &m in &args.sizes {
        if m == 0 || m % args.clusters != 0 {
            return Err(CliError::Usage(format!(
                "size {m} is not a positive multiple of --clusters {}",
                args.clusters
            )));
        }
    }

    let mut csv = String::new();
    csv.push_str(HEADER);
    csv.push('\n');
    // Grid points run one at a time so timings do not contend.
    for &m in &args.sizes {
        for &n in &args.dims {
            let spec =
                ClusterSpec::new(args.clusters, m / args.clusters, n, args.spread, args.seed);
            let (seq, _) = generate_clusters(&spec)?;
            for strategy in &strategies {
                let start = Instant::now();
                let run = reduce(&seq, &ReductionConfig::from(*strategy), None)?;
                let wall = elapsed_ms(start);
                let _ = writeln!(
                    csv,
                    "{m},{n},{},{},{},{}",
                    strategy.name(),
                    run.reduced.len(),
                    run.pair_evals,
                    sig6(wall)
                );
            }
        }
    }
    write_atomic(&args.out, csv.as_bytes())?;
    Ok(())
}
