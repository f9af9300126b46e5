use std::path::PathBuf;

use clap::Args;
use tokfuse_core::{generate_clusters, ClusterSpec};

use super::CliResult;
use crate::format::{write_labels, write_tokens};

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub clusters: usize,
    #[arg(long)]
    pub per_cluster: usize,
    #[arg(long)]
    pub dims: usize,
    /// Expected noise norm before renormalization.
    #[arg(long, default_value_t = 0.05)]
    pub spread: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Draw centroids independently instead of orthonormalizing them.
    #[arg(long)]
    pub free_centroids: bool,
    /// Output TOK1 file.
    #[arg(long)]
    pub out: PathBuf,
    /// Labels CSV; defaults to `<out stem>.labels.csv` beside `--out`.
    #[arg(long)]
    pub labels: Option<PathBuf>,
}

pub fn run(args: GenArgs) -> CliResult {
    let spec = ClusterSpec {
        orthogonal: !args.free_centroids,
        ..ClusterSpec::new(
            args.clusters,
            args.per_cluster,
            args.dims,
            args.spread,
            args.seed,
        )
    };
    let (seq, labels) = generate_clusters(&spec)?;
    let labels_path = args.labels.clone().unwrap_or_else(|| {
        let stem = args
            .out
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "tokens".into());
        args.out.with_file_name(format!("{stem}.labels.csv"))
    });
    write_tokens(&args.out, &seq)?;
    write_labels(labels_path, &labels)?;
    Ok(())
}
