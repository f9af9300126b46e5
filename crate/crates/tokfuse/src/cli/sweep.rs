use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use tokfuse_core::{fuse, reconstruction_error};

use super::{elapsed_ms, CliError, CliResult};
use crate::format::read_tokens;
use crate::numfmt::sig6;

pub const HEADER: &str = "tau,K,retention_ratio,recon_error_mean,wall_time_ms";

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub tau_min: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub tau_max: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub tau_step: f64,
}

/// Grid `min + i * step` up to `max`, tolerating accumulated rounding at the end.
pub fn tau_grid(min: f64, max: f64, step: f64) -> CliResult<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || step.is_infinite() {
        return Err(CliError::Usage(format!(
            "--tau-step must be positive, got {step}"
        )));
    }
    if min.is_nan() || max.is_nan() || min > max {
        return Err(CliError::Usage(format!(
            "--tau-min {min} exceeds --tau-max {max}"
        )));
    }
    if min < -1.0 || max > 1.0 {
        return Err(CliError::Usage("thresholds must lie in [-1, 1]".into()));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| (min + i as f64 * step).min(max))
        .collect())
}

pub fn run(args: SweepArgs) -> CliResult {
    let grid = tau_grid(args.tau_min, args.tau_max, args.tau_step)?;
    let seq = read_tokens(&args.input)?;
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for tau in grid {
        let start = Instant::now();
        let reduced = fuse(&seq, tau)?;
        let wall = elapsed_ms(start);
        let recon = reconstruction_error(&seq, &reduced)?;
        let m = seq.rows();
        let ratio = if m == 0 {
            1.0
        } else {
            reduced.len() as f64 / m as f64
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            sig6(tau),
            reduced.len(),
            sig6(ratio),
            sig6(recon.mean),
            sig6(wall)
        );
    }
    std::io::stdout()
        .lock()
        .write_all(out.as_bytes())
        .map_err(|e| CliError::Io(format!("stdout: {e}")))
}
