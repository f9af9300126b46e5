//! JSON report describing one reduction run.

use serde::{Deserialize, Serialize};
use tokfuse_core::{attention_savings, reconstruction_error, Reduction, Strategy, TokenSequence};

use crate::error::Result;

/// Label written to every report: reconstruction error is a stand-in for
/// downstream quality, not a measure of it.
pub const QUALITY_PROXY: &str = "cosine_reconstruction_error";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub input_tokens: usize,
    pub output_tokens: usize,
    pub retention_ratio: f64,
    pub strategy: String,
    pub tau: Option<f64>,
    pub budget: Option<usize>,
    pub seed: Option<u64>,
    pub text_tokens: usize,
    pub recon_error_mean: f64,
    pub recon_error_max: f64,
    pub quality_proxy: String,
    pub attention_savings: f64,
    pub pair_eval_count: u64,
    pub wall_time_ms: f64,
    pub weights: Vec<usize>,
    pub assignment: Vec<Option<usize>>,
}

impl ReductionReport {
    pub fn new(
        seq: &TokenSequence,
        strategy: &Strategy,
        run: &Reduction,
        text_tokens: usize,
        wall_time_ms: f64,
    ) -> Result<Self> {
        let input = seq.rows();
        let output = run.reduced.len();
        let recon = reconstruction_error(seq, &run.reduced)?;
        let savings = if input + text_tokens == 0 {
            0.0
        } else {
            attention_savings(input, output, text_tokens)?
        };
        Ok(Self {
            input_tokens: input,
            output_tokens: output,
            retention_ratio: if input == 0 {
                1.0
            } else {
                output as f64 / input as f64
            },
            strategy: strategy.name().to_string(),
            tau: run.tau,
            budget: strategy.budget(),
            seed: strategy.seed(),
            text_tokens,
            recon_error_mean: recon.mean,
            recon_error_max: recon.max,
            quality_proxy: QUALITY_PROXY.to_string(),
            attention_savings: savings,
            pair_eval_count: run.pair_evals,
            wall_time_ms,
            weights: run.reduced.weights().to_vec(),
            assignment: run.reduced.assignment().to_vec(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}
