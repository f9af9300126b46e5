//! Quality and cost accounting shared by every strategy.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::sequence::{dot, norm, similarity_from_parts, TokenSequence};
use crate::tofu::ReducedSequence;

/// Cosine-distance reconstruction error of a reduction.
///
/// This is a proxy for information loss: the reduced sequence itself has no
/// ground-truth quality measure.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionError {
    pub mean: f64,
    pub max: f64,
    /// `1 - cos(v_m, output token representing v_m)` for every input `m`.
    pub per_token: Vec<f64>,
}

/// Scores how well `reduced` represents `seq`.
///
/// Inputs dropped by a pruning strategy are charged against their nearest
/// retained token (ties: lowest output index). When nothing was retained an
/// input is compared against nothing, which counts as similarity 0.
pub fn reconstruction_error(
    seq: &TokenSequence,
    reduced: &ReducedSequence,
) -> Result<ReconstructionError> {
    if reduced.input_len() != seq.rows() {
        return Err(Error::Shape {
            expected: seq.rows(),
            actual: reduced.input_len(),
        });
    }
    if reduced.dims() != seq.dims() {
        return Err(Error::Shape {
            expected: seq.dims(),
            actual: reduced.dims(),
        });
    }
    let out_norms: Vec<f64> = reduced.iter_tokens().map(norm).collect();
    let per_token: Vec<f64> = seq
        .iter_rows()
        .zip(reduced.assignment())
        .map(|(row, slot)| {
            let row_norm = norm(row);
            let sim = |j: usize| token_similarity(row, row_norm, reduced.token(j), out_norms[j]);
            let s = match slot {
                Some(j) => sim(*j),
                None => nearest(reduced.len(), sim).map_or(0.0, |(_, s)| s),
            };
            1.0 - s
        })
        .collect();
    let max = per_token.iter().copied().fold(0.0, f64::max);
    let mean = if per_token.is_empty() {
        0.0
    } else {
        per_token.iter().sum::<f64>() / per_token.len() as f64
    };
    Ok(ReconstructionError {
        mean: mean.min(max),
        max,
        per_token,
    })
}

// A token retained verbatim reconstructs itself exactly.
fn token_similarity(row: &[f32], row_norm: f64, token: &[f32], token_norm: f64) -> f64 {
    if row == token {
        1.0
    } else {
        similarity_from_parts(dot(row, token), row_norm, token_norm)
    }
}

fn nearest(len: usize, sim: impl Fn(usize) -> f64) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for j in 0..len {
        let s = sim(j);
        if best.map_or(true, |(_, b)| s > b) {
            best = Some((j, s));
        }
    }
    best
}

/// Assigns every input to an output token: its own slot when it has one,
/// otherwise the most similar output token (ties: lowest index).
///
/// Inputs stay `None` only when the reduction is empty.
pub fn nearest_assignment(seq: &TokenSequence, reduced: &ReducedSequence) -> Vec<Option<usize>> {
    let out_norms: Vec<f64> = reduced.iter_tokens().map(norm).collect();
    seq.iter_rows()
        .zip(reduced.assignment())
        .map(|(row, slot)| {
            slot.or_else(|| {
                let row_norm = norm(row);
                nearest(reduced.len(), |j| {
                    token_similarity(row, row_norm, reduced.token(j), out_norms[j])
                })
                .map(|(j, _)| j)
            })
        })
        .collect()
}

/// Modeled fraction of quadratic attention cost removed by shrinking
/// `input` visual tokens to `output`, next to `text` non-visual tokens:
/// `1 - ((output + text) / (input + text))^2`.
pub fn attention_savings(input: usize, output: usize, text: usize) -> Result<f64> {
    if output > input {
        return Err(Error::OutputExceedsInput { output, input });
    }
    let total = input as u128 + text as u128;
    if total == 0 {
        return Err(Error::EmptyInput);
    }
    let kept = output as u128 + text as u128;
    // One rounding step: (total^2 - kept^2) / total^2.
    Ok((total * total - kept * kept) as f64 / (total * total) as f64)
}
