//! Sequential token fusion with a similarity threshold.
//!
//! Tokens are visited once, in input order. Each one is compared against
//! every output token built so far; if the best cosine similarity is
//! strictly above the threshold the token is folded into that output token
//! as a weighted running mean, otherwise it is appended as a new output
//! token of weight 1. Cost is `O(M * K)` similarity evaluations.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::sequence::{dot_mixed, norm, norm64, similarity_from_parts, TokenSequence};

/// Output of any reduction strategy.
///
/// `assignment[m]` is the output token that input `m` was fused into or
/// retained as; pruning strategies leave dropped inputs as `None`. Output
/// tokens are ordered by the smallest input index assigned to them.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedSequence {
    tokens: Vec<f32>,
    dims: usize,
    weights: Vec<usize>,
    assignment: Vec<Option<usize>>,
}

impl ReducedSequence {
    /// Assembles a reduction, checking that the parts agree with each other.
    ///
    /// Weights must equal the number of inputs assigned to each output token
    /// and output tokens must first appear in assignment order. Unassigned
    /// outputs (pruning) must carry weight 1.
    pub fn new(
        tokens: Vec<f32>,
        dims: usize,
        weights: Vec<usize>,
        assignment: Vec<Option<usize>>,
    ) -> Result<Self> {
        if dims == 0 {
            return Err(Error::ZeroDims);
        }
        let k = weights.len();
        if tokens.len() != k * dims {
            return Err(Error::Shape {
                expected: k * dims,
                actual: tokens.len(),
            });
        }
        let mut counts = vec![0usize; k];
        let mut next_new = 0usize;
        for &slot in assignment.iter().flatten() {
            if slot >= k {
                return Err(Error::Reduction(
                    "assignment refers to a missing output token",
                ));
            }
            if counts[slot] == 0 {
                if slot != next_new {
                    return Err(Error::Reduction(
                        "output tokens are not in first-occurrence order",
                    ));
                }
                next_new += 1;
            }
            counts[slot] += 1;
        }
        let pruned = assignment.iter().any(Option::is_none);
        for (&w, &c) in weights.iter().zip(&counts) {
            let expected = if pruned && c == 0 { 1 } else { c };
            if w != expected || w == 0 {
                return Err(Error::Reduction("weights disagree with assignment"));
            }
        }
        if !pruned && next_new != k {
            return Err(Error::Reduction("output token without assigned inputs"));
        }
        Ok(Self {
            tokens,
            dims,
            weights,
            assignment,
        })
    }

    /// Keeps the given source rows (strictly increasing indices) as-is.
    pub(crate) fn from_kept(seq: &TokenSequence, kept: &[usize]) -> Self {
        let mut tokens = Vec::with_capacity(kept.len() * seq.dims());
        let mut assignment = vec![None; seq.rows()];
        for (slot, &index) in kept.iter().enumerate() {
            tokens.extend_from_slice(seq.row(index));
            assignment[index] = Some(slot);
        }
        Self {
            tokens,
            dims: seq.dims(),
            weights: vec![1; kept.len()],
            assignment,
        }
    }

    pub(crate) fn from_parts_unchecked(
        tokens: Vec<f32>,
        dims: usize,
        weights: Vec<usize>,
        assignment: Vec<Option<usize>>,
    ) -> Self {
        debug_assert_eq!(tokens.len(), weights.len() * dims);
        Self {
            tokens,
            dims,
            weights,
            assignment,
        }
    }

    /// Number of output tokens `K`.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    /// Number of input tokens `M` this reduction was built from.
    pub fn input_len(&self) -> usize {
        self.assignment.len()
    }

    pub fn token(&self, index: usize) -> &[f32] {
        &self.tokens[index * self.dims..(index + 1) * self.dims]
    }

    pub fn iter_tokens(&self) -> impl ExactSizeIterator<Item = &[f32]> + '_ {
        self.tokens.chunks_exact(self.dims)
    }

    /// Output tokens, row-major.
    pub fn tokens(&self) -> &[f32] {
        &self.tokens
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn assignment(&self) -> &[Option<usize>] {
        &self.assignment
    }

    /// True when every input token maps to an output token.
    pub fn is_fully_assigned(&self) -> bool {
        self.assignment.iter().all(Option::is_some)
    }

    /// Output tokens as a validated sequence.
    ///
    /// Fails only when a fused centroid collapsed to (near) zero norm.
    pub fn to_sequence(&self) -> Result<TokenSequence> {
        TokenSequence::new(self.tokens.clone(), self.len(), self.dims)
    }
}

/// Linear threshold schedule over the input length.
///
/// The threshold moves linearly from `tau_at_short` at `short_len` tokens
/// to `tau_at_long` at `long_len` tokens and is clamped outside that range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSchedule {
    pub short_len: usize,
    pub tau_at_short: f64,
    pub long_len: usize,
    pub tau_at_long: f64,
}

impl ThresholdSchedule {
    /// Anchors: 0.9 at 256 tokens, 0.7 at 3328 tokens.
    pub const DEFAULT: Self = Self {
        short_len: 256,
        tau_at_short: 0.9,
        long_len: 3328,
        tau_at_long: 0.7,
    };

    pub fn threshold(&self, tokens: usize) -> Result<f64> {
        if tokens == 0 {
            return Err(Error::EmptyInput);
        }
        if tokens <= self.short_len {
            return Ok(self.tau_at_short);
        }
        if tokens >= self.long_len {
            return Ok(self.tau_at_long);
        }
        let frac = (tokens - self.short_len) as f64 / (self.long_len - self.short_len) as f64;
        Ok(self.tau_at_short - (self.tau_at_short - self.tau_at_long) * frac)
    }
}

impl Default for ThresholdSchedule {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Threshold for an input of `tokens` tokens under [`ThresholdSchedule::DEFAULT`].
pub fn dynamic_threshold(tokens: usize) -> Result<f64> {
    ThresholdSchedule::DEFAULT.threshold(tokens)
}

pub(crate) fn check_tau(tau: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&tau) {
        Ok(())
    } else {
        Err(Error::Threshold(tau))
    }
}

/// Fuses `seq` with threshold `tau`.
pub fn fuse(seq: &TokenSequence, tau: f64) -> Result<ReducedSequence> {
    fuse_counted(seq, tau).map(|(reduced, _)| reduced)
}

/// [`fuse`] with the threshold picked by [`dynamic_threshold`].
///
/// Returns the reduction and the threshold that was used.
pub fn fuse_auto(seq: &TokenSequence) -> Result<(ReducedSequence, f64)> {
    let tau = dynamic_threshold(seq.rows())?;
    Ok((fuse(seq, tau)?, tau))
}

/// [`fuse`], also returning the number of similarity evaluations performed.
///
/// The count is exactly the sum over inputs of the output length at the
/// moment that input was examined.
pub fn fuse_counted(seq: &TokenSequence, tau: f64) -> Result<(ReducedSequence, u64)> {
    check_tau(tau)?;
    let dims = seq.dims();
    let mut centroids: Vec<f64> = Vec::new();
    let mut norms: Vec<f64> = Vec::new();
    let mut weights: Vec<usize> = Vec::new();
    let mut assignment = Vec::with_capacity(seq.rows());
    let mut evals = 0u64;

    for row in seq.iter_rows() {
        let row_norm = norm(row);
        // Strict `>` keeps the lowest index on ties.
        let mut best: Option<(usize, f64)> = None;
        for (j, centroid) in centroids.chunks_exact(dims).enumerate() {
            let s = similarity_from_parts(dot_mixed(row, centroid), row_norm, norms[j]);
            if best.map_or(true, |(_, b)| s > b) {
                best = Some((j, s));
            }
        }
        evals += weights.len() as u64;

        match best {
            Some((j, s)) if s > tau => {
                let w = weights[j] as f64;
                let centroid = &mut centroids[j * dims..(j + 1) * dims];
                for (c, &v) in centroid.iter_mut().zip(row) {
                    *c = (*c * w + f64::from(v)) / (w + 1.0);
                }
                norms[j] = norm64(centroid);
                weights[j] += 1;
                assignment.push(Some(j));
            }
            _ => {
                assignment.push(Some(weights.len()));
                centroids.extend(row.iter().map(|&v| f64::from(v)));
                norms.push(row_norm);
                weights.push(1);
            }
        }
    }

    let tokens = centroids.iter().map(|&c| c as f32).collect();
    Ok((
        ReducedSequence::from_parts_unchecked(tokens, dims, weights, assignment),
        evals,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace_input() -> TokenSequence {
        TokenSequence::from_rows(&[[1.0f32, 0.0], [0.8, 0.6], [0.0, 1.0]]).unwrap()
    }

    #[test]
    fn hand_trace() {
        let (r, evals) = fuse_counted(&trace_input(), 0.75).unwrap();
        assert_eq!(r.weights(), &[2, 1]);
        assert_eq!(r.assignment(), &[Some(0), Some(0), Some(1)]);
        let expected = [0.9f32, 0.3, 0.0, 1.0];
        for (a, b) in r.tokens().iter().zip(expected) {
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
        // step 1: |T| = 0, step 2: 1, step 3: 1
        assert_eq!(evals, 2);
    }

    #[test]
    fn tau_one_is_identity_even_for_duplicates() {
        let seq = TokenSequence::from_rows(&[[1.0f32, 2.0], [1.0, 2.0], [3.0, -1.0]]).unwrap();
        let r = fuse(&seq, 1.0).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r.weights(), &[1, 1, 1]);
        assert_eq!(r.tokens(), seq.as_slice());
        assert_eq!(r.assignment(), &[Some(0), Some(1), Some(2)]);
    }

    #[test]
    fn tau_minus_one_collapses_orthogonal_pair() {
        let seq = TokenSequence::from_rows(&[[1.0f32, 0.0], [0.0, 1.0]]).unwrap();
        let r = fuse(&seq, -1.0).unwrap();
        assert_eq!(r.tokens(), &[0.5, 0.5]);
        assert_eq!(r.weights(), &[2]);
        assert_eq!(r.assignment(), &[Some(0), Some(0)]);
    }

    #[test]
    fn antiparallel_is_appended_at_minus_one() {
        let seq = TokenSequence::from_rows(&[[1.0f32, 0.0], [-1.0, 0.0]]).unwrap();
        assert_eq!(fuse(&seq, -1.0).unwrap().len(), 2);
    }

    #[test]
    fn ties_go_to_lowest_index() {
        // Both existing tokens are at 45 degrees from the third.
        let seq = TokenSequence::from_rows(&[[1.0f32, 0.0], [0.0, 1.0], [1.0, 1.0]]).unwrap();
        let r = fuse(&seq, 0.5).unwrap();
        assert_eq!(r.assignment(), &[Some(0), Some(1), Some(0)]);
    }

    #[test]
    fn empty_input() {
        let r = fuse(&TokenSequence::empty(3).unwrap(), 0.5).unwrap();
        assert!(r.is_empty());
        assert_eq!(r.dims(), 3);
        assert_eq!(r.input_len(), 0);
    }

    #[test]
    fn rejects_bad_tau() {
        assert_eq!(fuse(&trace_input(), 1.5), Err(Error::Threshold(1.5)));
        assert!(fuse(&trace_input(), f64::NAN).is_err());
    }

    #[test]
    fn schedule_anchors() {
        assert_eq!(dynamic_threshold(256).unwrap(), 0.9);
        assert_eq!(dynamic_threshold(3328).unwrap(), 0.7);
        assert!((dynamic_threshold(1792).unwrap() - 0.8).abs() < 1e-9);
        assert_eq!(dynamic_threshold(100).unwrap(), 0.9);
        assert_eq!(dynamic_threshold(1).unwrap(), 0.9);
        assert_eq!(dynamic_threshold(10_000).unwrap(), 0.7);
        assert_eq!(dynamic_threshold(0), Err(Error::EmptyInput));
    }

    #[test]
    fn schedule_is_monotone() {
        let mut prev = f64::INFINITY;
        for m in (1..5000).step_by(7) {
            let t = dynamic_threshold(m).unwrap();
            assert!(t <= prev && (0.7..=0.9).contains(&t));
            prev = t;
        }
    }

    #[test]
    fn auto_matches_fixed() {
        let seq = trace_input();
        let (auto, tau) = fuse_auto(&seq).unwrap();
        assert_eq!(tau, 0.9);
        assert_eq!(auto, fuse(&seq, 0.9).unwrap());
        assert_eq!(
            fuse_auto(&TokenSequence::empty(2).unwrap()),
            Err(Error::EmptyInput)
        );
    }

    #[test]
    fn reduced_new_checks_consistency() {
        let ok = ReducedSequence::new(vec![0.5, 0.5], 2, vec![2], vec![Some(0), Some(0)]);
        assert!(ok.is_ok());
        let bad = ReducedSequence::new(vec![0.5, 0.5], 2, vec![1], vec![Some(0), Some(0)]);
        assert!(bad.is_err());
        let order = ReducedSequence::new(
            vec![1.0, 0.0, 0.0, 1.0],
            2,
            vec![1, 1],
            vec![Some(1), Some(0)],
        );
        assert!(order.is_err());
    }
}
