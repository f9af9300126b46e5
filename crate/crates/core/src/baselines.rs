//! Budgeted comparison strategies: random sampling, top-k pruning by
//! externally supplied importance scores, and uniform stride sampling.
//!
//! All three keep a subsequence of the input: retained rows are copied
//! bit-for-bit, stay in source order, and get weight 1. Dropped inputs are
//! left unassigned.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::SeededRng;
use crate::sequence::TokenSequence;
use crate::tofu::ReducedSequence;

/// Per-token relevance scores, one per input token.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceScores(Vec<f32>);

impl ImportanceScores {
    pub fn new(scores: Vec<f32>) -> Result<Self> {
        if let Some(index) = scores.iter().position(|s| !s.is_finite()) {
            return Err(Error::NonFiniteScore { index });
        }
        Ok(Self(scores))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f32] {
        &self.0
    }
}

fn check_budget(budget: usize, len: usize) -> Result<()> {
    if budget > len {
        return Err(Error::Budget { budget, len });
    }
    Ok(())
}

/// Keeps `budget` distinct tokens chosen uniformly at random.
///
/// Selection is a partial Fisher-Yates shuffle of `0..M` driven by
/// [`SeededRng::below`]; the chosen indices are then sorted.
pub fn random_sample(seq: &TokenSequence, budget: usize, seed: u64) -> Result<ReducedSequence> {
    let len = seq.rows();
    check_budget(budget, len)?;
    let mut rng = SeededRng::new(seed);
    let mut pool: Vec<usize> = (0..len).collect();
    for i in 0..budget {
        let j = i + rng.below((len - i) as u64) as usize;
        pool.swap(i, j);
    }
    let mut kept = pool[..budget].to_vec();
    kept.sort_unstable();
    Ok(ReducedSequence::from_kept(seq, &kept))
}

/// Keeps the `budget` highest-scoring tokens; equal scores favour the lower index.
pub fn topk_prune(
    seq: &TokenSequence,
    scores: &ImportanceScores,
    budget: usize,
) -> Result<ReducedSequence> {
    let len = seq.rows();
    if scores.len() != len {
        return Err(Error::Shape {
            expected: len,
            actual: scores.len(),
        });
    }
    check_budget(budget, len)?;
    let s = scores.as_slice();
    let mut order: Vec<usize> = (0..len).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]).then(a.cmp(&b)));
    let mut kept = order[..budget].to_vec();
    kept.sort_unstable();
    Ok(ReducedSequence::from_kept(seq, &kept))
}

/// Keeps indices `floor(i * M / budget)` for `i` in `0..budget`.
pub fn uniform_stride(seq: &TokenSequence, budget: usize) -> Result<ReducedSequence> {
    let len = seq.rows();
    if budget == 0 {
        return Err(Error::Budget { budget, len });
    }
    check_budget(budget, len)?;
    let kept: Vec<usize> = (0..budget)
        .map(|i| (i as u128 * len as u128 / budget as u128) as usize)
        .collect();
    Ok(ReducedSequence::from_kept(seq, &kept))
}

/// Source indices retained by a pruning reduction, in order.
pub fn kept_indices(reduced: &ReducedSequence) -> Vec<usize> {
    reduced
        .assignment()
        .iter()
        .enumerate()
        .filter_map(|(m, a)| a.map(|_| m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn seq(rows: usize) -> TokenSequence {
        let data = (0..rows * 2).map(|i| 1.0 + i as f32).collect();
        TokenSequence::new(data, rows, 2).unwrap()
    }

    #[test]
    fn random_full_and_empty_budget() {
        let s = seq(5);
        let full = random_sample(&s, 5, 11).unwrap();
        assert_eq!(full.tokens(), s.as_slice());
        assert_eq!(full.weights(), &[1; 5]);
        let none = random_sample(&s, 0, 11).unwrap();
        assert!(none.is_empty());
        assert_eq!(none.assignment(), &[None; 5]);
    }

    #[test]
    fn random_is_deterministic() {
        let s = seq(30);
        let a = kept_indices(&random_sample(&s, 7, 123).unwrap());
        let b = kept_indices(&random_sample(&s, 7, 123).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.len(), 7);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn random_rejects_large_budget() {
        assert_eq!(
            random_sample(&seq(3), 4, 0),
            Err(Error::Budget { budget: 4, len: 3 })
        );
    }

    #[test]
    fn topk_fixtures() {
        let s = seq(3);
        let scores = ImportanceScores::new(vec![0.1, 0.9, 0.5]).unwrap();
        let r = topk_prune(&s, &scores, 2).unwrap();
        assert_eq!(kept_indices(&r), vec![1, 2]);
        assert_eq!(r.token(0), s.row(1));
        assert_eq!(r.token(1), s.row(2));

        let flat = ImportanceScores::new(vec![0.3; 3]).unwrap();
        assert_eq!(kept_indices(&topk_prune(&s, &flat, 2).unwrap()), vec![0, 1]);
        assert_eq!(
            kept_indices(&topk_prune(&s, &scores, 3).unwrap()),
            vec![0, 1, 2]
        );
    }

    #[test]
    fn topk_errors() {
        let s = seq(3);
        let short = ImportanceScores::new(vec![0.1, 0.2]).unwrap();
        assert_eq!(
            topk_prune(&s, &short, 1),
            Err(Error::Shape {
                expected: 3,
                actual: 2
            })
        );
        let scores = ImportanceScores::new(vec![0.1, 0.2, 0.3]).unwrap();
        assert!(matches!(
            topk_prune(&s, &scores, 4),
            Err(Error::Budget { .. })
        ));
        assert_eq!(
            ImportanceScores::new(vec![0.0, f32::NAN]),
            Err(Error::NonFiniteScore { index: 1 })
        );
    }

    #[test]
    fn stride_fixtures() {
        assert_eq!(
            kept_indices(&uniform_stride(&seq(6), 3).unwrap()),
            vec![0, 2, 4]
        );
        assert_eq!(
            kept_indices(&uniform_stride(&seq(5), 2).unwrap()),
            vec![0, 2]
        );
        assert_eq!(
            kept_indices(&uniform_stride(&seq(4), 4).unwrap()),
            vec![0, 1, 2, 3]
        );
        assert!(matches!(
            uniform_stride(&seq(4), 0),
            Err(Error::Budget { .. })
        ));
        assert!(matches!(
            uniform_stride(&seq(4), 5),
            Err(Error::Budget { .. })
        ));
    }
}
