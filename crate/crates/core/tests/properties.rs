//! Property tests for the reduction strategies, checked against
//! independent test-only reimplementations.

use proptest::prelude::*;
use tokfuse_core::baselines::kept_indices;
use tokfuse_core::{
    attention_savings, fuse, fuse_counted, oracle_fuse, random_sample, reconstruction_error,
    topk_prune, uniform_stride, ImportanceScores, ReducedSequence, TokenSequence,
};

fn cos(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    (dot / (na * nb)).clamp(-1.0, 1.0)
}

fn widen(row: &[f32]) -> Vec<f64> {
    row.iter().map(|&x| f64::from(x)).collect()
}

/// Straightforward sequential fusion: returns the assignment only.
fn reference_sequential(seq: &TokenSequence, tau: f64) -> Vec<usize> {
    let mut centroids: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut out = Vec::new();
    for row in seq.iter_rows() {
        let v = widen(row);
        let mut best: Option<(usize, f64)> = None;
        for (j, (c, _)) in centroids.iter().enumerate() {
            let s = cos(&v, c);
            if best.is_none() || s > best.unwrap().1 {
                best = Some((j, s));
            }
        }
        match best {
            Some((j, s)) if s > tau => {
                let (c, w) = &mut centroids[j];
                for (ci, vi) in c.iter_mut().zip(&v) {
                    *ci = (*ci * *w + vi) / (*w + 1.0);
                }
                *w += 1.0;
                out.push(j);
            }
            _ => {
                out.push(centroids.len());
                centroids.push((v, 1.0));
            }
        }
    }
    out
}

fn check_reduction_invariants(seq: &TokenSequence, r: &ReducedSequence) {
    let assignment: Vec<usize> = r.assignment().iter().map(|a| a.unwrap()).collect();
    assert_eq!(r.weights().iter().sum::<usize>(), seq.rows());
    let mut first_seen = Vec::new();
    for (m, &slot) in assignment.iter().enumerate() {
        if slot == first_seen.len() {
            first_seen.push(m);
        } else {
            assert!(slot < first_seen.len(), "slot {slot} appears out of order");
        }
    }
    assert_eq!(first_seen.len(), r.len());
    for j in 0..r.len() {
        let members: Vec<usize> = (0..seq.rows()).filter(|&m| assignment[m] == j).collect();
        assert_eq!(members.len(), r.weights()[j]);
        for d in 0..seq.dims() {
            let mean = members
                .iter()
                .map(|&m| f64::from(seq.row(m)[d]))
                .sum::<f64>()
                / members.len() as f64;
            let got = f64::from(r.token(j)[d]);
            assert!(
                (got - mean).abs() <= 1e-5 * mean.abs().max(1.0),
                "token {j} dim {d}: {got} vs {mean}"
            );
        }
    }
}

prop_compose! {
    /// Tokens scattered around a few random directions.
    fn clustered_tokens()(dims in 1usize..12, rows in 0usize..48, centers in 1usize..5)
        (data in proptest::collection::vec(-1.0f32..1.0, rows * dims),
         anchors in proptest::collection::vec(-1.0f32..1.0, centers * dims),
         picks in proptest::collection::vec(0..centers, rows),
         rows in Just(rows), dims in Just(dims))
        -> TokenSequence
    {
        let mut out = Vec::with_capacity(rows * dims);
        for (m, noise) in data.chunks(dims).enumerate() {
            let a = &anchors[picks[m] * dims..(picks[m] + 1) * dims];
            let mut row: Vec<f32> = a.iter().zip(noise).map(|(x, n)| 2.0 * x + 0.4 * n).collect();
            if row.iter().all(|x| x.abs() < 1e-3) {
                row[0] = 1.0;
            }
            out.extend(row);
        }
        TokenSequence::new(out, rows, dims).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn fuse_matches_reference_and_invariants(seq in clustered_tokens(), tau in -1.0f64..=1.0) {
        let (r, evals) = fuse_counted(&seq, tau).unwrap();
        let assignment: Vec<usize> = r.assignment().iter().map(|a| a.unwrap()).collect();
        prop_assert_eq!(&assignment, &reference_sequential(&seq, tau));
        check_reduction_invariants(&seq, &r);

        let mut expected = 0u64;
        let mut seen = 0usize;
        for &slot in &assignment {
            expected += seen as u64;
            seen = seen.max(slot + 1);
        }
        prop_assert_eq!(evals, expected);
        prop_assert!(r.len() <= seq.rows());
    }

    #[test]
    fn fuse_is_deterministic(seq in clustered_tokens(), tau in -1.0f64..=1.0) {
        let a = fuse(&seq, tau).unwrap();
        let b = fuse(&seq, tau).unwrap();
        let bits = |r: &ReducedSequence| r.tokens().iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        prop_assert_eq!(bits(&a), bits(&b));
        prop_assert_eq!(a.assignment(), b.assignment());
    }

    #[test]
    fn tau_one_is_bitwise_identity(seq in clustered_tokens()) {
        let r = fuse(&seq, 1.0).unwrap();
        prop_assert_eq!(r.len(), seq.rows());
        prop_assert!(r.tokens().iter().zip(seq.as_slice()).all(|(a, b)| a.to_bits() == b.to_bits()));
        let e = reconstruction_error(&seq, &r).unwrap();
        prop_assert_eq!(e.max, 0.0);
    }

    #[test]
    fn oracle_invariants(seq in clustered_tokens(), tau in -1.0f64..=1.0) {
        let r = oracle_fuse(&seq, tau).unwrap();
        check_reduction_invariants(&seq, &r);
    }

    #[test]
    fn pruning_keeps_subsequences(seq in clustered_tokens(), seed in any::<u64>(), frac in 0.0f64..=1.0) {
        let m = seq.rows();
        let budget = (frac * m as f64).floor() as usize;
        let scores = ImportanceScores::new((0..m).map(|i| ((i * 7919) % 13) as f32).collect()).unwrap();
        let mut outputs = vec![
            random_sample(&seq, budget, seed).unwrap(),
            topk_prune(&seq, &scores, budget).unwrap(),
        ];
        if budget > 0 {
            outputs.push(uniform_stride(&seq, budget).unwrap());
        }
        for r in outputs {
            let kept = kept_indices(&r);
            prop_assert_eq!(kept.len(), budget);
            prop_assert!(kept.windows(2).all(|w| w[0] < w[1]));
            for (j, &src) in kept.iter().enumerate() {
                prop_assert!(r.token(j).iter().zip(seq.row(src)).all(|(a, b)| a.to_bits() == b.to_bits()));
            }
            prop_assert!(r.weights().iter().all(|&w| w == 1));
        }
    }

    #[test]
    fn savings_monotone_in_output(m in 1usize..500, l in 0usize..100) {
        let mut prev = f64::INFINITY;
        for k in 0..=m {
            let s = attention_savings(m, k, l).unwrap();
            prop_assert!((0.0..=1.0).contains(&s));
            prop_assert!(s <= prev);
            prev = s;
        }
        prop_assert_eq!(attention_savings(m, m, l).unwrap(), 0.0);
    }
}

#[test]
fn unmerged_tokens_have_zero_error() {
    let seq =
        TokenSequence::from_rows(&[[1.0f32, 0.0], [0.99, 0.1], [0.0, 1.0], [-0.3, 0.2]]).unwrap();
    let r = fuse(&seq, 0.9).unwrap();
    let e = reconstruction_error(&seq, &r).unwrap();
    for (m, slot) in r.assignment().iter().enumerate() {
        let j = slot.unwrap();
        if r.weights()[j] == 1 {
            assert_eq!(e.per_token[m], 0.0);
        }
    }
}
