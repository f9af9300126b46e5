//! Global greedy centroid agglomeration: the quadratic reference for [`fuse`].
//!
//! Every input starts as its own centroid of weight 1. Each round merges
//! the globally most similar pair of centroids (ties: lexicographically
//! smallest index pair) by weighted mean, as long as their similarity is
//! strictly above the threshold.
//!
//! Pair similarities are held in a triangular cache. A pair is evaluated
//! once up front and again only when one of its centroids changes, so the
//! evaluation count is `M(M-1)/2` plus `k - 1` per merge, where `k` is the
//! centroid count after the merge. The cache costs `4 * M * (M - 1)` bytes.
//!
//! [`fuse`]: crate::tofu::fuse

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::sequence::{dot64, norm64, similarity_from_parts, TokenSequence};
use crate::tofu::{check_tau, ReducedSequence};

/// Global greedy fusion of `seq` with threshold `tau`.
pub fn oracle_fuse(seq: &TokenSequence, tau: f64) -> Result<ReducedSequence> {
    oracle_fuse_counted(seq, tau).map(|(reduced, _)| reduced)
}

/// [`oracle_fuse`], also returning the number of pair similarity evaluations.
pub fn oracle_fuse_counted(seq: &TokenSequence, tau: f64) -> Result<(ReducedSequence, u64)> {
    check_tau(tau)?;
    let mut state = Agglomeration::new(seq);
    while let Some((i, j, s)) = state.best_pair() {
        if s <= tau {
            break;
        }
        state.merge(i, j);
    }
    Ok(state.finish())
}

struct Agglomeration {
    len: usize,
    dims: usize,
    centroids: Vec<f64>,
    norms: Vec<f64>,
    weights: Vec<usize>,
    active: Vec<bool>,
    members: Vec<Vec<usize>>,
    /// Upper triangle, `sims[tri(i, j)]` for `i < j`.
    sims: Vec<f64>,
    /// Most similar active partner `j > i` of each active slot `i`.
    row_best: Vec<Option<(usize, f64)>>,
    evals: u64,
}

impl Agglomeration {
    fn new(seq: &TokenSequence) -> Self {
        let len = seq.rows();
        let dims = seq.dims();
        let centroids: Vec<f64> = seq.as_slice().iter().map(|&v| f64::from(v)).collect();
        let norms = centroids.chunks_exact(dims).map(norm64).collect();
        let mut state = Self {
            len,
            dims,
            centroids,
            norms,
            weights: vec![1; len],
            active: vec![true; len],
            members: (0..len).map(|m| vec![m]).collect(),
            sims: vec![0.0; len * len.saturating_sub(1) / 2],
            row_best: vec![None; len],
            evals: 0,
        };
        for i in 0..len {
            for j in i + 1..len {
                let s = state.similarity(i, j);
                let t = state.tri(i, j);
                state.sims[t] = s;
            }
        }
        for i in 0..len {
            state.rescan(i);
        }
        state
    }

    fn tri(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j);
        i * self.len - i * (i + 1) / 2 + (j - i - 1)
    }

    fn centroid(&self, i: usize) -> &[f64] {
        &self.centroids[i * self.dims..(i + 1) * self.dims]
    }

    fn similarity(&mut self, i: usize, j: usize) -> f64 {
        self.evals += 1;
        similarity_from_parts(
            dot64(self.centroid(i), self.centroid(j)),
            self.norms[i],
            self.norms[j],
        )
    }

    fn rescan(&mut self, i: usize) {
        let mut best: Option<(usize, f64)> = None;
        for j in i + 1..self.len {
            if !self.active[j] {
                continue;
            }
            let s = self.sims[self.tri(i, j)];
            if best.map_or(true, |(_, b)| s > b) {
                best = Some((j, s));
            }
        }
        self.row_best[i] = best;
    }

    fn best_pair(&self) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for (i, rb) in self.row_best.iter().enumerate() {
            if let Some((j, s)) = *rb {
                if best.map_or(true, |(_, _, b)| s > b) {
                    best = Some((i, j, s));
                }
            }
        }
        best
    }

    /// Folds slot `j` into slot `i` (`i < j`).
    fn merge(&mut self, i: usize, j: usize) {
        let dims = self.dims;
        let (wi, wj) = (self.weights[i] as f64, self.weights[j] as f64);
        for d in 0..dims {
            let merged =
                (self.centroids[i * dims + d] * wi + self.centroids[j * dims + d] * wj) / (wi + wj);
            self.centroids[i * dims + d] = merged;
        }
        self.norms[i] = norm64(self.centroid(i));
        self.weights[i] += self.weights[j];
        self.active[j] = false;
        self.row_best[j] = None;
        let moved = core::mem::take(&mut self.members[j]);
        self.members[i].extend(moved);

        for r in 0..self.len {
            if r == i || !self.active[r] {
                continue;
            }
            let (lo, hi) = if r < i { (r, i) } else { (i, r) };
            let s = self.similarity(lo, hi);
            let t = self.tri(lo, hi);
            self.sims[t] = s;
        }

        self.rescan(i);
        for r in 0..self.len {
            if r == i || !self.active[r] {
                continue;
            }
            match self.row_best[r] {
                Some((p, _)) if p == i || p == j => self.rescan(r),
                Some((p, b)) if r < i => {
                    let s = self.sims[self.tri(r, i)];
                    if s > b || (s == b && i < p) {
                        self.row_best[r] = Some((i, s));
                    }
                }
                None if r < i => self.rescan(r),
                _ => {}
            }
        }
    }

    fn finish(self) -> (ReducedSequence, u64) {
        let mut slot_of = vec![0usize; self.len];
        let mut out = 0;
        for (i, &alive) in self.active.iter().enumerate() {
            if alive {
                slot_of[i] = out;
                out += 1;
            }
        }
        let mut assignment = vec![None; self.len];
        let mut tokens = Vec::with_capacity(out * self.dims);
        let mut weights = Vec::with_capacity(out);
        for (i, &alive) in self.active.iter().enumerate() {
            if !alive {
                continue;
            }
            tokens.extend(self.centroid(i).iter().map(|&c| c as f32));
            weights.push(self.weights[i]);
            for &m in &self.members[i] {
                assignment[m] = Some(slot_of[i]);
            }
        }
        (
            ReducedSequence::from_parts_unchecked(tokens, self.dims, weights, assignment),
            self.evals,
        )
    }
}
