//! Seeded synthetic embeddings with cluster structure.
//!
//! Tokens live on the unit sphere. Each cluster has a unit centroid
//! direction; a token is `normalize(centroid + spread * g / sqrt(N))` with
//! `g` a standard normal vector, so `spread` is the expected norm of the
//! noise before renormalization regardless of dimensionality.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::SeededRng;
use crate::sequence::{dot64, norm64, TokenSequence};

/// Parameters of a clustered embedding fixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterSpec {
    pub clusters: usize,
    pub per_cluster: usize,
    pub dims: usize,
    pub spread: f64,
    pub seed: u64,
    /// Orthonormalize the centroid directions (requires `clusters <= dims`).
    pub orthogonal: bool,
}

impl ClusterSpec {
    pub fn new(clusters: usize, per_cluster: usize, dims: usize, spread: f64, seed: u64) -> Self {
        Self {
            clusters,
            per_cluster,
            dims,
            spread,
            seed,
            orthogonal: true,
        }
    }

    /// Total token count `clusters * per_cluster`.
    pub fn tokens(&self) -> usize {
        self.clusters * self.per_cluster
    }

    /// Ground-truth labels: `per_cluster` copies of each cluster id, in order.
    pub fn labels(&self) -> Vec<usize> {
        (0..self.clusters)
            .flat_map(|c| core::iter::repeat(c).take(self.per_cluster))
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if self.clusters == 0 {
            return Err(Error::ClusterSpec("clusters must be at least 1"));
        }
        if self.per_cluster == 0 {
            return Err(Error::ClusterSpec("per_cluster must be at least 1"));
        }
        if self.dims == 0 {
            return Err(Error::ZeroDims);
        }
        if !(self.spread >= 0.0 && self.spread.is_finite()) {
            return Err(Error::ClusterSpec("spread must be finite and non-negative"));
        }
        if self.orthogonal && self.clusters > self.dims {
            return Err(Error::TooManyClusters {
                clusters: self.clusters,
                dims: self.dims,
            });
        }
        self.clusters
            .checked_mul(self.per_cluster)
            .and_then(|m| m.checked_mul(self.dims))
            .ok_or(Error::Overflow {
                rows: self.clusters.saturating_mul(self.per_cluster),
                dims: self.dims,
            })?;
        Ok(())
    }
}

/// Generates the fixture described by `spec` and its ground-truth labels.
///
/// Draw order: all centroid vectors (Gram-Schmidt against earlier
/// centroids, redrawn if the residual norm falls below 1e-6), then the
/// noise vectors token by token in cluster-block order.
pub fn generate_clusters(spec: &ClusterSpec) -> Result<(TokenSequence, Vec<usize>)> {
    spec.validate()?;
    let dims = spec.dims;
    let mut rng = SeededRng::new(spec.seed);

    let mut centroids: Vec<f64> = Vec::with_capacity(spec.clusters * dims);
    for c in 0..spec.clusters {
        let direction = loop {
            let mut v: Vec<f64> = (0..dims).map(|_| rng.gaussian()).collect();
            if spec.orthogonal {
                for prev in centroids.chunks_exact(dims).take(c) {
                    let p = dot64(&v, prev);
                    for (x, &q) in v.iter_mut().zip(prev) {
                        *x -= p * q;
                    }
                }
            }
            let n = norm64(&v);
            if n >= 1e-6 {
                v.iter_mut().for_each(|x| *x /= n);
                break v;
            }
        };
        centroids.extend(direction);
    }

    let scale = spec.spread / libm::sqrt(dims as f64);
    let mut data: Vec<f32> = Vec::with_capacity(spec.tokens() * dims);
    let mut point = alloc::vec![0.0f64; dims];
    for centroid in centroids.chunks_exact(dims) {
        for _ in 0..spec.per_cluster {
            for (p, &c) in point.iter_mut().zip(centroid) {
                *p = c + scale * rng.gaussian();
            }
            let n = norm64(&point);
            data.extend(point.iter().map(|&x| (x / n) as f32));
        }
    }
    let seq = TokenSequence::new(data, spec.tokens(), dims)?;
    Ok((seq, spec.labels()))
}
