//! Token matrices and the cosine-similarity kernel.
//!
//! Storage is `f32`; every dot product and norm is accumulated in `f64`.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Smallest row norm accepted by [`validate_sequence`].
pub const MIN_NORM: f64 = 1e-12;

/// An ordered `rows x dims` matrix of token embeddings, row-major.
///
/// A value of this type always satisfies the validation rules: `dims >= 1`,
/// every entry finite, every row norm at least [`MIN_NORM`].
#[derive(Debug, Clone, PartialEq)]
pub struct TokenSequence {
    data: Vec<f32>,
    rows: usize,
    dims: usize,
}

impl TokenSequence {
    /// Wraps `data` as a `rows x dims` matrix after validating it.
    pub fn new(data: Vec<f32>, rows: usize, dims: usize) -> Result<Self> {
        validate_sequence(&data, rows, dims)?;
        Ok(Self { data, rows, dims })
    }

    /// Builds a sequence from equally sized rows.
    pub fn from_rows<R: AsRef<[f32]>>(rows: &[R]) -> Result<Self> {
        let dims = rows
            .first()
            .map(|r| r.as_ref().len())
            .ok_or(Error::ZeroDims)?;
        let mut data = Vec::with_capacity(rows.len() * dims);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dims {
                return Err(Error::Shape {
                    expected: dims,
                    actual: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(data, rows.len(), dims)
    }

    /// The empty sequence of dimensionality `dims`.
    pub fn empty(dims: usize) -> Result<Self> {
        Self::new(Vec::new(), 0, dims)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    pub fn row(&self, index: usize) -> &[f32] {
        &self.data[index * self.dims..(index + 1) * self.dims]
    }

    pub fn iter_rows(&self) -> impl ExactSizeIterator<Item = &[f32]> + '_ {
        self.data.chunks_exact(self.dims)
    }

    pub fn as_slice(&self) -> &[f32] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f32> {
        self.data
    }
}

/// Checks the invariants of a row-major token matrix.
///
/// Rows are scanned in order; the first offending row is reported, with a
/// non-finite entry taking precedence over a zero norm in the same row.
pub fn validate_sequence(data: &[f32], rows: usize, dims: usize) -> Result<()> {
    if dims == 0 {
        return Err(Error::ZeroDims);
    }
    let expected = rows
        .checked_mul(dims)
        .ok_or(Error::Overflow { rows, dims })?;
    if data.len() != expected {
        return Err(Error::Shape {
            expected,
            actual: data.len(),
        });
    }
    for (index, row) in data.chunks_exact(dims).enumerate() {
        if row.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        if norm(row) < MIN_NORM {
            return Err(Error::Degenerate { index });
        }
    }
    Ok(())
}

/// Cosine similarity of two embeddings, clamped to `[-1, 1]`.
///
/// Symmetric bit-for-bit: `cosine_similarity(a, b) == cosine_similarity(b, a)`.
pub fn cosine_similarity(a: &[f32], b: &[f32]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Shape {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let (na, nb) = (norm(a), norm(b));
    if na < MIN_NORM {
        return Err(Error::Degenerate { index: 0 });
    }
    if nb < MIN_NORM {
        return Err(Error::Degenerate { index: 1 });
    }
    Ok(similarity_from_parts(dot(a, b), na, nb))
}

/// Euclidean norm of an `f32` row, accumulated in `f64`.
pub(crate) fn norm(x: &[f32]) -> f64 {
    libm::sqrt(x.iter().map(|&v| f64::from(v) * f64::from(v)).sum())
}

pub(crate) fn norm64(x: &[f64]) -> f64 {
    libm::sqrt(x.iter().map(|&v| v * v).sum())
}

pub(crate) fn dot(a: &[f32], b: &[f32]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| f64::from(x) * f64::from(y))
        .sum()
}

/// Dot product of a stored token against an `f64` centroid.
pub(crate) fn dot_mixed(a: &[f32], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| f64::from(x) * y).sum()
}

pub(crate) fn dot64(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// `dot / (na * nb)` clamped to `[-1, 1]`.
///
/// Centroids can only reach zero norm through rounding; such a centroid is
/// treated as orthogonal to everything.
#[inline]
pub(crate) fn similarity_from_parts(dot: f64, na: f64, nb: f64) -> f64 {
    let denom = na * nb;
    if denom == 0.0 {
        return 0.0;
    }
    (dot / denom).clamp(-1.0, 1.0)
}
