//! Seeded, portable randomness.
//!
//! The stream is ChaCha8 seeded through `rand_core`'s `seed_from_u64`
//! (PCG32 expansion of the 64-bit seed). All derived draws are defined here
//! on top of raw `u64` outputs so that another implementation can reproduce
//! them exactly:
//!
//! * uniform `[0, 1)`: top 53 bits of one `u64`, times `2^-53`;
//! * integer below `n`: Lemire's multiply-and-reject on one or more `u64`s;
//! * standard normal: Box-Muller cosine branch on two uniforms, one normal
//!   per pair (`u1` is shifted into `(0, 1]`).

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

const TWO_POW_NEG_53: f64 = 1.0 / (1u64 << 53) as f64;

/// Deterministic generator used by every seeded operation in the crate.
#[derive(Debug, Clone)]
pub struct SeededRng {
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * TWO_POW_NEG_53
    }

    /// Uniform integer in `[0, bound)`. `bound` must be non-zero.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let wide = u128::from(self.next_u64()) * u128::from(bound);
            if (wide as u64) >= threshold {
                return (wide >> 64) as u64;
            }
        }
    }

    /// Standard normal draw.
    pub fn gaussian(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * core::f64::consts::PI * u2)
    }
}
