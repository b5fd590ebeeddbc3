//! Seeded random streams.
//!
//! Every random quantity in the crate is drawn from [`SplitMix64`]: the state
//! advances by the constant `0x9E3779B97F4A7C15` and each output is the
//! state passed through [`mix64`] (Stafford's variant 13 finalizer). Streams
//! for independent purposes are keyed with [`derive_seed`], so a value never
//! depends on the order in which other streams were consumed.

use rand_core::RngCore;
use rand_distr::{Distribution, Poisson};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// 64-bit finalizer used both for output and for seed derivation.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the substream `tag` of `seed`.
#[inline]
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    mix64(seed ^ mix64(tag.wrapping_add(GOLDEN_GAMMA)))
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    #[inline]
    pub fn next(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    #[inline]
    pub fn unit(&mut self) -> f64 {
        (self.next() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1]`; safe to take the logarithm of.
    #[inline]
    pub fn unit_open0(&mut self) -> f64 {
        1.0 - self.unit()
    }

    /// Poisson variate. Means up to 10 use sequential inversion so the
    /// stream consumption is fully specified; larger means fall back to
    /// `rand_distr`.
    pub fn poisson(&mut self, mean: f64) -> u64 {
        if mean <= 0.0 {
            return 0;
        }
        if mean <= 10.0 {
            let u = self.unit();
            let mut k = 0u64;
            let mut p = (-mean).exp();
            let mut cdf = p;
            while u >= cdf {
                k += 1;
                p *= mean / k as f64;
                let next = cdf + p;
                // Tail mass below double precision.
                if next == cdf {
                    break;
                }
                cdf = next;
            }
            k
        } else {
            let dist = Poisson::new(mean).expect("finite positive mean");
            dist.sample(self) as u64
        }
    }
}

impl RngCore for SplitMix64 {
    fn next_u32(&mut self) -> u32 {
        (self.next() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        self.next()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let bytes = self.next().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }
}
