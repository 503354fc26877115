//! Labeled random streams derived from one 64-bit seed.
//!
//! A [`SeedTree`] never draws numbers itself; it hands out independent
//! ChaCha8 streams keyed by a path of labels, so adding a new consumer does
//! not perturb the draws of existing ones.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(mut h: u64, bytes: &[u8]) -> u64 {
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

/// Splittable seed: `child` and `stream` are pure functions of the path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedTree {
    key: u64,
}

impl SeedTree {
    pub fn new(seed: u64) -> Self {
        Self {
            key: fnv1a(FNV_OFFSET, &seed.to_le_bytes()),
        }
    }

    pub fn child(&self, label: &str) -> Self {
        let h = fnv1a(self.key, &[0xff]);
        Self {
            key: fnv1a(h, label.as_bytes()),
        }
    }

    /// Child keyed by an integer, for per-sample streams.
    pub fn index(&self, i: u64) -> Self {
        let h = fnv1a(self.key, &[0xfe]);
        Self {
            key: fnv1a(h, &i.to_le_bytes()),
        }
    }

    pub fn key(&self) -> u64 {
        self.key
    }

    pub fn stream(&self, label: &str) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.child(label).key)
    }
}

/// Uniform draw in `[0, 1)` with 53 random bits.
pub fn uniform<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform draw in `[lo, hi)`.
pub fn uniform_in<R: RngCore + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * uniform(rng)
}

/// Standard normal draw (Box-Muller, one value per call).
pub fn normal<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    let u1 = 1.0 - uniform(rng);
    let u2 = uniform(rng);
    crate::math::sqrt(-2.0 * crate::math::ln(u1))
        * crate::math::cos(2.0 * core::f64::consts::PI * u2)
}

/// Uniform integer in `[lo, hi]`.
pub fn int_in<R: RngCore + ?Sized>(rng: &mut R, lo: i64, hi: i64) -> i64 {
    let span = (hi - lo + 1) as u64;
    lo + (rng.next_u64() % span) as i64
}
