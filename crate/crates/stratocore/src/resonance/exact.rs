//! Exact resonance decisions for tori with rational squared periods.
//!
//! With `Aᵢ = aᵢ²` rational, each `ω(n)²` is rational and the condition
//! `s₁√x + s₂√y = s₃√z` is settled by one squaring step plus an explicit sign
//! check, so squaring never introduces a spurious solution.

use alloc::format;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::spectral_torus::TorusSpec;
use crate::wave_basis::Label;
use crate::{Error, Result};

/// Largest denominator accepted when recognizing `aᵢ²` as a rational.
pub const MAX_DENOMINATOR: i64 = 1_000_000;

/// Best rational approximation `p/q` of `x` with `q ≤ max_den` that agrees
/// with `x` to a relative `1e−14`; `None` when there is none.
pub fn rational_square(a: f64, max_den: i64) -> Option<(i64, i64)> {
    let x = a * a;
    if !(x.is_finite() && x > 0.0) {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let ai = crate::math::floor(r);
        if ai > 1e15 {
            break;
        }
        let ai_i = ai as i128;
        let h2 = ai_i * h1 + h0;
        let k2 = ai_i * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let approx = h1 as f64 / k1 as f64;
        if (approx - x).abs() <= 1e-14 * x {
            return Some((h1 as i64, k1 as i64));
        }
        let frac = r - ai;
        if frac == 0.0 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

/// Torus with exact rational `aᵢ²`.
#[derive(Clone, Debug)]
pub struct ExactTorus {
    inv_a2: [BigRational; 3],
}

impl ExactTorus {
    pub fn new(t: &TorusSpec) -> Result<Self> {
        let mut inv = [
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ];
        for i in 0..3 {
            let (p, q) = rational_square(t.a[i], MAX_DENOMINATOR).ok_or_else(|| {
                Error::Exactness(format!(
                    "a{}^2 = {} is not a rational with denominator at most {}; use floating mode",
                    i + 1,
                    t.a[i] * t.a[i],
                    MAX_DENOMINATOR
                ))
            })?;
            inv[i] = BigRational::new(BigInt::from(q), BigInt::from(p));
        }
        Ok(Self { inv_a2: inv })
    }

    fn sq(&self, k: [i64; 3], i: usize) -> BigRational {
        BigRational::from_integer(BigInt::from(k[i] * k[i])) * &self.inv_a2[i]
    }

    /// `ω(n)²` as an exact rational.
    pub fn omega_sq(&self, n: [i64; 3]) -> BigRational {
        let h = self.sq(n, 0) + self.sq(n, 1);
        if h.is_zero() {
            return h;
        }
        let total = &h + self.sq(n, 2);
        h / total
    }

    /// Exact test of `ω^a(k) + ω^b(m) − ω^c(n) = 0`.
    pub fn is_resonant(&self, k: [i64; 3], m: [i64; 3], n: [i64; 3], labels: [Label; 3]) -> bool {
        let terms = [
            (sign(labels[0]), self.omega_sq(k)),
            (sign(labels[1]), self.omega_sq(m)),
            (-sign(labels[2]), self.omega_sq(n)),
        ];
        sum_of_roots_vanishes(&terms)
    }
}

fn sign(l: Label) -> i8 {
    match l {
        Label::Zero => 0,
        Label::Plus => 1,
        Label::Minus => -1,
    }
}

/// Decide `Σ sᵢ √rᵢ = 0` for at most three terms with `sᵢ ∈ {−1, 0, 1}` and
/// `rᵢ ≥ 0` rational.
pub fn sum_of_roots_vanishes(terms: &[(i8, BigRational)]) -> bool {
    let live: alloc::vec::Vec<(i8, &BigRational)> = terms
        .iter()
        .filter(|(s, r)| *s != 0 && !r.is_zero())
        .map(|(s, r)| (*s, r))
        .collect();
    match live.len() {
        0 => true,
        1 => false,
        2 => live[0].0 == -live[1].0 && live[0].1 == live[1].1,
        3 => {
            // s₁√r₁ + s₂√r₂ = −s₃√r₃; the left side's sign is known exactly.
            let (s1, r1) = live[0];
            let (s2, r2) = live[1];
            let (s3, r3) = live[2];
            let lhs_sign: i8 = if s1 == s2 {
                s1
            } else {
                match r1.cmp(r2) {
                    core::cmp::Ordering::Greater => s1,
                    core::cmp::Ordering::Less => s2,
                    core::cmp::Ordering::Equal => 0,
                }
            };
            if lhs_sign != -s3 {
                return false;
            }
            // (s₁√r₁ + s₂√r₂)² = r₃  ⇔  2 s₁s₂ √(r₁r₂) = r₃ − r₁ − r₂
            let d = r3 - r1 - r2;
            let cross_sign = s1 * s2;
            let d_sign: i8 = if d.is_zero() {
                0
            } else if d.is_positive() {
                1
            } else {
                -1
            };
            if d_sign != cross_sign {
                return false;
            }
            let four = BigRational::from_integer(BigInt::from(4));
            &d * &d == four * r1 * r2
        }
        _ => unreachable!("at most three terms"),
    }
}
