//! Smooth dyadic cutoffs and Littlewood-Paley blocks.
//!
//! `χ` equals 1 on `[0, 3/4]`, vanishes beyond `4/3`, and interpolates with
//! the `C^∞` step built from `e^{−1/x}`. `φ(r) = χ(r/2) − χ(r)` is supported
//! in `[3/4, 8/3]`, and the sum `χ(r) + Σ_{q≥0} φ(2^{−q} r)` telescopes to 1.

use super::field::Spectral;
use super::torus::{norm2, norm2_h, TorusSpec};
use crate::math::{exp, sqrt};

const LO: f64 = 0.75;
const HI: f64 = 4.0 / 3.0;

fn bump(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        exp(-1.0 / x)
    }
}

/// Low-frequency cutoff.
pub fn chi(r: f64) -> f64 {
    if r <= LO {
        return 1.0;
    }
    if r >= HI {
        return 0.0;
    }
    let x = (r - LO) / (HI - LO);
    let (g0, g1) = (bump(x), bump(1.0 - x));
    g1 / (g0 + g1)
}

/// Annulus cutoff `χ(r/2) − χ(r)`.
pub fn phi(r: f64) -> f64 {
    chi(r / 2.0) - chi(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DyadicAxis {
    /// Cut on `|ň|`.
    Isotropic,
    /// Cut on `|ň_h|` only.
    Horizontal,
}

fn radius(t: &TorusSpec, k: [i64; 3], axis: DyadicAxis) -> f64 {
    let kc = t.check(k);
    match axis {
        DyadicAxis::Isotropic => sqrt(norm2(kc)),
        DyadicAxis::Horizontal => sqrt(norm2_h(kc)),
    }
}

/// `Δ_q f`: multiplier `φ(r/2^q)` for `q ≥ 0`, `χ(r)` for `q = −1`.
pub fn dyadic_block<F: Spectral>(f: &F, q: i32, axis: DyadicAxis) -> F {
    let t = *f.torus();
    if q < -1 {
        return f.apply_real_multiplier(|_| 0.0);
    }
    f.apply_real_multiplier(|k| {
        let r = radius(&t, k, axis);
        if q == -1 {
            chi(r)
        } else {
            phi(r / pow2(q))
        }
    })
}

/// `S_q f = Σ_{q' ≤ q−1} Δ_{q'} f`, multiplier `χ(r/2^q)`.
pub fn low_pass<F: Spectral>(f: &F, q: i32, axis: DyadicAxis) -> F {
    let t = *f.torus();
    f.apply_real_multiplier(|k| chi(radius(&t, k, axis) / pow2(q)))
}

/// Smallest `q` such that every block above it vanishes on this grid.
pub fn dyadic_qmax(t: &TorusSpec, axis: DyadicAxis) -> i32 {
    let mut rmax: f64 = 0.0;
    for idx in 0..t.len() {
        rmax = rmax.max(radius(t, t.freq(idx), axis));
    }
    let mut q = 0;
    while LO * pow2(q) < rmax {
        q += 1;
    }
    q
}

fn pow2(q: i32) -> f64 {
    libm::ldexp(1.0, q)
}
