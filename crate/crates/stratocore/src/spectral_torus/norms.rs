//! Sobolev and mixed Lebesgue norms.
//!
//! Lebesgue norms use the normalized measure `dx/|T³|` (grid mean), so a
//! constant field of value 1 has norm 1 for every exponent and the `L²` norm
//! coincides with the coefficient `ℓ²` norm. Sums run in storage order.

use alloc::vec;
use alloc::vec::Vec;

use super::field::{PhysicalField, Spectral};
use super::torus::{norm2, norm2_h};
use crate::math::{powf, sqrt};

/// `(Σ (1+|ň|²)^s |û_n|²)^{1/2}`.
pub fn sobolev_norm<F: Spectral>(f: &F, s: f64) -> f64 {
    let t = *f.torus();
    let mut acc = 0.0;
    for idx in 0..t.len() {
        let e = f.mode_energy(idx);
        if e != 0.0 {
            acc += weight(1.0 + norm2(t.check(t.freq(idx))), s) * e;
        }
    }
    sqrt(acc)
}

/// `(Σ (1+|ň_h|²)^s (1+ň₃²)^{s'} |û_n|²)^{1/2}`.
pub fn aniso_sobolev_norm<F: Spectral>(f: &F, s: f64, s_v: f64) -> f64 {
    let t = *f.torus();
    let mut acc = 0.0;
    for idx in 0..t.len() {
        let e = f.mode_energy(idx);
        if e != 0.0 {
            let kc = t.check(t.freq(idx));
            acc += weight(1.0 + norm2_h(kc), s) * weight(1.0 + kc[2] * kc[2], s_v) * e;
        }
    }
    sqrt(acc)
}

/// Homogeneous seminorm `(Σ |ň|^{2s} |û_n|²)^{1/2}`.
pub fn homogeneous_sobolev_norm<F: Spectral>(f: &F, s: f64) -> f64 {
    let t = *f.torus();
    let mut acc = 0.0;
    for idx in 0..t.len() {
        let e = f.mode_energy(idx);
        if e != 0.0 {
            let k2 = norm2(t.check(t.freq(idx)));
            if k2 > 0.0 {
                acc += weight(k2, s) * e;
            }
        }
    }
    sqrt(acc)
}

#[inline]
fn weight(base: f64, s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else if s == 1.0 {
        base
    } else {
        powf(base, s)
    }
}

/// Order of integration for [`aniso_lebesgue_norm`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MixedOrder {
    /// `L^p_h L^q_v`: `L^q` in `x₃` first, then `L^p` over the horizontal plane.
    HorizontalOuter,
    /// `L^q_v L^p_h`: `L^p` over each horizontal layer first, then `L^q` in `x₃`.
    VerticalOuter,
}

/// Normalized `L^p` mean of nonnegative samples; `p = ∞` takes the maximum.
pub fn lp_mean(values: &[f64], p: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    if p.is_infinite() {
        return values.iter().cloned().fold(0.0, f64::max);
    }
    let n = values.len() as f64;
    if p == 2.0 {
        return sqrt(values.iter().map(|x| x * x).sum::<f64>() / n);
    }
    if p == 1.0 {
        return values.iter().sum::<f64>() / n;
    }
    powf(values.iter().map(|x| powf(*x, p)).sum::<f64>() / n, 1.0 / p)
}

/// Plain `L^p` norm of the pointwise magnitude.
pub fn lebesgue_norm(f: &PhysicalField, p: f64) -> f64 {
    lp_mean(&f.magnitude(), p)
}

/// Mixed norm with exponent `p` horizontally and `q` vertically.
pub fn aniso_lebesgue_norm(f: &PhysicalField, p: f64, q: f64, order: MixedOrder) -> f64 {
    let t = *f.torus();
    let mag = f.magnitude();
    let nh = t.n[0] * t.n[1];
    let nv = t.n[2];
    match order {
        MixedOrder::HorizontalOuter => {
            let mut inner = vec![0.0; nh];
            let mut col = vec![0.0; nv];
            for (h, slot) in inner.iter_mut().enumerate() {
                for (j, c) in col.iter_mut().enumerate() {
                    *c = mag[h + nh * j];
                }
                *slot = lp_mean(&col, q);
            }
            lp_mean(&inner, p)
        }
        MixedOrder::VerticalOuter => {
            let inner: Vec<f64> = (0..nv)
                .map(|j| lp_mean(&mag[j * nh..(j + 1) * nh], p))
                .collect();
            lp_mean(&inner, q)
        }
    }
}

/// `‖ ‖f(·, x₃)‖_{H^σ_h} ‖_{L^p_v}` with `x₃` on the grid.
pub fn lpv_hsigma_norm<F: Spectral>(f: &F, p: f64, sigma: f64) -> f64 {
    lpv_hsigma_profile(f, sigma)
        .map(|prof| lp_mean(&prof, p))
        .unwrap_or(0.0)
}

/// Per-layer `H^σ_h` norms `‖f(·, x₃_j)‖_{H^σ_h}`, `j = 0..N₃`.
pub fn lpv_hsigma_profile<F: Spectral>(f: &F, sigma: f64) -> Option<Vec<f64>> {
    let t = *f.torus();
    let (n1, n2, n3) = (t.n[0], t.n[1], t.n[2]);
    let nh = n1 * n2;
    let tw: Vec<crate::C64> = (0..n3)
        .map(|j| crate::math::cis(2.0 * core::f64::consts::PI * j as f64 / n3 as f64))
        .collect();
    let mut layer = vec![0.0; n3];
    let mut line = vec![crate::C64::new(0.0, 0.0); n3];
    for h in 0..nh {
        let kc = t.check(t.freq(h));
        let w = weight(1.0 + norm2_h(kc), sigma);
        for c in 0..f.ncomp() {
            let mut any = false;
            for (i3, l) in line.iter_mut().enumerate() {
                *l = f.coeff(h + nh * i3, c);
                any |= l.re != 0.0 || l.im != 0.0;
            }
            if !any {
                continue;
            }
            for (j, acc) in layer.iter_mut().enumerate() {
                let mut s = crate::C64::new(0.0, 0.0);
                for (i3, l) in line.iter().enumerate() {
                    s += l * tw[(i3 * j) % n3];
                }
                *acc += w * s.norm_sqr();
            }
        }
    }
    Some(layer.into_iter().map(sqrt).collect())
}
