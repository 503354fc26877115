use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Periodic box `∏ [0, 2π aᵢ]` sampled on an `N₁ × N₂ × N₃` grid.
///
/// Spectral arrays are stored in FFT order with `n₁` fastest: the flat index of
/// grid slot `(i₁, i₂, i₃)` is `i₁ + N₁ (i₂ + N₂ i₃)` and slot `i` along an axis
/// of size `N` carries the frequency `i` for `i ≤ N/2` and `i − N` otherwise.
/// The Nyquist slot `N/2` aliases `±N/2`; fields keep it at zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusSpec {
    pub a: [f64; 3],
    pub n: [usize; 3],
}

impl TorusSpec {
    pub fn new(a: [f64; 3], n: [usize; 3]) -> Result<Self> {
        for (i, &ai) in a.iter().enumerate() {
            if !(ai.is_finite() && ai > 0.0) {
                return Err(Error::InvalidTorus(format!(
                    "period a{} = {} must be positive",
                    i + 1,
                    ai
                )));
            }
        }
        for (i, &ni) in n.iter().enumerate() {
            if ni < 4 || ni % 2 != 0 {
                return Err(Error::InvalidTorus(format!(
                    "grid size N{} = {} must be even and at least 4",
                    i + 1,
                    ni
                )));
            }
        }
        Ok(Self { a, n })
    }

    /// Unit periods, cubic grid.
    pub fn cube(n: usize) -> Result<Self> {
        Self::new([1.0; 3], [n; 3])
    }

    /// Number of grid points, equal to the number of stored frequencies.
    pub fn len(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Volume `(2π)³ a₁a₂a₃` of the box.
    pub fn volume(&self) -> f64 {
        let tau = 2.0 * core::f64::consts::PI;
        tau * tau * tau * self.a[0] * self.a[1] * self.a[2]
    }

    /// Check frequency `ň = (n₁/a₁, n₂/a₂, n₃/a₃)`.
    #[inline]
    pub fn check(&self, k: [i64; 3]) -> [f64; 3] {
        [
            k[0] as f64 / self.a[0],
            k[1] as f64 / self.a[1],
            k[2] as f64 / self.a[2],
        ]
    }

    #[inline]
    fn axis_freq(n: usize, i: usize) -> i64 {
        if i <= n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// Integer frequency stored at flat index `idx`.
    #[inline]
    pub fn freq(&self, idx: usize) -> [i64; 3] {
        let i1 = idx % self.n[0];
        let r = idx / self.n[0];
        let i2 = r % self.n[1];
        let i3 = r / self.n[1];
        [
            Self::axis_freq(self.n[0], i1),
            Self::axis_freq(self.n[1], i2),
            Self::axis_freq(self.n[2], i3),
        ]
    }

    /// Flat index of frequency `k`, or `None` when some `|kᵢ| ≥ Nᵢ/2`.
    #[inline]
    pub fn index(&self, k: [i64; 3]) -> Option<usize> {
        let mut slot = [0usize; 3];
        for d in 0..3 {
            let nd = self.n[d] as i64;
            if 2 * k[d].abs() >= nd {
                return None;
            }
            slot[d] = k[d].rem_euclid(nd) as usize;
        }
        Some(slot[0] + self.n[0] * (slot[1] + self.n[1] * slot[2]))
    }

    /// True when some component of the stored frequency sits on a Nyquist slot.
    #[inline]
    pub fn is_nyquist(&self, idx: usize) -> bool {
        let k = self.freq(idx);
        (0..3).any(|d| 2 * k[d].unsigned_abs() as usize == self.n[d])
    }

    /// Flat index of `−k` for the frequency stored at `idx`.
    #[inline]
    pub fn mirror(&self, idx: usize) -> usize {
        let i1 = idx % self.n[0];
        let r = idx / self.n[0];
        let i2 = r % self.n[1];
        let i3 = r / self.n[1];
        let m = |n: usize, i: usize| if i == 0 { 0 } else { n - i };
        m(self.n[0], i1) + self.n[0] * (m(self.n[1], i2) + self.n[1] * m(self.n[2], i3))
    }

    /// Two-thirds rule: frequency survives dealiasing iff `3|kᵢ| < Nᵢ` on every axis.
    #[inline]
    pub fn in_band(&self, k: [i64; 3]) -> bool {
        (0..3).all(|d| 3 * k[d].unsigned_abs() < self.n[d] as u64)
    }

    /// Largest `|kᵢ|` kept by the two-thirds rule on each axis.
    pub fn band_limit(&self) -> [i64; 3] {
        [0, 1, 2].map(|d| ((self.n[d] - 1) / 3) as i64)
    }

    /// Check frequencies of every stored slot, in storage order.
    pub fn check_table(&self) -> Vec<[f64; 3]> {
        (0..self.len()).map(|i| self.check(self.freq(i))).collect()
    }

    /// Sharp horizontal Poincaré constant `min(1/a₁², 1/a₂²)`.
    pub fn poincare_constant_h(&self) -> f64 {
        let c1 = 1.0 / (self.a[0] * self.a[0]);
        let c2 = 1.0 / (self.a[1] * self.a[1]);
        c1.min(c2)
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self == other
    }
}

#[inline]
pub(crate) fn norm2(v: [f64; 3]) -> f64 {
    v[0] * v[0] + v[1] * v[1] + v[2] * v[2]
}

#[inline]
pub(crate) fn norm2_h(v: [f64; 3]) -> f64 {
    v[0] * v[0] + v[1] * v[1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(TorusSpec::new([1.0; 3], [6, 4, 5]).is_err());
        assert!(TorusSpec::new([1.0; 3], [2, 4, 4]).is_err());
        assert!(TorusSpec::new([1.0, -1.0, 1.0], [4, 4, 4]).is_err());
        assert!(TorusSpec::new([1.0, 2.0, 0.5], [4, 6, 8]).is_ok());
    }

    #[test]
    fn index_freq_round_trip() {
        let t = TorusSpec::new([1.0, 2.0, 0.5], [6, 4, 8]).unwrap();
        for idx in 0..t.len() {
            let k = t.freq(idx);
            if t.is_nyquist(idx) {
                assert!(t.index(k).is_none());
            } else {
                assert_eq!(t.index(k), Some(idx));
                let mk = [-k[0], -k[1], -k[2]];
                assert_eq!(t.index(mk), Some(t.mirror(idx)));
            }
        }
    }

    #[test]
    fn check_frequency_and_poincare() {
        let t = TorusSpec::new([2.0, 1.0, 0.5], [4, 4, 4]).unwrap();
        assert_eq!(t.check([1, 1, 1]), [0.5, 1.0, 2.0]);
        assert_eq!(t.poincare_constant_h(), 0.25);
        assert_eq!(TorusSpec::cube(4).unwrap().poincare_constant_h(), 1.0);
    }

    #[test]
    fn band() {
        let t = TorusSpec::new([1.0; 3], [16, 16, 8]).unwrap();
        assert_eq!(t.band_limit(), [5, 5, 2]);
        assert!(t.in_band([5, -5, 2]));
        assert!(!t.in_band([6, 0, 0]));
    }
}
