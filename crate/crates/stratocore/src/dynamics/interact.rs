//! Triad gathers `Σ_{k+m=n} w(ω^{a,b,c}) (A^a(k)·i m̌)(B^b(m) | e^c(n))` over
//! the two-thirds band, the common engine behind every bilinear form.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::cis;
use crate::spectral_torus::{leray_mode, Spectral, SpectralField, TorusSpec};
use crate::wave_basis::WaveFrame;
use crate::{Error, Result, C64};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const I: C64 = C64 { re: 0.0, im: 1.0 };

/// In-band frequencies with a dense lookup table.
#[derive(Clone, Debug)]
pub(crate) struct Band {
    pub torus: TorusSpec,
    pub idx: Vec<usize>,
    pub freq: Vec<[i64; 3]>,
    pub check: Vec<[f64; 3]>,
    lim: [i64; 3],
    lookup: Vec<u32>,
}

impl Band {
    pub fn new(t: &TorusSpec) -> Self {
        let lim = t.band_limit();
        let side = lim.map(|l| (2 * l + 1) as usize);
        let mut lookup = vec![u32::MAX; side[0] * side[1] * side[2]];
        let (mut idx, mut freq, mut check) = (Vec::new(), Vec::new(), Vec::new());
        for i in 0..t.len() {
            let k = t.freq(i);
            if k == [0, 0, 0] || !t.in_band(k) || t.is_nyquist(i) {
                continue;
            }
            let slot = Self::slot(lim, k);
            lookup[slot] = idx.len() as u32;
            idx.push(i);
            freq.push(k);
            check.push(t.check(k));
        }
        Self {
            torus: *t,
            idx,
            freq,
            check,
            lim,
            lookup,
        }
    }

    fn slot(lim: [i64; 3], k: [i64; 3]) -> usize {
        let side = lim.map(|l| (2 * l + 1) as usize);
        (k[0] + lim[0]) as usize
            + side[0] * ((k[1] + lim[1]) as usize + side[1] * (k[2] + lim[2]) as usize)
    }

    #[inline]
    pub fn pos(&self, k: [i64; 3]) -> Option<usize> {
        if (0..3).any(|d| k[d].abs() > self.lim[d]) {
            return None;
        }
        let p = self.lookup[Self::slot(self.lim, k)];
        (p != u32::MAX).then_some(p as usize)
    }

    pub fn len(&self) -> usize {
        self.idx.len()
    }
}

/// Per-mode decomposition `V̂(k) = Σ_a U^a e^a(k)` of one input, with the
/// frequency `ω^a(k)` of each piece. Degenerate modes form a single piece.
#[derive(Clone, Debug)]
pub(crate) struct Pieces {
    v: Vec<[[C64; 4]; 3]>,
    om: Vec<[f64; 3]>,
    len: Vec<u8>,
}

impl Pieces {
    pub fn new(band: &Band, frame: &WaveFrame, f: &SpectralField) -> Result<Self> {
        if *f.torus() != band.torus || *frame.torus() != band.torus {
            return Err(Error::TorusMismatch);
        }
        let n = band.len();
        let mut out = Self {
            v: vec![[[ZERO; 4]; 3]; n],
            om: vec![[0.0; 3]; n],
            len: vec![0; n],
        };
        for (p, &i) in band.idx.iter().enumerate() {
            let x = f.coeffs()[i];
            if x.iter().all(|z| *z == ZERO) {
                continue;
            }
            let e = frame.entry(i);
            if e.degenerate {
                out.v[p][0] = x;
                out.len[p] = 1;
                continue;
            }
            let u = e.coords(&x);
            let mut l = 0;
            for a in 0..3 {
                if u[a] == ZERO {
                    continue;
                }
                out.v[p][l] = e.basis[a].map(|z| z * u[a]);
                out.om[p][l] = [0.0, e.omega, -e.omega][a];
                l += 1;
            }
            out.len[p] = l as u8;
        }
        Ok(out)
    }
}

/// Triad weight as a function of `ω^{a,b,c}`; zero drops the triad.
pub(crate) trait Weight {
    fn admit(&self, _k: [i64; 3], _n: [i64; 3]) -> bool {
        true
    }
    fn weight(&self, s: f64) -> C64;
}

/// Exactly resonant triads, `|ω^{a,b,c}| < tol`.
pub(crate) struct Resonant(pub f64);

impl Weight for Resonant {
    fn weight(&self, s: f64) -> C64 {
        if s.abs() < self.0 {
            C64::new(1.0, 0.0)
        } else {
            ZERO
        }
    }
}

/// `e^{−iτω^{a,b,c}}`, optionally restricted to `|ω^{a,b,c}| ≥ tol`.
pub(crate) struct Phase {
    pub tau: f64,
    pub skip_below: f64,
}

impl Weight for Phase {
    fn weight(&self, s: f64) -> C64 {
        if s.abs() < self.skip_below {
            ZERO
        } else {
            cis(-self.tau * s)
        }
    }
}

/// `e^{−iτω^{a,b,c}} / (−iω^{a,b,c})` over `|ω^{a,b,c}| ≥ tol`.
pub(crate) struct Divided {
    pub tau: f64,
    pub tol: f64,
}

impl Weight for Divided {
    fn weight(&self, s: f64) -> C64 {
        if s.abs() < self.tol {
            ZERO
        } else {
            cis(-self.tau * s) * I / s
        }
    }
}

/// Restrict another weight to `|k|∞ ≤ N` and `|n|∞ ≤ N`.
pub(crate) struct Truncated<W>(pub W, pub i64);

impl<W: Weight> Weight for Truncated<W> {
    fn admit(&self, k: [i64; 3], n: [i64; 3]) -> bool {
        within(k, self.1) && within(n, self.1) && self.0.admit(k, n)
    }
    fn weight(&self, s: f64) -> C64 {
        self.0.weight(s)
    }
}

#[inline]
pub(crate) fn within(k: [i64; 3], n: i64) -> bool {
    k.iter().all(|x| x.abs() <= n)
}

/// `P Σ w (A·∇B)`, projected per frame slot at nondegenerate outputs.
pub(crate) fn gather<W: Weight>(
    band: &Band,
    frame: &WaveFrame,
    a: &Pieces,
    b: &Pieces,
    w: &W,
) -> SpectralField {
    let t = band.torus;
    let mut out = SpectralField::zeros(t);
    let coeffs = out.coeffs_mut();
    for (pn, &n) in band.freq.iter().enumerate() {
        let en = frame.entry(band.idx[pn]);
        let om_n = [0.0, en.omega, -en.omega];
        let mut acc = [ZERO; 4];
        for (pk, &k) in band.freq.iter().enumerate() {
            let la = a.len[pk] as usize;
            if la == 0 || !w.admit(k, n) {
                continue;
            }
            let m = [n[0] - k[0], n[1] - k[1], n[2] - k[2]];
            let Some(pm) = band.pos(m) else { continue };
            let lb = b.len[pm] as usize;
            if lb == 0 {
                continue;
            }
            let mc = band.check[pm];
            let mut alpha = [ZERO; 3];
            for (ai, al) in alpha.iter_mut().enumerate().take(la) {
                let v = &a.v[pk][ai];
                *al = (v[0] * mc[0] + v[1] * mc[1] + v[2] * mc[2]) * I;
            }
            if en.degenerate {
                for bi in 0..lb {
                    let mut coef = ZERO;
                    for ai in 0..la {
                        let wv = w.weight(a.om[pk][ai] + b.om[pm][bi]);
                        if wv != ZERO {
                            coef += wv * alpha[ai];
                        }
                    }
                    if coef != ZERO {
                        for j in 0..4 {
                            acc[j] += coef * b.v[pm][bi][j];
                        }
                    }
                }
                continue;
            }
            for bi in 0..lb {
                let bv = &b.v[pm][bi];
                for c in 0..3 {
                    let e = &en.basis[c];
                    let beta = bv[0] * e[0].conj()
                        + bv[1] * e[1].conj()
                        + bv[2] * e[2].conj()
                        + bv[3] * e[3].conj();
                    if beta == ZERO {
                        continue;
                    }
                    for ai in 0..la {
                        let wv = w.weight(a.om[pk][ai] + b.om[pm][bi] - om_n[c]);
                        if wv != ZERO {
                            acc[c] += wv * alpha[ai] * beta;
                        }
                    }
                }
            }
        }
        coeffs[band.idx[pn]] = if en.degenerate {
            leray_mode(band.check[pn], acc)
        } else {
            en.reconstruct(&[acc[0], acc[1], acc[2], ZERO])
        };
    }
    out
}

/// `½ [gather(A, B) + gather(B, A)]`.
pub(crate) fn symmetric<W: Weight>(
    band: &Band,
    frame: &WaveFrame,
    a: &SpectralField,
    b: &SpectralField,
    w: &W,
) -> Result<SpectralField> {
    let pa = Pieces::new(band, frame, a)?;
    if a == b {
        return Ok(gather(band, frame, &pa, &pa, w));
    }
    let pb = Pieces::new(band, frame, b)?;
    let x = gather(band, frame, &pa, &pb, w);
    let y = gather(band, frame, &pb, &pa, w);
    Ok(x.add(&y).scaled(0.5))
}

/// Smallest `|ω^{a,b,c}|` over admitted triads with `|ω^{a,b,c}| ≥ floor`
/// among the modes where both inputs are nonzero.
pub(crate) fn smallest_divisor<W: Weight>(
    band: &Band,
    frame: &WaveFrame,
    w: &W,
    floor: f64,
) -> Option<(f64, alloc::string::String)> {
    let mut best: Option<(f64, [i64; 3], [i64; 3], [usize; 3])> = None;
    for (pn, &n) in band.freq.iter().enumerate() {
        let en = frame.entry(band.idx[pn]);
        let om_n: &[f64] = if en.degenerate {
            &[0.0]
        } else {
            &[0.0, en.omega, -en.omega]
        };
        for (pk, &k) in band.freq.iter().enumerate() {
            if !w.admit(k, n) {
                continue;
            }
            let m = [n[0] - k[0], n[1] - k[1], n[2] - k[2]];
            let Some(pm) = band.pos(m) else { continue };
            let ek = frame.entry(band.idx[pk]);
            let em = frame.entry(band.idx[pm]);
            let ok: &[f64] = if ek.degenerate {
                &[0.0]
            } else {
                &[0.0, ek.omega, -ek.omega]
            };
            let om: &[f64] = if em.degenerate {
                &[0.0]
            } else {
                &[0.0, em.omega, -em.omega]
            };
            for (ia, x) in ok.iter().enumerate() {
                for (ib, y) in om.iter().enumerate() {
                    for (ic, z) in om_n.iter().enumerate() {
                        let s = (x + y - z).abs();
                        if s >= floor && best.map_or(true, |b| s < b.0) {
                            best = Some((s, k, m, [ia, ib, ic]));
                        }
                    }
                }
            }
        }
    }
    best.map(|(s, k, m, l)| {
        let sym = |i: usize| ['0', '+', '-'][i];
        (
            s,
            alloc::format!(
                "k = {:?}, m = {:?}, labels ({}{}{})",
                k,
                m,
                sym(l[0]),
                sym(l[1]),
                sym(l[2])
            ),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::nonlinear::symmetric_transport;
    use crate::spectral_torus::test_support::random_vector;
    use crate::spectral_torus::NaiveDft;

    struct All;
    impl Weight for All {
        fn weight(&self, _s: f64) -> C64 {
            C64::new(1.0, 0.0)
        }
    }

    #[test]
    fn unit_weight_matches_pseudospectral_product() {
        let t = TorusSpec::new([1.0, 1.3, 0.7], [8, 8, 6]).unwrap();
        let frame = WaveFrame::new(t);
        let band = Band::new(&t);
        let tr = NaiveDft::for_torus(&t);
        let mut a = random_vector(&t, 1, true);
        let mut b = random_vector(&t, 2, true);
        a.truncate_to_band();
        b.truncate_to_band();
        let g = symmetric(&band, &frame, &a, &b, &All).unwrap();
        let p = symmetric_transport(&a, &b, true, &tr).unwrap();
        assert!(g.max_abs_diff(&p) < 1e-14, "{}", g.max_abs_diff(&p));
    }

    #[test]
    fn zero_phase_equals_unit_weight() {
        let t = TorusSpec::new([1.0, 1.1, 0.9], [8, 8, 6]).unwrap();
        let frame = WaveFrame::new(t);
        let band = Band::new(&t);
        let a = random_vector(&t, 5, true);
        let x = symmetric(
            &band,
            &frame,
            &a,
            &a,
            &Phase {
                tau: 0.0,
                skip_below: 0.0,
            },
        )
        .unwrap();
        let y = symmetric(&band, &frame, &a, &a, &All).unwrap();
        assert!(x.max_abs_diff(&y) < 1e-15);
        assert!(x.hermitian_defect() < 1e-15);
    }
}
