//! Diagonalization of the penalized operator `PA`.
//!
//! `A` couples the vertical velocity and the buoyancy: `A V = (0, 0, θ, −v³)`,
//! and `PA = P_n A` with `P_n` the Leray symbol. At each `n` with `n_h ≠ 0`
//! the solenoidal subspace splits into the kernel `e⁰` and two waves
//! `PA e^± = ±iω e^±` with `ω = |ň_h|/|ň|`. Frames here also carry the unit
//! gradient direction `g = (ň/|ň|, 0)`, so every frame is an orthonormal
//! basis of `C⁴` and coordinate changes never lose information.
//!
//! Frequencies with `n_h = 0` are degenerate: their frame is the standard
//! basis and they neither rotate nor split.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{cis, sqrt};
use crate::spectral_torus::{leray_mode, norm2, norm2_h, Spectral, SpectralField, TorusSpec};
use crate::{Error, Result, C64};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Slot of each frame vector.
pub const KERNEL: usize = 0;
pub const PLUS: usize = 1;
pub const MINUS: usize = 2;
pub const GRADIENT: usize = 3;

/// Mode label `0`, `+` or `−`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Zero,
    Plus,
    Minus,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::Zero, Label::Plus, Label::Minus];
    pub const OSC: [Label; 2] = [Label::Plus, Label::Minus];

    pub fn slot(self) -> usize {
        match self {
            Label::Zero => KERNEL,
            Label::Plus => PLUS,
            Label::Minus => MINUS,
        }
    }

    /// `+1`, `−1` or `0`.
    pub fn sign(self) -> f64 {
        match self {
            Label::Zero => 0.0,
            Label::Plus => 1.0,
            Label::Minus => -1.0,
        }
    }

    pub fn conj(self) -> Label {
        match self {
            Label::Zero => Label::Zero,
            Label::Plus => Label::Minus,
            Label::Minus => Label::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Label::Zero => '0',
            Label::Plus => '+',
            Label::Minus => '-',
        }
    }

    pub fn parse(c: char) -> Option<Label> {
        match c {
            '0' => Some(Label::Zero),
            '+' | 'p' => Some(Label::Plus),
            '-' | 'm' => Some(Label::Minus),
            _ => None,
        }
    }
}

/// Frame at a single frequency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameEntry {
    pub n: [i64; 3],
    pub degenerate: bool,
    /// `ω(n) = |ň_h|/|ň|`; zero at degenerate frequencies.
    pub omega: f64,
    /// `[e⁰, e⁺, e⁻, g]`, or the standard basis when degenerate.
    pub basis: [[C64; 4]; 4],
}

impl FrameEntry {
    pub fn e0(&self) -> [C64; 4] {
        self.basis[KERNEL]
    }

    pub fn eplus(&self) -> [C64; 4] {
        self.basis[PLUS]
    }

    pub fn eminus(&self) -> [C64; 4] {
        self.basis[MINUS]
    }

    pub fn vector(&self, l: Label) -> [C64; 4] {
        self.basis[l.slot()]
    }

    /// `ω^a(n)`: `±ω` for the wave labels, 0 for the kernel.
    pub fn omega_of(&self, l: Label) -> f64 {
        l.sign() * self.omega
    }

    /// Coordinates `(V | e^a)` in the frame.
    pub fn coords(&self, v: &[C64; 4]) -> [C64; 4] {
        [0, 1, 2, 3].map(|a| inner4(v, &self.basis[a]))
    }

    /// `Σ_a U^a e^a`.
    pub fn reconstruct(&self, u: &[C64; 4]) -> [C64; 4] {
        let mut out = [ZERO; 4];
        for a in 0..4 {
            for (o, e) in out.iter_mut().zip(self.basis[a].iter()) {
                *o += u[a] * e;
            }
        }
        out
    }
}

/// `Σ_j x_j conj(y_j)`.
#[inline]
pub fn inner4(x: &[C64; 4], y: &[C64; 4]) -> C64 {
    x[0] * y[0].conj() + x[1] * y[1].conj() + x[2] * y[2].conj() + x[3] * y[3].conj()
}

/// Closed-form frame at `n`. At `n = 0` returns the standard basis.
pub fn build_frame(torus: &TorusSpec, n: [i64; 3]) -> FrameEntry {
    let kc = torus.check(n);
    let h2 = norm2_h(kc);
    let k2 = norm2(kc);
    if h2 == 0.0 {
        let mut basis = [[ZERO; 4]; 4];
        for (i, b) in basis.iter_mut().enumerate() {
            b[i] = ONE;
        }
        return FrameEntry {
            n,
            degenerate: true,
            omega: 0.0,
            basis,
        };
    }
    let h = sqrt(h2);
    let k = sqrt(k2);
    let omega = h / k;
    let r = |x: f64| C64::new(x, 0.0);
    let e0 = [r(-kc[1] / h), r(kc[0] / h), ZERO, ZERO];
    let w = [kc[0] * kc[2] / (h * k), kc[1] * kc[2] / (h * k), -h / k];
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let ep = [
        C64::new(0.0, s * w[0]),
        C64::new(0.0, s * w[1]),
        C64::new(0.0, s * w[2]),
        r(s),
    ];
    let em = ep.map(|z| z.conj());
    let g = [r(kc[0] / k), r(kc[1] / k), r(kc[2] / k), ZERO];
    FrameEntry {
        n,
        degenerate: false,
        omega,
        basis: [e0, ep, em, g],
    }
}

/// Frames for every stored frequency of a grid, in storage order.
#[derive(Clone, Debug)]
pub struct WaveFrame {
    torus: TorusSpec,
    entries: Vec<FrameEntry>,
}

impl WaveFrame {
    pub fn new(torus: TorusSpec) -> Self {
        let entries = (0..torus.len())
            .map(|i| build_frame(&torus, torus.freq(i)))
            .collect();
        Self { torus, entries }
    }

    pub fn torus(&self) -> &TorusSpec {
        &self.torus
    }

    pub fn entry(&self, idx: usize) -> &FrameEntry {
        &self.entries[idx]
    }

    pub fn entries(&self) -> &[FrameEntry] {
        &self.entries
    }

    pub fn at(&self, n: [i64; 3]) -> Option<&FrameEntry> {
        self.torus.index(n).map(|i| &self.entries[i])
    }

    pub fn omega(&self, idx: usize) -> f64 {
        self.entries[idx].omega
    }

    fn check(&self, f: &SpectralField) -> Result<()> {
        if *f.torus() != self.torus {
            return Err(Error::TorusMismatch);
        }
        Ok(())
    }

    /// Frame coordinates of a field.
    ///
    /// Fails with [`Error::Residual`] when the gradient slot carries more than
    /// `1e−8` of the field energy (the field is not solenoidal).
    pub fn to_eigen(&self, f: &SpectralField) -> Result<ModeCoordinates> {
        let c = self.to_eigen_unchecked(f)?;
        let total = f.energy();
        let residual = c.gradient_energy();
        if residual > 1e-8 * total.max(f64::MIN_POSITIVE) {
            return Err(Error::Residual {
                energy: residual / total,
            });
        }
        Ok(c)
    }

    /// Frame coordinates without the solenoidal check.
    pub fn to_eigen_unchecked(&self, f: &SpectralField) -> Result<ModeCoordinates> {
        self.check(f)?;
        let coords = f
            .coeffs()
            .iter()
            .zip(self.entries.iter())
            .map(|(v, e)| e.coords(v))
            .collect();
        Ok(ModeCoordinates {
            torus: self.torus,
            coords,
        })
    }

    pub fn from_eigen(&self, c: &ModeCoordinates) -> Result<SpectralField> {
        if c.torus != self.torus {
            return Err(Error::TorusMismatch);
        }
        let coeffs = c
            .coords
            .iter()
            .zip(self.entries.iter())
            .map(|(u, e)| e.reconstruct(u))
            .collect();
        SpectralField::from_coeffs(self.torus, coeffs)
    }

    /// Keep only the frame slots selected by `keep` at nondegenerate modes;
    /// degenerate modes are kept when `keep_degenerate`.
    fn filter(
        &self,
        f: &SpectralField,
        keep: [bool; 4],
        keep_degenerate: bool,
    ) -> Result<SpectralField> {
        self.check(f)?;
        let mut out = f.clone();
        for (v, e) in out.coeffs_mut().iter_mut().zip(self.entries.iter()) {
            if e.degenerate {
                if !keep_degenerate {
                    *v = [ZERO; 4];
                }
                continue;
            }
            let mut u = e.coords(v);
            for a in 0..4 {
                if !keep[a] {
                    u[a] = ZERO;
                }
            }
            *v = e.reconstruct(&u);
        }
        Ok(out)
    }

    /// Orthogonal projection onto `span{e⁰}` at nondegenerate frequencies.
    pub fn project_bar(&self, f: &SpectralField) -> Result<SpectralField> {
        self.filter(f, [true, false, false, false], false)
    }

    /// Orthogonal projection onto `span{e⁺, e⁻}` at nondegenerate frequencies.
    pub fn project_osc(&self, f: &SpectralField) -> Result<SpectralField> {
        self.filter(f, [false, true, true, false], false)
    }

    /// The `n_h = 0` modes, untouched.
    pub fn project_degenerate(&self, f: &SpectralField) -> Result<SpectralField> {
        self.filter(f, [false; 4], true)
    }

    /// Gradient part at nondegenerate frequencies; zero for solenoidal fields.
    pub fn project_gradient(&self, f: &SpectralField) -> Result<SpectralField> {
        self.filter(f, [false, false, false, true], false)
    }

    /// `L(τ) = e^{τ PA}`: `U^± ↦ e^{±iτω} U^±`, everything else fixed.
    pub fn propagate(&self, f: &SpectralField, tau: f64) -> Result<SpectralField> {
        self.check(f)?;
        let mut out = f.clone();
        for (v, e) in out.coeffs_mut().iter_mut().zip(self.entries.iter()) {
            if e.degenerate || tau == 0.0 {
                continue;
            }
            let p = inner4(v, &e.basis[PLUS]);
            let m = inner4(v, &e.basis[MINUS]);
            let rot = cis(tau * e.omega);
            let dp = p * (rot - ONE);
            let dm = m * (rot.conj() - ONE);
            for j in 0..4 {
                v[j] += dp * e.basis[PLUS][j] + dm * e.basis[MINUS][j];
            }
        }
        Ok(out)
    }
}

/// Mode coordinates `U^a_n = (V̂(n) | e^a(n))` in storage order.
///
/// Slots follow [`KERNEL`], [`PLUS`], [`MINUS`], [`GRADIENT`] at nondegenerate
/// frequencies and hold the raw components `(v¹, v², v³, θ)` at degenerate
/// ones.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeCoordinates {
    pub torus: TorusSpec,
    pub coords: Vec<[C64; 4]>,
}

impl ModeCoordinates {
    pub fn zeros(torus: TorusSpec) -> Self {
        Self {
            torus,
            coords: vec![[ZERO; 4]; torus.len()],
        }
    }

    fn gradient_energy(&self) -> f64 {
        (0..self.coords.len())
            .filter(|&i| {
                let k = self.torus.freq(i);
                k[0] != 0 || k[1] != 0
            })
            .map(|i| self.coords[i][GRADIENT].norm_sqr())
            .sum()
    }
}

/// `PA V` per frequency.
pub fn penalized_apply(f: &SpectralField) -> SpectralField {
    let t = *f.torus();
    let mut out = f.clone();
    for (idx, v) in out.coeffs_mut().iter_mut().enumerate() {
        let kc = t.check(t.freq(idx));
        *v = leray_mode(kc, [ZERO, ZERO, v[3], -v[2]]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_torus::test_support::random_vector;
    use crate::spectral_torus::{divergence_residual, leray_project, sobolev_norm};

    fn apply_mode(t: &TorusSpec, n: [i64; 3], v: [C64; 4]) -> [C64; 4] {
        leray_mode(t.check(n), [ZERO, ZERO, v[3], -v[2]])
    }

    #[test]
    fn frame_examples() {
        let t = TorusSpec::cube(8).unwrap();
        let e = build_frame(&t, [1, 0, 1]);
        assert!((e.omega - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        for z in [-3, 0, 2] {
            let e = build_frame(&t, [1, 0, z]);
            assert_eq!(e.e0(), [ZERO, ONE, ZERO, ZERO]);
        }
        let e = build_frame(&t, [1, 0, 0]);
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let expect_p = [ZERO, ZERO, C64::new(0.0, -s), C64::new(s, 0.0)];
        for j in 0..4 {
            assert!((e.eplus()[j] - expect_p[j]).norm() < 1e-16);
            assert!((e.eminus()[j] - expect_p[j].conj()).norm() < 1e-16);
        }
        assert!(build_frame(&t, [0, 0, 3]).degenerate);
    }

    #[test]
    fn eigenrelations_and_orthonormality() {
        let t = TorusSpec::new([1.3, 0.7, 2.1], [8, 8, 8]).unwrap();
        let f = WaveFrame::new(t);
        for e in f.entries().iter().filter(|e| !e.degenerate) {
            for (l, s) in [(PLUS, 1.0), (MINUS, -1.0)] {
                let v = e.basis[l];
                let pa = apply_mode(&t, e.n, v);
                for j in 0..4 {
                    assert!((pa[j] - C64::new(0.0, s * e.omega) * v[j]).norm() < 1e-14);
                }
            }
            assert!(apply_mode(&t, e.n, e.e0()).iter().all(|z| z.norm() < 1e-15));
            for a in 0..4 {
                for b in 0..4 {
                    let g = inner4(&e.basis[a], &e.basis[b]);
                    let want = if a == b { ONE } else { ZERO };
                    assert!((g - want).norm() < 1e-15);
                }
            }
            let kc = t.check(e.n);
            for a in 0..3 {
                let d = e.basis[a][0] * kc[0] + e.basis[a][1] * kc[1] + e.basis[a][2] * kc[2];
                assert!(d.norm() < 1e-14);
            }
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let t = TorusSpec::new([1.0, 1.5, 0.8], [8, 6, 6]).unwrap();
        let f = WaveFrame::new(t);
        let v = random_vector(&t, 3, true);
        let c = f.to_eigen(&v).unwrap();
        assert!(f.from_eigen(&c).unwrap().max_abs_diff(&v) < 1e-14);
        let e = *f.at([1, 0, 2]).unwrap();
        let mut single = SpectralField::zeros(t);
        single.set_mode([1, 0, 2], e.e0()).unwrap();
        let c = f.to_eigen(&single).unwrap();
        let u = c.coords[t.index([1, 0, 2]).unwrap()];
        assert!((u[0] - ONE).norm() < 1e-15 && u[1].norm() < 1e-15 && u[2].norm() < 1e-15);
        let raw = random_vector(&t, 4, false);
        assert!(matches!(f.to_eigen(&raw), Err(Error::Residual { .. })));
    }

    #[test]
    fn projections_split_energy() {
        let t = TorusSpec::new([1.0, 0.6, 1.4], [8, 8, 6]).unwrap();
        let f = WaveFrame::new(t);
        let v = random_vector(&t, 8, true);
        let b = f.project_bar(&v).unwrap();
        let o = f.project_osc(&v).unwrap();
        let d = f.project_degenerate(&v).unwrap();
        assert!((b.energy() + o.energy() + d.energy() - v.energy()).abs() < 1e-12 * v.energy());
        assert!(b.add(&o).add(&d).max_abs_diff(&v) < 1e-14);
        assert!(f.project_bar(&b).unwrap().max_abs_diff(&b) < 1e-15);
        assert!(b
            .coeffs()
            .iter()
            .all(|c| c[2].norm() < 1e-15 && c[3].norm() < 1e-15));
        assert!(b.inner(&o).norm() < 1e-14);
        assert!(divergence_residual(&o) < 1e-13);
    }

    #[test]
    fn propagator_properties() {
        let t = TorusSpec::new([1.0, 1.2, 0.9], [8, 8, 6]).unwrap();
        let f = WaveFrame::new(t);
        let v = random_vector(&t, 9, true);
        assert_eq!(f.propagate(&v, 0.0).unwrap(), v);
        let w = f.propagate(&f.propagate(&v, 2.7).unwrap(), -2.7).unwrap();
        assert!(w.max_abs_diff(&v) < 1e-14);
        let b = f.project_bar(&v).unwrap();
        assert!(f.propagate(&b, 3.3).unwrap().max_abs_diff(&b) < 1e-16);
        for s in [0.0, 0.7, 1.0, 2.0] {
            let a = sobolev_norm(&f.propagate(&v, 5.3).unwrap(), s);
            assert!((a - sobolev_norm(&v, s)).abs() < 1e-12 * a);
        }
        let e = *f.at([2, 1, 1]).unwrap();
        let mut single = SpectralField::zeros(t);
        single.set_mode([2, 1, 1], e.eplus()).unwrap();
        let turned = f
            .propagate(&single, 2.0 * core::f64::consts::PI / e.omega)
            .unwrap();
        assert!(turned.max_abs_diff(&single) < 1e-12);
        let r = f
            .propagate(&leray_project(&random_vector(&t, 10, false)), 1.1)
            .unwrap();
        let l = leray_project(&f.propagate(&random_vector(&t, 10, false), 1.1).unwrap());
        assert!(r.max_abs_diff(&l) < 1e-14);
    }

    #[test]
    fn skew_symmetry() {
        let t = TorusSpec::new([1.0, 0.9, 1.7], [8, 8, 8]).unwrap();
        let v = random_vector(&t, 12, true);
        let ip = penalized_apply(&v).inner(&v);
        assert!(ip.norm() < 1e-12 * v.energy());
        let f = WaveFrame::new(t);
        let b = f.project_bar(&v).unwrap();
        assert!(penalized_apply(&b).energy() < 1e-28);
    }
}
