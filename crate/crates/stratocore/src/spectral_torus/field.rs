use alloc::vec;
use alloc::vec::Vec;

use super::torus::TorusSpec;
use crate::{Error, Result, C64};

/// Component names of the unknown `V = (v¹, v², v³, θ)`.
pub const COMPONENTS: [&str; 4] = ["v1", "v2", "v3", "theta"];

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Common per-mode access shared by scalar and four-component spectral fields.
pub trait Spectral: Clone {
    fn torus(&self) -> &TorusSpec;
    /// `Σ_c |û_c(n)|²` at flat index `idx`.
    fn mode_energy(&self, idx: usize) -> f64;
    /// Multiply every component at `idx` by a real factor.
    fn scale_mode(&mut self, idx: usize, s: f64);
    fn ncomp(&self) -> usize;
    fn coeff(&self, idx: usize, c: usize) -> C64;

    /// Apply a real Fourier multiplier `m(k)` to every mode.
    fn apply_real_multiplier<F: Fn([i64; 3]) -> f64>(&self, m: F) -> Self {
        let mut out = self.clone();
        let t = *self.torus();
        for idx in 0..t.len() {
            out.scale_mode(idx, m(t.freq(idx)));
        }
        out
    }

    /// Coefficient `ℓ²` norm squared, summed in storage order.
    fn energy(&self) -> f64 {
        (0..self.torus().len()).map(|i| self.mode_energy(i)).sum()
    }
}

/// Four-component Fourier coefficient array of a real field on the torus.
///
/// Invariants kept by [`SpectralField::enforce`]: Hermitian symmetry
/// `û(−n) = conj(û(n))`, zero mean, and zero Nyquist slots.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    torus: TorusSpec,
    coeffs: Vec<[C64; 4]>,
}

impl SpectralField {
    pub fn zeros(torus: TorusSpec) -> Self {
        Self {
            torus,
            coeffs: vec![[ZERO; 4]; torus.len()],
        }
    }

    pub fn from_coeffs(torus: TorusSpec, coeffs: Vec<[C64; 4]>) -> Result<Self> {
        if coeffs.len() != torus.len() {
            return Err(Error::Constraint(alloc::format!(
                "expected {} coefficients, got {}",
                torus.len(),
                coeffs.len()
            )));
        }
        Ok(Self { torus, coeffs })
    }

    pub fn coeffs(&self) -> &[[C64; 4]] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [[C64; 4]] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<[C64; 4]> {
        self.coeffs
    }

    /// Coefficient at frequency `k`; zero outside the stored range.
    pub fn get(&self, k: [i64; 3]) -> [C64; 4] {
        self.torus
            .index(k)
            .map(|i| self.coeffs[i])
            .unwrap_or([ZERO; 4])
    }

    /// Set the coefficient at `k` and its Hermitian partner at `−k`.
    pub fn set_mode(&mut self, k: [i64; 3], v: [C64; 4]) -> Result<()> {
        let i = self.torus.index(k).ok_or_else(|| {
            Error::Constraint(alloc::format!("frequency {:?} outside the grid", k))
        })?;
        let j = self.torus.mirror(i);
        if i == j {
            self.coeffs[i] = v.map(|z| C64::new(z.re, 0.0));
        } else {
            self.coeffs[i] = v;
            self.coeffs[j] = v.map(|z| z.conj());
        }
        Ok(())
    }

    /// Restore the invariants: symmetrize, clear the mean and Nyquist slots.
    pub fn enforce(&mut self) {
        enforce_generic(
            &self.torus,
            &mut self.coeffs,
            |a: &[C64; 4], b: &[C64; 4]| [0, 1, 2, 3].map(|c| (a[c] + b[c].conj()) * 0.5),
        );
        self.coeffs[0] = [ZERO; 4];
    }

    /// Largest `|û(n) − conj(û(−n))|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.coeffs.len() {
            let j = self.torus.mirror(i);
            for c in 0..4 {
                d = d.max(crate::math::cabs(
                    self.coeffs[i][c] - self.coeffs[j][c].conj(),
                ));
            }
        }
        d
    }

    /// Energy of the modes with `n_h = 0`.
    pub fn horizontal_average_energy(&self) -> f64 {
        (0..self.coeffs.len())
            .filter(|&i| {
                let k = self.torus.freq(i);
                k[0] == 0 && k[1] == 0
            })
            .map(|i| self.mode_energy(i))
            .sum()
    }

    pub fn remove_horizontal_average(&mut self) {
        for i in 0..self.coeffs.len() {
            let k = self.torus.freq(i);
            if k[0] == 0 && k[1] == 0 {
                self.coeffs[i] = [ZERO; 4];
            }
        }
    }

    /// Zero every mode outside the two-thirds band.
    pub fn truncate_to_band(&mut self) {
        for i in 0..self.coeffs.len() {
            if !self.torus.in_band(self.torus.freq(i)) {
                self.coeffs[i] = [ZERO; 4];
            }
        }
    }

    /// Coefficient inner product `Σ_n Σ_c a_c(n) conj(b_c(n))`.
    pub fn inner(&self, other: &Self) -> C64 {
        let mut s = ZERO;
        for (a, b) in self.coeffs.iter().zip(other.coeffs.iter()) {
            for c in 0..4 {
                s += a[c] * b[c].conj();
            }
        }
        s
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.coeffs
            .iter_mut()
            .for_each(|v| v.iter_mut().for_each(|z| *z *= s));
        out
    }

    /// `self + s · other`.
    pub fn axpy(&self, s: C64, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(s, other);
        out
    }

    pub fn add_scaled(&mut self, s: C64, other: &Self) {
        for (a, b) in self.coeffs.iter_mut().zip(other.coeffs.iter()) {
            for c in 0..4 {
                a[c] += s * b[c];
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(C64::new(-1.0, 0.0), other)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(C64::new(1.0, 0.0), other)
    }

    /// Largest componentwise coefficient difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for (a, b) in self.coeffs.iter().zip(other.coeffs.iter()) {
            for c in 0..4 {
                d = d.max(crate::math::cabs(a[c] - b[c]));
            }
        }
        d
    }

    /// Single component as a scalar field.
    pub fn component(&self, c: usize) -> ScalarField {
        ScalarField {
            torus: self.torus,
            coeffs: self.coeffs.iter().map(|v| v[c]).collect(),
        }
    }

    pub fn set_component(&mut self, c: usize, s: &ScalarField) {
        for (v, z) in self.coeffs.iter_mut().zip(s.coeffs.iter()) {
            v[c] = *z;
        }
    }

    /// Assemble from four scalar components.
    pub fn from_components(parts: [&ScalarField; 4]) -> Self {
        let torus = parts[0].torus;
        let coeffs = (0..torus.len())
            .map(|i| {
                [
                    parts[0].coeffs[i],
                    parts[1].coeffs[i],
                    parts[2].coeffs[i],
                    parts[3].coeffs[i],
                ]
            })
            .collect();
        Self { torus, coeffs }
    }
}

impl Spectral for SpectralField {
    fn torus(&self) -> &TorusSpec {
        &self.torus
    }

    fn mode_energy(&self, idx: usize) -> f64 {
        self.coeffs[idx].iter().map(|z| z.norm_sqr()).sum()
    }

    fn scale_mode(&mut self, idx: usize, s: f64) {
        self.coeffs[idx].iter_mut().for_each(|z| *z *= s);
    }

    fn ncomp(&self) -> usize {
        4
    }

    fn coeff(&self, idx: usize, c: usize) -> C64 {
        self.coeffs[idx][c]
    }
}

/// Fourier coefficients of a real scalar field.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    torus: TorusSpec,
    coeffs: Vec<C64>,
}

impl ScalarField {
    pub fn zeros(torus: TorusSpec) -> Self {
        Self {
            torus,
            coeffs: vec![ZERO; torus.len()],
        }
    }

    pub fn from_coeffs(torus: TorusSpec, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != torus.len() {
            return Err(Error::Constraint(alloc::format!(
                "expected {} coefficients, got {}",
                torus.len(),
                coeffs.len()
            )));
        }
        Ok(Self { torus, coeffs })
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [C64] {
        &mut self.coeffs
    }

    pub fn get(&self, k: [i64; 3]) -> C64 {
        self.torus.index(k).map(|i| self.coeffs[i]).unwrap_or(ZERO)
    }

    pub fn set_mode(&mut self, k: [i64; 3], v: C64) -> Result<()> {
        let i = self.torus.index(k).ok_or_else(|| {
            Error::Constraint(alloc::format!("frequency {:?} outside the grid", k))
        })?;
        let j = self.torus.mirror(i);
        if i == j {
            self.coeffs[i] = C64::new(v.re, 0.0);
        } else {
            self.coeffs[i] = v;
            self.coeffs[j] = v.conj();
        }
        Ok(())
    }

    /// Symmetrize and clear Nyquist slots; the mean is left untouched.
    pub fn enforce(&mut self) {
        enforce_generic(&self.torus, &mut self.coeffs, |a: &C64, b: &C64| {
            (*a + b.conj()) * 0.5
        });
    }

    pub fn hermitian_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.coeffs.len() {
            let j = self.torus.mirror(i);
            d = d.max(crate::math::cabs(self.coeffs[i] - self.coeffs[j].conj()));
        }
        d
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| crate::math::cabs(a - b))
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            torus: self.torus,
            coeffs: self.coeffs.iter().map(|z| z * s).collect(),
        }
    }

    pub fn truncate_to_band(&mut self) {
        for i in 0..self.coeffs.len() {
            if !self.torus.in_band(self.torus.freq(i)) {
                self.coeffs[i] = ZERO;
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|z| crate::math::cabs(*z))
            .fold(0.0, f64::max)
    }
}

impl Spectral for ScalarField {
    fn torus(&self) -> &TorusSpec {
        &self.torus
    }

    fn mode_energy(&self, idx: usize) -> f64 {
        self.coeffs[idx].norm_sqr()
    }

    fn scale_mode(&mut self, idx: usize, s: f64) {
        self.coeffs[idx] *= s;
    }

    fn ncomp(&self) -> usize {
        1
    }

    fn coeff(&self, idx: usize, _c: usize) -> C64 {
        self.coeffs[idx]
    }
}

fn enforce_generic<T: Copy + Default, F: Fn(&T, &T) -> T>(
    torus: &TorusSpec,
    coeffs: &mut [T],
    sym: F,
) {
    for i in 0..coeffs.len() {
        if torus.is_nyquist(i) {
            coeffs[i] = T::default();
            continue;
        }
        let j = torus.mirror(i);
        if j >= i {
            let a = sym(&coeffs[i], &coeffs[j]);
            let b = sym(&coeffs[j], &coeffs[i]);
            coeffs[i] = a;
            coeffs[j] = b;
        }
    }
}

/// Real grid values of an `ncomp`-component field, component-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalField {
    torus: TorusSpec,
    ncomp: usize,
    values: Vec<f64>,
}

impl PhysicalField {
    pub fn zeros(torus: TorusSpec, ncomp: usize) -> Self {
        Self {
            torus,
            ncomp,
            values: vec![0.0; ncomp * torus.len()],
        }
    }

    pub fn from_values(torus: TorusSpec, ncomp: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != ncomp * torus.len() {
            return Err(Error::Constraint(alloc::format!(
                "expected {} values, got {}",
                ncomp * torus.len(),
                values.len()
            )));
        }
        Ok(Self {
            torus,
            ncomp,
            values,
        })
    }

    /// Sample `f(x, c)` at the grid points `xᵢ = 2π aᵢ jᵢ / Nᵢ`.
    pub fn from_fn<F: Fn([f64; 3], usize) -> f64>(torus: TorusSpec, ncomp: usize, f: F) -> Self {
        let mut out = Self::zeros(torus, ncomp);
        let len = torus.len();
        for idx in 0..len {
            let x = out.point(idx);
            for c in 0..ncomp {
                out.values[c * len + idx] = f(x, c);
            }
        }
        out
    }

    pub fn torus(&self) -> &TorusSpec {
        &self.torus
    }

    pub fn ncomp(&self) -> usize {
        self.ncomp
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn component(&self, c: usize) -> &[f64] {
        let len = self.torus.len();
        &self.values[c * len..(c + 1) * len]
    }

    /// Physical coordinates of grid point `idx`.
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let t = &self.torus;
        let i1 = idx % t.n[0];
        let r = idx / t.n[0];
        let i2 = r % t.n[1];
        let i3 = r / t.n[1];
        let tau = 2.0 * core::f64::consts::PI;
        [
            tau * t.a[0] * i1 as f64 / t.n[0] as f64,
            tau * t.a[1] * i2 as f64 / t.n[1] as f64,
            tau * t.a[2] * i3 as f64 / t.n[2] as f64,
        ]
    }

    /// Pointwise Euclidean magnitude across components.
    pub fn magnitude(&self) -> Vec<f64> {
        let len = self.torus.len();
        (0..len)
            .map(|i| {
                let s: f64 = (0..self.ncomp)
                    .map(|c| self.values[c * len + i] * self.values[c * len + i])
                    .sum();
                crate::math::sqrt(s)
            })
            .collect()
    }
}
