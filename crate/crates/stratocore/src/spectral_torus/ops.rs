//! Fourier multipliers: Leray projector, divergence, curls, gradients and
//! (inverse) Laplacians. Derivatives follow `∂ⱼ ↔ i ňⱼ`.

use alloc::format;

use super::field::{ScalarField, Spectral, SpectralField};
use super::torus::{norm2, norm2_h};
use crate::{Error, Result, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Apply `P_n = δᵢⱼ − ňᵢňⱼ/|ň|²` to one velocity triple; θ untouched.
#[inline]
pub fn leray_mode(kc: [f64; 3], v: [C64; 4]) -> [C64; 4] {
    let k2 = norm2(kc);
    if k2 == 0.0 {
        return v;
    }
    let dot = v[0] * kc[0] + v[1] * kc[1] + v[2] * kc[2];
    let s = dot / k2;
    [v[0] - s * kc[0], v[1] - s * kc[1], v[2] - s * kc[2], v[3]]
}

/// Leray projection of the velocity components.
pub fn leray_project(f: &SpectralField) -> SpectralField {
    let t = *f.torus();
    let mut out = f.clone();
    for (idx, v) in out.coeffs_mut().iter_mut().enumerate() {
        *v = leray_mode(t.check(t.freq(idx)), *v);
    }
    out
}

/// `div v ↔ i Σⱼ ňⱼ v̂ʲ`.
pub fn divergence(f: &SpectralField) -> ScalarField {
    let t = *f.torus();
    let mut out = ScalarField::zeros(t);
    for (idx, (o, v)) in out.coeffs_mut().iter_mut().zip(f.coeffs()).enumerate() {
        let kc = t.check(t.freq(idx));
        *o = I * (v[0] * kc[0] + v[1] * kc[1] + v[2] * kc[2]);
    }
    out
}

/// Largest `|Σⱼ ňⱼ v̂ʲ(n)|` over the grid.
pub fn divergence_residual(f: &SpectralField) -> f64 {
    divergence(f).max_abs()
}

/// Horizontal vorticity `curl_h u = −∂₂u¹ + ∂₁u²`.
pub fn curl_h(f: &SpectralField) -> ScalarField {
    let t = *f.torus();
    let mut out = ScalarField::zeros(t);
    for (idx, (o, v)) in out.coeffs_mut().iter_mut().zip(f.coeffs()).enumerate() {
        let kc = t.check(t.freq(idx));
        *o = I * (v[1] * kc[0] - v[0] * kc[1]);
    }
    out
}

fn vector_from_scalar<F: Fn([f64; 3]) -> [C64; 3]>(s: &ScalarField, sym: F) -> SpectralField {
    let t = *s.torus();
    let mut out = SpectralField::zeros(t);
    for (idx, (o, z)) in out.coeffs_mut().iter_mut().zip(s.coeffs()).enumerate() {
        let m = sym(t.check(t.freq(idx)));
        *o = [m[0] * z, m[1] * z, m[2] * z, C64::new(0.0, 0.0)];
    }
    out
}

/// `∇φ` placed in the velocity slots, θ = 0.
pub fn gradient(s: &ScalarField) -> SpectralField {
    vector_from_scalar(s, |k| [I * k[0], I * k[1], I * k[2]])
}

/// `∇_h φ = (∂₁φ, ∂₂φ, 0)`.
pub fn grad_h(s: &ScalarField) -> SpectralField {
    vector_from_scalar(s, |k| [I * k[0], I * k[1], C64::new(0.0, 0.0)])
}

/// `∇_h^⊥ φ = (−∂₂φ, ∂₁φ, 0)`.
pub fn perp_grad_h(s: &ScalarField) -> SpectralField {
    vector_from_scalar(s, |k| [-I * k[1], I * k[0], C64::new(0.0, 0.0)])
}

/// `Δ ↔ −|ň|²`.
pub fn laplacian<F: Spectral>(f: &F) -> F {
    let t = *f.torus();
    f.apply_real_multiplier(|k| -norm2(t.check(k)))
}

/// `Δ_h ↔ −|ň_h|²`.
pub fn lap_h<F: Spectral>(f: &F) -> F {
    let t = *f.torus();
    f.apply_real_multiplier(|k| -norm2_h(t.check(k)))
}

fn require_zero_horizontal_average<F: Spectral>(f: &F, op: &str) -> Result<()> {
    let t = *f.torus();
    for idx in 0..t.len() {
        let k = t.freq(idx);
        if k[0] == 0 && k[1] == 0 && f.mode_energy(idx) != 0.0 {
            return Err(Error::Domain(format!(
                "{} needs zero coefficients at n_h = 0, found one at ({}, {}, {})",
                op, k[0], k[1], k[2]
            )));
        }
    }
    Ok(())
}

/// `Δ_h⁻¹ ↔ −1/|ň_h|²`; domain error when a `n_h = 0` mode is present.
pub fn inv_lap_h<F: Spectral>(f: &F) -> Result<F> {
    require_zero_horizontal_average(f, "inverse horizontal Laplacian")?;
    let t = *f.torus();
    Ok(f.apply_real_multiplier(|k| {
        let h = norm2_h(t.check(k));
        if h == 0.0 {
            0.0
        } else {
            -1.0 / h
        }
    }))
}

/// `Δ_h^{−1/2} ↔ 1/|ň_h|` (the positive root `|D_h|⁻¹`).
pub fn inv_sqrt_lap_h<F: Spectral>(f: &F) -> Result<F> {
    require_zero_horizontal_average(f, "inverse square-root horizontal Laplacian")?;
    let t = *f.torus();
    Ok(f.apply_real_multiplier(|k| {
        let h = norm2_h(t.check(k));
        if h == 0.0 {
            0.0
        } else {
            1.0 / crate::math::sqrt(h)
        }
    }))
}

/// Planar Biot-Savart law `ū^h = ∇_h^⊥ Δ_h⁻¹ ω`, applied layer by layer.
pub fn biot_savart(omega: &ScalarField) -> Result<SpectralField> {
    Ok(perp_grad_h(&inv_lap_h(omega)?))
}
