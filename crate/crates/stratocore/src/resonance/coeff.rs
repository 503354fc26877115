//! Interaction coefficients and the algebraic cancellations of the limit forms.

use alloc::format;
use alloc::vec::Vec;

use crate::spectral_torus::{leray_mode, Spectral, SpectralField, TorusSpec};
use crate::wave_basis::{build_frame, inner4, FrameEntry, Label, WaveFrame};
use crate::{Error, Result, C64};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

fn horizontal(k: [i64; 3]) -> bool {
    k[0] != 0 || k[1] != 0
}

/// `C^{a,b,c}_{k,m,n} = Σⱼ e^{a,j}(k) m̌ⱼ (e^b(m) | e^c(n))`.
///
/// For `(±, ∓, 0)` the value is real and the same for both sign orders; it is
/// `F₁F₂ / (2 |ǩ_h||ǩ||m̌_h||m̌||ň_h|)` with `F₁` and `F₂` the two factors of
/// [`coefficient_c_int`] taken at check frequencies.
pub fn coefficient_c(
    t: &TorusSpec,
    k: [i64; 3],
    m: [i64; 3],
    n: [i64; 3],
    labels: [Label; 3],
) -> Result<C64> {
    if (0..3).any(|i| k[i] + m[i] != n[i]) {
        return Err(Error::Constraint(format!(
            "k + m = n fails for k = {:?}, m = {:?}, n = {:?}",
            k, m, n
        )));
    }
    for v in [k, m, n] {
        if !horizontal(v) {
            return Err(Error::Degenerate(v));
        }
    }
    let (fk, fm, fn_) = (build_frame(t, k), build_frame(t, m), build_frame(t, n));
    let mc = t.check(m);
    let ea = fk.vector(labels[0]);
    let transport: C64 = (0..3).map(|j| ea[j] * mc[j]).sum();
    Ok(transport * inner4(&fm.vector(labels[1]), &fn_.vector(labels[2])))
}

/// Integer form of `C^{±,0}_{k,m,k+m}` on the unit torus: `−2 F₁ F₂` with
/// `F₁ = k₁k₃m₁ + k₂k₃m₂ − |k_h|²m₃` and
/// `F₂ = m₂m₃(k₁ + m₁) − m₁m₃(k₂ + m₂)`, normalization dropped.
///
/// Skew symmetric in `(k, m)` on the summation set `k₃²|m_h|² = m₃²|k_h|²`.
pub fn coefficient_c_int(k: [i64; 3], m: [i64; 3]) -> i128 {
    let [k1, k2, k3] = k.map(i128::from);
    let [m1, m2, m3] = m.map(i128::from);
    let f1 = k1 * k3 * m1 + k2 * k3 * m2 - (k1 * k1 + k2 * k2) * m3;
    let f2 = m2 * m3 * (k1 + m1) - m1 * m3 * (k2 + m2);
    -2 * f1 * f2
}

/// Label `a` component `(Û(k) | e^a(k)) e^a(k)`; at a degenerate frequency
/// only the kernel label carries the raw coefficient.
fn part(u: &SpectralField, e: &FrameEntry, k: [i64; 3], a: Label) -> [C64; 4] {
    let v = u.get(k);
    if e.degenerate {
        return if a == Label::Zero { v } else { [ZERO; 4] };
    }
    let ea = e.vector(a);
    let c = inner4(&v, &ea);
    ea.map(|z| c * z)
}

fn frame_at(frame: Option<&WaveFrame>, t: &TorusSpec, k: [i64; 3]) -> FrameEntry {
    frame
        .and_then(|f| f.at(k))
        .copied()
        .unwrap_or_else(|| build_frame(t, k))
}

/// `β(m_h, n₃)`: the four-term symmetrized `(±, ∓)` horizontal-average
/// contribution at vertical frequency `n₃/2`.
///
/// Only even `n₃` carry such terms; odd `n₃` returns zero.
pub fn beta_value(u: &SpectralField, m_h: [i64; 2], n3: i64) -> [C64; 2] {
    if n3 % 2 != 0 {
        return [ZERO; 2];
    }
    let t = *u.torus();
    let half = n3 / 2;
    let p = [m_h[0], m_h[1], half];
    let q = [-m_h[0], -m_h[1], half];
    let (ep, eq) = (build_frame(&t, p), build_frame(&t, q));
    let s = t.check([0, 0, half])[2];
    let mut out = [ZERO; 2];
    let mut add =
        |k: [i64; 3], ek: &FrameEntry, a: Label, m: [i64; 3], em: &FrameEntry, b: Label| {
            let x = part(u, ek, k, a)[2];
            let y = part(u, em, m, b);
            out[0] += s * x * y[0];
            out[1] += s * x * y[1];
        };
    use Label::{Minus, Plus};
    add(q, &eq, Plus, p, &ep, Minus);
    add(q, &eq, Minus, p, &ep, Plus);
    add(p, &ep, Plus, q, &eq, Minus);
    add(p, &ep, Minus, q, &eq, Plus);
    out
}

/// The resonant horizontal-average form: for each stored `n₃`, the sum over
/// `k + m = (0, 0, n₃)`, labels `(a, b)` with `|ω^a(k) + ω^b(m)| < tol`, of
/// `ň₃ U^{a,3}(k) Û^{b,h}(m)`. Returned as `(n₃, [first, second])` pairs in
/// increasing `n₃`.
pub fn underline_q(u: &SpectralField, frame: Option<&WaveFrame>, tol: f64) -> Vec<(i64, [C64; 2])> {
    let t = *u.torus();
    let h3 = (t.n[2] / 2) as i64;
    let mut out = Vec::new();
    for n3 in -(h3 - 1)..h3 {
        let n = [0, 0, n3];
        let s = t.check(n)[2];
        let mut acc = [ZERO; 2];
        for idx in 0..t.len() {
            let k = t.freq(idx);
            let m = [n[0] - k[0], n[1] - k[1], n[2] - k[2]];
            if t.index(m).is_none() {
                continue;
            }
            let (ek, em) = (frame_at(frame, &t, k), frame_at(frame, &t, m));
            for a in Label::ALL {
                if ek.degenerate && a != Label::Zero {
                    continue;
                }
                let x = part(u, &ek, k, a)[2];
                if x == ZERO {
                    continue;
                }
                for b in Label::ALL {
                    if em.degenerate && b != Label::Zero {
                        continue;
                    }
                    if (ek.omega_of(a) + em.omega_of(b)).abs() >= tol {
                        continue;
                    }
                    let y = part(u, &em, m, b);
                    acc[0] += s * x * y[0];
                    acc[1] += s * x * y[1];
                }
            }
        }
        out.push((n3, acc));
    }
    out
}

/// Largest oscillating component of `P_n Σ_{k+m=n} (Ū(k)·i m̌) Ū(m)` over
/// `n = (0, 0, n₃)`, with `Ū` the kernel part of `u`.
///
/// At `n_h = 0` the wave directions are the vertical velocity and the
/// buoyancy; the kernel part has neither, so the value is zero up to roundoff.
pub fn kernel_on_osc_defect(u: &SpectralField) -> Result<f64> {
    let t = *u.torus();
    let bar = WaveFrame::new(t).project_bar(u)?;
    let h3 = (t.n[2] / 2) as i64;
    let mut worst = 0.0f64;
    for n3 in -(h3 - 1)..h3 {
        if n3 == 0 {
            continue;
        }
        let n = [0, 0, n3];
        let mut acc = [ZERO; 4];
        for idx in 0..t.len() {
            let k = t.freq(idx);
            let m = [-k[0], -k[1], n3 - k[2]];
            if t.index(m).is_none() {
                continue;
            }
            let (vk, vm) = (bar.get(k), bar.get(m));
            let mc = t.check(m);
            let adv: C64 = (0..3).map(|j| vk[j] * C64::new(0.0, mc[j])).sum();
            for c in 0..4 {
                acc[c] += adv * vm[c];
            }
        }
        let p = leray_mode(t.check(n), acc);
        worst = worst.max(p[2].norm()).max(p[3].norm());
    }
    Ok(worst)
}
