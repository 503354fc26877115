//! Pseudospectral transport `P(a·∇b)` in divergence form.

use alloc::vec;
use alloc::vec::Vec;

use crate::spectral_torus::{leray_mode, Spectral, SpectralField, Transform};
use crate::{Error, Result, C64};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

fn physical(f: &SpectralField, c: usize, dealias: bool, tr: &dyn Transform) -> Vec<f64> {
    let t = *f.torus();
    let mut buf: Vec<C64> = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if dealias && !t.in_band(t.freq(i)) {
                ZERO
            } else {
                v[c]
            }
        })
        .collect();
    tr.inverse(&mut buf);
    buf.into_iter().map(|z| z.re).collect()
}

/// `P ∇·(a ⊗ b) = P(a·∇b)` for solenoidal `a`.
///
/// Products are formed on the grid; with `dealias` both factors and the
/// result are cut to the two-thirds band, which makes the kept band exact.
pub fn transport(
    a: &SpectralField,
    b: &SpectralField,
    dealias: bool,
    tr: &dyn Transform,
) -> Result<SpectralField> {
    let t = *a.torus();
    if t != *b.torus() {
        return Err(Error::TorusMismatch);
    }
    if tr.dims() != t.n {
        return Err(Error::Constraint(alloc::format!(
            "transform dims {:?} do not match grid {:?}",
            tr.dims(),
            t.n
        )));
    }
    let av: Vec<Vec<f64>> = (0..3).map(|j| physical(a, j, dealias, tr)).collect();
    let bv: Vec<Vec<f64>> = (0..4).map(|c| physical(b, c, dealias, tr)).collect();
    let checks = t.check_table();
    let mut out = vec![[ZERO; 4]; t.len()];
    let mut buf = vec![ZERO; t.len()];
    for j in 0..3 {
        for c in 0..4 {
            for ((z, x), y) in buf.iter_mut().zip(av[j].iter()).zip(bv[c].iter()) {
                *z = C64::new(x * y, 0.0);
            }
            tr.forward(&mut buf);
            for (o, (z, kc)) in out.iter_mut().zip(buf.iter().zip(checks.iter())) {
                o[c] += C64::new(0.0, kc[j]) * z;
            }
        }
    }
    for (i, o) in out.iter_mut().enumerate() {
        let k = t.freq(i);
        if (dealias && !t.in_band(k)) || t.is_nyquist(i) || k == [0, 0, 0] {
            *o = [ZERO; 4];
        } else {
            *o = leray_mode(checks[i], *o);
        }
    }
    let mut f = SpectralField::from_coeffs(t, out)?;
    f.enforce();
    Ok(f)
}

/// `P(v·∇V)` for the state `V = (v, θ)`.
pub fn nonlinear_term(
    v: &SpectralField,
    dealias: bool,
    tr: &dyn Transform,
) -> Result<SpectralField> {
    transport(v, v, dealias, tr)
}

/// `½ [P(a·∇b) + P(b·∇a)]`.
pub fn symmetric_transport(
    a: &SpectralField,
    b: &SpectralField,
    dealias: bool,
    tr: &dyn Transform,
) -> Result<SpectralField> {
    let x = transport(a, b, dealias, tr)?;
    let y = transport(b, a, dealias, tr)?;
    Ok(x.add(&y).scaled(0.5))
}
