//! Exact per-frequency propagators of the linear part `−(1/ε) PA + D`.

use alloc::vec::Vec;

use crate::math::{cos, cosh, exp, sin, sinh, sqrt};
use crate::spectral_torus::{norm2, SpectralField};
use crate::wave_basis::{inner4, WaveFrame, KERNEL, MINUS, PLUS};
use crate::C64;

#[derive(Clone, Copy, Debug)]
enum Factor {
    Degenerate { velocity: f64, theta: f64 },
    Wave { kernel: f64, block: [[C64; 2]; 2] },
}

/// `e^{h(−PA/ε + D)}` on solenoidal fields, one factor per stored frequency.
///
/// In the frame `e⁰` decays at `ν|ň|²`; the pair `(U⁺, U⁻)` evolves under
/// `−s I + [[−iw, −d], [−d, iw]]` with `w = ω/ε`, `s = ½(ν+ν′)|ň|²` and
/// `d = ½(ν′−ν)|ň|²`. `epsilon = ∞` drops the skew part.
#[derive(Clone, Debug)]
pub struct LinearPropagator {
    factors: Vec<Factor>,
}

impl LinearPropagator {
    pub fn new(frame: &WaveFrame, nu: f64, nu_prime: f64, epsilon: f64, h: f64) -> Self {
        let t = *frame.torus();
        let factors = frame
            .entries()
            .iter()
            .map(|e| {
                let k2 = norm2(t.check(e.n));
                if e.degenerate {
                    return Factor::Degenerate {
                        velocity: exp(-nu * k2 * h),
                        theta: exp(-nu_prime * k2 * h),
                    };
                }
                let w = if epsilon.is_finite() {
                    e.omega / epsilon
                } else {
                    0.0
                };
                let s = 0.5 * (nu + nu_prime) * k2;
                let d = 0.5 * (nu_prime - nu) * k2;
                let lam2 = d * d - w * w;
                // exp(hN) = c I + g N with N² = λ² I
                let (c, g) = if lam2 > 0.0 {
                    let l = sqrt(lam2);
                    (cosh(h * l), sinh(h * l) / l)
                } else if lam2 < 0.0 {
                    let mu = sqrt(-lam2);
                    (cos(h * mu), sin(h * mu) / mu)
                } else {
                    (1.0, h)
                };
                let damp = exp(-s * h);
                let n = [
                    [C64::new(0.0, -w), C64::new(-d, 0.0)],
                    [C64::new(-d, 0.0), C64::new(0.0, w)],
                ];
                let mut block = [[C64::new(0.0, 0.0); 2]; 2];
                for i in 0..2 {
                    for j in 0..2 {
                        let id = if i == j { c } else { 0.0 };
                        block[i][j] = (n[i][j] * g + id) * damp;
                    }
                }
                Factor::Wave {
                    kernel: exp(-nu * k2 * h),
                    block,
                }
            })
            .collect();
        Self { factors }
    }

    /// Apply to a solenoidal field; the gradient slot is dropped.
    pub fn apply(&self, frame: &WaveFrame, f: &SpectralField) -> SpectralField {
        let mut out = f.clone();
        for ((v, e), fac) in out
            .coeffs_mut()
            .iter_mut()
            .zip(frame.entries())
            .zip(self.factors.iter())
        {
            match *fac {
                Factor::Degenerate { velocity, theta } => {
                    v[0] *= velocity;
                    v[1] *= velocity;
                    v[2] *= velocity;
                    v[3] *= theta;
                }
                Factor::Wave { kernel, block } => {
                    let u0 = inner4(v, &e.basis[KERNEL]) * kernel;
                    let up = inner4(v, &e.basis[PLUS]);
                    let um = inner4(v, &e.basis[MINUS]);
                    let np = block[0][0] * up + block[0][1] * um;
                    let nm = block[1][0] * up + block[1][1] * um;
                    for j in 0..4 {
                        v[j] = u0 * e.basis[KERNEL][j]
                            + np * e.basis[PLUS][j]
                            + nm * e.basis[MINUS][j];
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_torus::test_support::random_vector;
    use crate::spectral_torus::{Spectral, TorusSpec};

    #[test]
    fn single_wave_mode_closed_form() {
        let t = TorusSpec::new([1.0, 1.3, 0.8], [8, 8, 8]).unwrap();
        let frame = WaveFrame::new(t);
        let n = [1, 2, -1];
        let e = frame.at(n).unwrap();
        let mut f = SpectralField::zeros(t);
        f.set_mode(n, e.eplus()).unwrap();
        let (nu, eps, h) = (0.07, 0.01, 0.013);
        let p = LinearPropagator::new(&frame, nu, nu, eps, h);
        let mut g = f.clone();
        for _ in 0..100 {
            g = p.apply(&frame, &g);
        }
        let tt = 100.0 * h;
        let k2 = norm2(t.check(n));
        let expect = crate::math::cis(-e.omega * tt / eps) * exp(-nu * k2 * tt);
        let got = inner4(&g.get(n), &e.eplus());
        assert!((got - expect).norm() < 1e-10, "{} vs {}", got, expect);
    }

    #[test]
    fn composition_and_unequal_diffusivities() {
        let t = TorusSpec::new([1.0, 1.0, 0.7], [8, 8, 8]).unwrap();
        let frame = WaveFrame::new(t);
        let f = random_vector(&t, 3, true);
        for (nu, nup) in [(0.05, 0.05), (0.02, 0.09), (0.3, 0.01)] {
            let full = LinearPropagator::new(&frame, nu, nup, 0.05, 0.02);
            let half = LinearPropagator::new(&frame, nu, nup, 0.05, 0.01);
            let a = full.apply(&frame, &f);
            let b = half.apply(&frame, &half.apply(&frame, &f));
            assert!(a.max_abs_diff(&b) < 1e-14);
            assert!(a.energy() <= f.energy());
        }
    }
}
