//! Initial-data recipes and random spectral fields.
//!
//! Every recipe output has zero mean, zero horizontal average and is
//! solenoidal; it also lies in the two-thirds band so that dealiased runs see
//! the same data as undealiased ones.

use alloc::format;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::rng::{uniform_in, SeedTree};
use crate::spectral_torus::{
    leray_project, norm2, perp_grad_h, sobolev_norm, ScalarField, Spectral, SpectralField,
    TorusSpec,
};
use crate::wave_basis::{build_frame, Label};
use crate::{Error, Result, C64};

/// Random scalar field with coefficient amplitude `weight(ň)`; one pair of
/// uniform draws per stored slot, in storage order.
pub fn random_scalar_with<R: RngCore + ?Sized, W: Fn([f64; 3]) -> f64>(
    t: &TorusSpec,
    rng: &mut R,
    weight: W,
) -> ScalarField {
    let mut f = ScalarField::zeros(*t);
    for (idx, z) in f.coeffs_mut().iter_mut().enumerate() {
        let re = uniform_in(rng, -1.0, 1.0);
        let im = uniform_in(rng, -1.0, 1.0);
        *z = C64::new(re, im) * weight(t.check(t.freq(idx)));
    }
    f.enforce();
    f.coeffs_mut()[0] = C64::new(0.0, 0.0);
    f
}

/// Random four-component field; Leray-projected when `solenoidal`.
pub fn random_vector_with<R: RngCore + ?Sized, W: Fn([f64; 3]) -> f64>(
    t: &TorusSpec,
    rng: &mut R,
    weight: W,
    solenoidal: bool,
) -> SpectralField {
    let mut f = SpectralField::zeros(*t);
    for (idx, v) in f.coeffs_mut().iter_mut().enumerate() {
        let w = weight(t.check(t.freq(idx)));
        for z in v.iter_mut() {
            let re = uniform_in(rng, -1.0, 1.0);
            let im = uniform_in(rng, -1.0, 1.0);
            *z = C64::new(re, im) * w;
        }
    }
    f.enforce();
    if solenoidal {
        f = leray_project(&f);
    }
    f
}

/// Named initial-data profiles.
#[derive(Clone, Debug, PartialEq)]
pub enum Recipe {
    /// Random solenoidal field with spectrum `(1+|ň|²)^{−(s+1)/2}`, rescaled to
    /// `‖·‖_{H^s} = amplitude`, restricted to `|kᵢ| ≤ max_mode`.
    RandomSolenoidal {
        s: f64,
        amplitude: f64,
        max_mode: i64,
    },
    /// Random kernel field `ū^h = ∇_h^⊥ψ` with `|k_h|∞ ≤ 2` and
    /// `|k₃| ≤ layers`, rescaled to `‖·‖_{L²} = amplitude`.
    KernelVortex { amplitude: f64, layers: i64 },
    /// Layer-independent `ψ = amplitude · cos(x̌₁) cos(x̌₂)`.
    TaylorGreen { amplitude: f64 },
    /// Superposition of eigenvectors `c · e^a(n)` with `a ∈ {+, −}`.
    OscPack { modes: Vec<([i64; 3], Label, C64)> },
}

impl Recipe {
    pub fn name(&self) -> &'static str {
        match self {
            Recipe::RandomSolenoidal { .. } => "random_solenoidal",
            Recipe::KernelVortex { .. } => "kernel_vortex",
            Recipe::TaylorGreen { .. } => "taylor_green",
            Recipe::OscPack { .. } => "osc_pack",
        }
    }
}

fn in_band_weight(t: &TorusSpec, k: [i64; 3], max_mode: i64) -> bool {
    t.in_band(k) && k.iter().all(|x| x.abs() <= max_mode) && (k[0] != 0 || k[1] != 0)
}

fn restrict(f: &mut SpectralField, keep: impl Fn([i64; 3]) -> bool) {
    let t = *f.torus();
    for (idx, v) in f.coeffs_mut().iter_mut().enumerate() {
        if !keep(t.freq(idx)) {
            *v = [C64::new(0.0, 0.0); 4];
        }
    }
}

/// Build the initial field for `recipe`; randomness comes from `seeds`.
pub fn make_initial_data(
    recipe: &Recipe,
    t: &TorusSpec,
    seeds: &SeedTree,
) -> Result<SpectralField> {
    let out = match recipe {
        Recipe::RandomSolenoidal {
            s,
            amplitude,
            max_mode,
        } => {
            check_amplitude(*amplitude)?;
            if *max_mode < 1 {
                return Err(Error::Recipe(format!(
                    "max_mode must be at least 1, got {}",
                    max_mode
                )));
            }
            let mut rng = seeds.stream("random_solenoidal");
            let e = -(s + 1.0) / 2.0;
            let mut f = random_vector_with(
                t,
                &mut rng,
                |kc| crate::math::powf(1.0 + norm2(kc), e),
                true,
            );
            restrict(&mut f, |k| in_band_weight(t, k, *max_mode));
            normalize(f, |g| sobolev_norm(g, *s), *amplitude)?
        }
        Recipe::KernelVortex { amplitude, layers } => {
            check_amplitude(*amplitude)?;
            if *layers < 0 {
                return Err(Error::Recipe(format!(
                    "layers must be nonnegative, got {}",
                    layers
                )));
            }
            let mut rng = seeds.stream("kernel_vortex");
            let mut psi = random_scalar_with(t, &mut rng, |_| 1.0);
            for (idx, z) in psi.coeffs_mut().iter_mut().enumerate() {
                let k = t.freq(idx);
                let keep = (k[0] != 0 || k[1] != 0)
                    && k[0].abs() <= 2
                    && k[1].abs() <= 2
                    && k[2].abs() <= *layers;
                if !keep || !t.in_band(k) {
                    *z = C64::new(0.0, 0.0);
                }
            }
            normalize(perp_grad_h(&psi), |g| sobolev_norm(g, 0.0), *amplitude)?
        }
        Recipe::TaylorGreen { amplitude } => {
            check_amplitude(*amplitude)?;
            let mut psi = ScalarField::zeros(*t);
            for k in [[1, 1, 0], [1, -1, 0]] {
                psi.set_mode(k, C64::new(0.25 * amplitude, 0.0))?;
            }
            perp_grad_h(&psi)
        }
        Recipe::OscPack { modes } => {
            let mut f = SpectralField::zeros(*t);
            for &(n, l, c) in modes {
                if l == Label::Zero {
                    return Err(Error::Recipe(
                        "osc_pack modes must carry label + or -".into(),
                    ));
                }
                if n[0] == 0 && n[1] == 0 {
                    return Err(Error::Recipe(format!("osc_pack mode {:?} has n_h = 0", n)));
                }
                if !t.in_band(n) {
                    return Err(Error::Recipe(format!(
                        "osc_pack mode {:?} outside the dealiased band",
                        n
                    )));
                }
                let e = build_frame(t, n).vector(l);
                let idx = t
                    .index(n)
                    .ok_or_else(|| Error::Recipe(format!("mode {:?} off the grid", n)))?;
                let mut v = f.coeffs()[idx];
                for j in 0..4 {
                    v[j] += c * e[j];
                }
                f.set_mode(n, v)?;
            }
            f
        }
    };
    Ok(out)
}

fn check_amplitude(a: f64) -> Result<()> {
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::Recipe(format!(
            "amplitude must be finite and nonnegative, got {}",
            a
        )));
    }
    Ok(())
}

fn normalize(
    f: SpectralField,
    norm: impl Fn(&SpectralField) -> f64,
    amplitude: f64,
) -> Result<SpectralField> {
    let n = norm(&f);
    if n == 0.0 {
        if amplitude == 0.0 {
            return Ok(f);
        }
        return Err(Error::Recipe(
            "recipe produced an empty spectrum on this grid".into(),
        ));
    }
    Ok(f.scaled(amplitude / n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_torus::divergence_residual;
    use crate::wave_basis::WaveFrame;

    fn torus() -> TorusSpec {
        TorusSpec::new([1.0, 1.3, 0.8], [12, 12, 8]).unwrap()
    }

    fn hypotheses(f: &SpectralField) {
        assert!(divergence_residual(f) < 1e-13);
        assert_eq!(f.horizontal_average_energy(), 0.0);
        assert_eq!(f.coeffs()[0], [C64::new(0.0, 0.0); 4]);
        assert!(f.hermitian_defect() < 1e-15);
    }

    #[test]
    fn random_solenoidal_normalized() {
        let t = torus();
        let r = Recipe::RandomSolenoidal {
            s: 1.0,
            amplitude: 1.0,
            max_mode: 3,
        };
        let f = make_initial_data(&r, &t, &SeedTree::new(3)).unwrap();
        hypotheses(&f);
        assert!((sobolev_norm(&f, 1.0) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn kernel_vortex_is_kernel() {
        let t = torus();
        let f = make_initial_data(
            &Recipe::KernelVortex {
                amplitude: 0.5,
                layers: 2,
            },
            &t,
            &SeedTree::new(1),
        )
        .unwrap();
        hypotheses(&f);
        let w = WaveFrame::new(t);
        assert!(w.project_osc(&f).unwrap().energy() < 1e-30);
        assert!((sobolev_norm(&f, 0.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn osc_pack_is_oscillating() {
        let t = torus();
        let r = Recipe::OscPack {
            modes: alloc::vec![
                ([1, 2, 1], Label::Plus, C64::new(0.3, 0.1)),
                ([2, 0, -1], Label::Minus, C64::new(0.0, 1.0))
            ],
        };
        let f = make_initial_data(&r, &t, &SeedTree::new(0)).unwrap();
        hypotheses(&f);
        let w = WaveFrame::new(t);
        assert!(w.project_bar(&f).unwrap().energy() < 1e-30);
        let bad = Recipe::OscPack {
            modes: alloc::vec![([0, 0, 1], Label::Plus, C64::new(1.0, 0.0))],
        };
        assert!(matches!(
            make_initial_data(&bad, &t, &SeedTree::new(0)),
            Err(Error::Recipe(_))
        ));
    }

    #[test]
    fn rejects_bad_parameters() {
        let t = torus();
        let s = SeedTree::new(0);
        assert!(make_initial_data(&Recipe::TaylorGreen { amplitude: -1.0 }, &t, &s).is_err());
        assert!(make_initial_data(
            &Recipe::KernelVortex {
                amplitude: 1.0,
                layers: -1
            },
            &t,
            &s
        )
        .is_err());
        let tg = make_initial_data(&Recipe::TaylorGreen { amplitude: 1.0 }, &t, &s).unwrap();
        hypotheses(&tg);
    }
}
