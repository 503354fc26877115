//! Closed-form a priori bounds on the limit flow.

use super::config::{BoundConstants, RunConfig};
use crate::math::exp;
use crate::spectral_torus::{lpv_hsigma_norm, norm2_h, sobolev_norm, Spectral, SpectralField};
use crate::wave_basis::WaveFrame;
use crate::Result;

/// `Φ(U₀)` and the right-hand sides `E₁`, `E₂` of the energy bounds on `ū^h`
/// and `U_osc`, with the norms that enter them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AprioriBounds {
    pub e1: f64,
    pub e2: f64,
    pub phi: f64,
    /// `‖∇_h ū₀‖_{L^∞_v L²_h}`.
    pub grad_bar_linf: f64,
    /// `‖ū₀‖_{L^∞_v L²_h}`.
    pub bar_linf: f64,
    /// `‖∇_h ū₀‖_{L^p_v H^σ_h}`.
    pub grad_bar_lp_hsigma: f64,
    /// The constant `c` actually used.
    pub small_c: f64,
}

fn horizontal_gradient_weight(f: &SpectralField) -> SpectralField {
    let t = *f.torus();
    f.apply_real_multiplier(|k| crate::math::sqrt(norm2_h(t.check(k))))
}

/// Evaluate
///
/// * `Φ = exp{ C K² A²/(cν) · exp{ K (1 + B²) A²/(cν) } }`,
/// * `E₁ = C ‖ū₀‖²_{H^s} exp{ C K Φ G/(cν) }`,
/// * `E₂ = C ‖U_osc,0‖²_{H^s} exp{ C E₁/ν }`,
///
/// with `A = ‖∇_hū₀‖_{L^∞_vL²_h}`, `B = ‖ū₀‖_{L^∞_vL²_h}` and
/// `G = ‖∇_hū₀‖_{L^p_vH^σ_h}`. In `E₂` the time integral
/// `‖∇ū^h‖²_{L²(H^s)}` is replaced by its own bound `E₁/ν`.
pub fn apriori_bounds(
    u0: &SpectralField,
    cfg: &RunConfig,
    k: &BoundConstants,
) -> Result<AprioriBounds> {
    let t = *u0.torus();
    let frame = WaveFrame::new(t);
    let bar = frame.project_bar(u0)?;
    let osc = frame.project_osc(u0)?;
    let c = k.small_c.unwrap_or_else(|| t.poincare_constant_h());
    let nu = cfg.nu;
    let grad = horizontal_gradient_weight(&bar);
    let a = lpv_hsigma_norm(&grad, f64::INFINITY, 0.0);
    let b = lpv_hsigma_norm(&bar, f64::INFINITY, 0.0);
    let g = lpv_hsigma_norm(&grad, k.p, k.sigma);
    let inner = exp(k.big_k * (1.0 + b * b) * a * a / (c * nu));
    let phi = exp(k.big_c * k.big_k * k.big_k * a * a / (c * nu) * inner);
    let bar_hs = sobolev_norm(&bar, cfg.s);
    let e1 = k.big_c * bar_hs * bar_hs * exp(k.big_c * k.big_k * phi * g / (c * nu));
    let osc_hs = sobolev_norm(&osc, cfg.s);
    let e2 = k.big_c * osc_hs * osc_hs * exp(k.big_c * e1 / nu);
    Ok(AprioriBounds {
        e1,
        e2,
        phi,
        grad_bar_linf: a,
        bar_linf: b,
        grad_bar_lp_hsigma: g,
        small_c: c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::init::{make_initial_data, Recipe};
    use crate::rng::SeedTree;
    use crate::spectral_torus::TorusSpec;
    use proptest::prelude::*;

    fn torus() -> TorusSpec {
        TorusSpec::new([1.0, 1.2, 0.8], [8, 8, 8]).unwrap()
    }

    #[test]
    fn zero_data() {
        let t = torus();
        let b = apriori_bounds(
            &SpectralField::zeros(t),
            &RunConfig::default(),
            &BoundConstants::default(),
        )
        .unwrap();
        assert_eq!(b.phi, 1.0);
        assert_eq!(b.e1, 0.0);
        assert_eq!(b.e2, 0.0);
        assert_eq!(b.small_c, t.poincare_constant_h());
    }

    #[test]
    fn layer_profile_of_a_single_mode() {
        // ū = ∇_h^⊥ cos(x̌₁): |∇_h ū| is constant in x₃, so the L^∞_v norm
        // equals the L² norm of one layer.
        let t = torus();
        let mut psi = crate::ScalarField::zeros(t);
        psi.set_mode([1, 0, 0], crate::C64::new(0.5, 0.0)).unwrap();
        let u = crate::spectral_torus::perp_grad_h(&psi);
        let b = apriori_bounds(&u, &RunConfig::default(), &BoundConstants::default()).unwrap();
        let l2 = sobolev_norm(&u, 0.0);
        assert!((b.bar_linf - l2).abs() < 1e-14);
        assert!((b.grad_bar_linf - l2 / t.a[0]).abs() < 1e-14);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn phi_monotone_in_amplitude(seed in any::<u64>(), lo in 0.01f64..0.3, gain in 1.0f64..3.0) {
            let t = torus();
            let f = make_initial_data(&Recipe::KernelVortex { amplitude: 1.0, layers: 2 }, &t, &SeedTree::new(seed)).unwrap();
            let cfg = RunConfig { nu: 0.5, ..Default::default() };
            let k = BoundConstants::default();
            let a = apriori_bounds(&f.scaled(lo), &cfg, &k).unwrap();
            let b = apriori_bounds(&f.scaled(lo * gain), &cfg, &k).unwrap();
            prop_assert!(b.phi >= a.phi);
            prop_assert!(b.e1 >= a.e1);
            prop_assert!(a.phi >= 1.0);
        }
    }
}
