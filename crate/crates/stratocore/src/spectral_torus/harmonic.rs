//! Numerical checks of the harmonic-analysis inequalities on random fields:
//! two-sided Bernstein bounds, a horizontal Gagliardo-Nirenberg bound, the
//! ordering of mixed Lebesgue norms, the horizontal Poincaré inequality and
//! (optionally) commutator decay for dyadic blocks.
//!
//! Every check fits its constant empirically and reports it; nothing is
//! asserted silently.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use rand_core::RngCore;

use super::dyadic::{dyadic_block, DyadicAxis};
use super::field::{PhysicalField, ScalarField, Spectral};
use super::norms::{aniso_lebesgue_norm, lebesgue_norm, sobolev_norm, MixedOrder};
use super::ops::{grad_h, gradient};
use super::torus::{norm2, norm2_h, TorusSpec};
use super::transform::{product, scalar_to_physical, to_physical, Planner, Transform};
use crate::init::{random_scalar_with, random_vector_with};
use crate::math::{powf, sqrt};
use crate::rng::{uniform_in, SeedTree};
use crate::{Result, C64};

#[derive(Clone, Debug)]
pub struct HarmonicSuiteConfig {
    pub seed: u64,
    /// Random fields per check.
    pub samples: usize,
    /// Largest acceptable fitted Bernstein constant.
    pub bernstein_bound: f64,
    /// Largest acceptable relative drift of the fitted GN constant between grids.
    pub gn_stability: f64,
    pub commutator: bool,
}

impl Default for HarmonicSuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 100,
            bernstein_bound: 4.0,
            gn_stability: 0.25,
            commutator: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicCheck {
    pub name: String,
    pub passed: bool,
    /// Fitted constant (maximum, or minimum for Poincaré, over the samples).
    pub fitted: f64,
    /// Reference the fitted value is compared against.
    pub reference: f64,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct HarmonicReport {
    pub checks: Vec<HarmonicCheck>,
}

impl HarmonicReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&HarmonicCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Run every check; `planner` supplies the transform for each grid used.
pub fn property_suite_harmonic(
    cfg: &HarmonicSuiteConfig,
    planner: Planner<'_>,
) -> Result<HarmonicReport> {
    let root = SeedTree::new(cfg.seed).child("harmonic");
    let mut checks = vec![
        bernstein(cfg, &root, planner)?,
        gagliardo_nirenberg(cfg, &root, planner)?,
        ordering(cfg, &root, planner)?,
        poincare(cfg, &root)?,
    ];
    if cfg.commutator {
        checks.push(commutator(cfg, &root, planner)?);
    }
    Ok(HarmonicReport { checks })
}

fn physical_scalar(f: &ScalarField, tr: &dyn Transform) -> Result<PhysicalField> {
    let v = scalar_to_physical(f, tr)?;
    PhysicalField::from_values(*f.torus(), 1, v)
}

fn abs_derivative(f: &ScalarField, k: f64) -> ScalarField {
    let t = *f.torus();
    f.apply_real_multiplier(|n| powf(norm2(t.check(n)), k / 2.0))
}

fn bernstein(
    cfg: &HarmonicSuiteConfig,
    root: &SeedTree,
    planner: Planner<'_>,
) -> Result<HarmonicCheck> {
    let t = TorusSpec::new([1.0; 3], [16, 16, 16])?;
    let tr = planner(&t);
    let mut rng = root.stream("bernstein");
    let mut fitted: f64 = 1.0;
    let ps = [2.0, 4.0, f64::INFINITY];
    let ks = [1.0, 2.0];
    let qs = [1, 2];
    for i in 0..cfg.samples {
        let q = qs[i % qs.len()];
        let scale = libm::ldexp(1.0, q);
        let u = random_scalar_with(&t, &mut rng, |kc| {
            let r = sqrt(norm2(kc)) / scale;
            if r > 0.75 && r < 8.0 / 3.0 {
                1.0
            } else {
                0.0
            }
        });
        if u.energy() == 0.0 {
            continue;
        }
        let pu = physical_scalar(&u, tr.as_ref())?;
        for &k in &ks {
            let pd = physical_scalar(&abs_derivative(&u, k), tr.as_ref())?;
            for &p in &ps {
                let r = lebesgue_norm(&pd, p) / (powf(scale, k) * lebesgue_norm(&pu, p));
                fitted = fitted.max(powf(r, 1.0 / k)).max(powf(r, -1.0 / k));
            }
        }
    }
    Ok(HarmonicCheck {
        name: "bernstein".into(),
        passed: fitted.is_finite() && fitted <= cfg.bernstein_bound,
        fitted,
        reference: cfg.bernstein_bound,
        detail: format!("p in {{2, 4, inf}}, k in {{1, 2}}, shells q in {{1, 2}} on 16^3"),
    })
}

/// Coefficients on `|k|∞ ≤ 3` with zero horizontal average, drawn in a
/// grid-independent order so the same function can be sampled on two grids.
fn low_band_coeffs<R: RngCore>(rng: &mut R) -> Vec<([i64; 3], C64)> {
    let mut out = Vec::new();
    for k3 in -3i64..=3 {
        for k2 in -3i64..=3 {
            for k1 in -3i64..=3 {
                let k = [k1, k2, k3];
                let w = 1.0 / (1.0 + (k1 * k1 + k2 * k2 + k3 * k3) as f64);
                let z = C64::new(uniform_in(rng, -1.0, 1.0), uniform_in(rng, -1.0, 1.0)) * w;
                if (k1, k2) != (0, 0) && (k1, k2, k3) > (0, 0, 0) {
                    out.push((k, z));
                }
            }
        }
    }
    out
}

fn place(t: &TorusSpec, coeffs: &[([i64; 3], C64)]) -> Result<ScalarField> {
    let mut f = ScalarField::zeros(*t);
    for &(k, z) in coeffs {
        f.set_mode(k, z)?;
    }
    Ok(f)
}

fn gagliardo_nirenberg(
    cfg: &HarmonicSuiteConfig,
    root: &SeedTree,
    planner: Planner<'_>,
) -> Result<HarmonicCheck> {
    let grids = [
        TorusSpec::new([1.0; 3], [16, 16, 8])?,
        TorusSpec::new([1.0; 3], [24, 24, 12])?,
    ];
    let trs: Vec<_> = grids.iter().map(|g| planner(g)).collect();
    let mut rng = root.stream("gn");
    let mut fitted = [0.0f64; 2];
    for _ in 0..cfg.samples {
        let coeffs = low_band_coeffs(&mut rng);
        for (g, (t, tr)) in grids.iter().zip(trs.iter()).enumerate() {
            let u = place(t, &coeffs)?;
            let pu = physical_scalar(&u, tr.as_ref())?;
            let lhs = aniso_lebesgue_norm(&pu, 4.0, 2.0, MixedOrder::VerticalOuter);
            let grad = sobolev_norm(&grad_h(&u), 0.0);
            let rhs = sqrt(sobolev_norm(&u, 0.0) * grad);
            if rhs > 0.0 {
                fitted[g] = fitted[g].max(lhs / rhs);
            }
        }
    }
    let drift = (fitted[0] - fitted[1]).abs() / fitted[0].max(fitted[1]).max(f64::MIN_POSITIVE);
    Ok(HarmonicCheck {
        name: "gagliardo_nirenberg".into(),
        passed: fitted.iter().all(|c| c.is_finite() && *c > 0.0) && drift <= cfg.gn_stability,
        fitted: fitted[0],
        reference: fitted[1],
        detail: format!(
            "L2_v L4_h ratio: {:.6} on 16x16x8, {:.6} on 24x24x12, drift {:.3e}",
            fitted[0], fitted[1], drift
        ),
    })
}

fn ordering(
    cfg: &HarmonicSuiteConfig,
    root: &SeedTree,
    planner: Planner<'_>,
) -> Result<HarmonicCheck> {
    let t = TorusSpec::new([1.0, 1.3, 0.8], [12, 12, 8])?;
    let tr = planner(&t);
    let mut rng = root.stream("ordering");
    let mut fitted: f64 = 0.0;
    for _ in 0..cfg.samples {
        let f = random_vector_with(&t, &mut rng, |kc| 1.0 / (1.0 + norm2(kc)), false);
        let p = uniform_in(&mut rng, 1.0, 6.0);
        let q = if uniform_in(&mut rng, 0.0, 1.0) < 0.1 {
            f64::INFINITY
        } else {
            p + uniform_in(&mut rng, 0.0, 6.0)
        };
        let pf = to_physical(&f, tr.as_ref())?;
        let vh = aniso_lebesgue_norm(&pf, p, q, MixedOrder::VerticalOuter);
        let hv = aniso_lebesgue_norm(&pf, p, q, MixedOrder::HorizontalOuter);
        if hv > 0.0 {
            fitted = fitted.max(vh / hv);
        }
    }
    Ok(HarmonicCheck {
        name: "ordering".into(),
        passed: fitted <= 1.0 + 1e-10,
        fitted,
        reference: 1.0,
        detail: "max of |f|_{L^q_v L^p_h} / |f|_{L^p_h L^q_v} over p <= q".into(),
    })
}

fn poincare(cfg: &HarmonicSuiteConfig, root: &SeedTree) -> Result<HarmonicCheck> {
    let t = TorusSpec::new([2.0, 1.0, 0.7], [12, 8, 6])?;
    let c = t.poincare_constant_h();
    let mut rng = root.stream("poincare");
    let mut fitted = f64::INFINITY;
    for _ in 0..cfg.samples {
        let mut f = random_vector_with(&t, &mut rng, |kc| 1.0 / (1.0 + norm2(kc)), false);
        f.remove_horizontal_average();
        let e = f.energy();
        if e == 0.0 {
            continue;
        }
        let g: f64 = (0..t.len())
            .map(|i| norm2_h(t.check(t.freq(i))) * f.mode_energy(i))
            .sum();
        fitted = fitted.min(g / e);
    }
    Ok(HarmonicCheck {
        name: "poincare".into(),
        passed: fitted >= c * (1.0 - 1e-12),
        fitted,
        reference: c,
        detail: format!("min |grad_h f|^2/|f|^2 against c = {}", c),
    })
}

fn commutator(
    cfg: &HarmonicSuiteConfig,
    root: &SeedTree,
    planner: Planner<'_>,
) -> Result<HarmonicCheck> {
    let t = TorusSpec::new([1.0; 3], [16, 16, 16])?;
    let tr = planner(&t);
    let mut rng = root.stream("commutator");
    let mut fitted: f64 = 0.0;
    let samples = cfg.samples.div_ceil(4).max(1);
    for _ in 0..samples {
        let u = random_scalar_with(&t, &mut rng, |kc| {
            if kc.iter().all(|x| x.abs() <= 2.0) {
                1.0 / (1.0 + norm2(kc))
            } else {
                0.0
            }
        });
        let v = random_scalar_with(&t, &mut rng, |kc| {
            if kc.iter().all(|x| x.abs() <= 5.0) {
                1.0
            } else {
                0.0
            }
        });
        let grad = to_physical(&gradient(&u), tr.as_ref())?;
        let grad_sup = lebesgue_norm(&grad, f64::INFINITY);
        let vn = sobolev_norm(&v, 0.0);
        if grad_sup == 0.0 || vn == 0.0 {
            continue;
        }
        let uv = product(&u, &v, false, tr.as_ref())?;
        for q in 0..4 {
            let a = dyadic_block(&uv, q, DyadicAxis::Isotropic);
            let b = product(
                &u,
                &dyadic_block(&v, q, DyadicAxis::Isotropic),
                false,
                tr.as_ref(),
            )?;
            let diff = ScalarField::from_coeffs(
                t,
                a.coeffs()
                    .iter()
                    .zip(b.coeffs())
                    .map(|(x, y)| x - y)
                    .collect(),
            )?;
            let r = sobolev_norm(&diff, 0.0) / (libm::ldexp(1.0, -q) * grad_sup * vn);
            fitted = fitted.max(r);
        }
    }
    Ok(HarmonicCheck {
        name: "commutator".into(),
        passed: fitted.is_finite(),
        fitted,
        reference: f64::INFINITY,
        detail: "max of |[D_q, u] v|_2 / (2^-q |grad u|_inf |v|_2), q = 0..3".into(),
    })
}
