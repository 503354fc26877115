//! Distance between the full flow and the filtered limit flow as `ε → 0`.

use alloc::vec::Vec;

use super::config::RunConfig;
use super::full::{run_full, Unknown};
use super::limit::{solve_limit, LimitRun};
use crate::resonance::NonResonanceCertificate;
use crate::spectral_torus::{sobolev_norm, SpectralField, Transform};
use crate::wave_basis::WaveFrame;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StudyOptions {
    /// Full runs use `dt = min(cfg.dt, ε / steps_per_epsilon)`.
    pub steps_per_epsilon: f64,
}

impl Default for StudyOptions {
    fn default() -> Self {
        Self {
            steps_per_epsilon: 40.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub epsilon: f64,
    /// `max_j ‖V^ε(t_j) − L(−t_j/ε)U(t_j)‖_{H^s}` over the sample times.
    pub sup_hs: f64,
    /// `(∫ ‖V^ε − L(−t/ε)U‖²_{H^{s+1}})^{1/2}`, trapezoid over the samples.
    pub l2_hs1: f64,
    pub step: f64,
}

/// True when `sup_hs` strictly decreases down the table.
pub fn strictly_decreasing(rows: &[ConvergenceRow]) -> bool {
    rows.windows(2).all(|w| w[1].sup_hs < w[0].sup_hs)
}

/// Compare full runs at each `ε` with one limit run from the same data.
///
/// The limit flow uses the schedule of `cfg`; each full run uses the same
/// sample times.
pub fn run_convergence_study(
    u0: &SpectralField,
    cfg: &RunConfig,
    epsilons: &[f64],
    cert: Option<&NonResonanceCertificate>,
    tr: &dyn Transform,
    opts: &StudyOptions,
) -> Result<(LimitRun, Vec<ConvergenceRow>)> {
    if epsilons.is_empty() {
        return Err(Error::Config("empty epsilon list".into()));
    }
    let limit = solve_limit(u0, cfg, tr, cert)?;
    let rows = epsilons
        .iter()
        .map(|&eps| convergence_row(&limit, u0, cfg, eps, tr, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok((limit, rows))
}

/// One row of the study: the full flow at `eps` against a precomputed limit run.
///
/// Rows are independent of each other, so callers may evaluate them in any
/// order or concurrently.
pub fn convergence_row(
    limit: &LimitRun,
    u0: &SpectralField,
    cfg: &RunConfig,
    eps: f64,
    tr: &dyn Transform,
    opts: &StudyOptions,
) -> Result<ConvergenceRow> {
    let frame = WaveFrame::new(limit.bar.torus);
    let c = RunConfig {
        epsilon: eps,
        ..*cfg
    };
    let dt = cfg.dt.min(eps / opts.steps_per_epsilon);
    let full = run_full(u0, &c, Some(dt), Unknown::Full, tr)?;
    if full.times.len() != limit.times.len() {
        return Err(Error::Constraint(
            "full and limit runs disagree on the sample times".into(),
        ));
    }
    let mut sup: f64 = 0.0;
    let mut sq = Vec::with_capacity(full.times.len());
    for (j, &t) in full.times.iter().enumerate() {
        let d = full.states[j].sub(&frame.propagate(&limit.u[j], -t / eps)?);
        sup = sup.max(sobolev_norm(&d, cfg.s));
        let h = sobolev_norm(&d, cfg.s + 1.0);
        sq.push(h * h);
    }
    let l2: f64 = full
        .times
        .windows(2)
        .zip(sq.windows(2))
        .map(|(t, y)| 0.5 * (t[1] - t[0]) * (y[0] + y[1]))
        .sum();
    Ok(ConvergenceRow {
        epsilon: eps,
        sup_hs: sup,
        l2_hs1: crate::math::sqrt(l2),
        step: full.step,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::init::{make_initial_data, Recipe};
    use crate::resonance::{certify_nonresonant, CertifyMethod};
    use crate::rng::SeedTree;
    use crate::spectral_torus::test_support::random_vector;
    use crate::spectral_torus::{NaiveDft, TorusSpec};

    fn torus() -> TorusSpec {
        TorusSpec::new([1.0, 1.3, 0.8], [8, 8, 6]).unwrap()
    }

    fn cfg() -> RunConfig {
        RunConfig {
            dt: 0.01,
            t_final: 0.5,
            samples: 5,
            nu: 0.05,
            nu_prime: 0.05,
            ..RunConfig::default()
        }
    }

    #[test]
    fn kernel_data_stays_close_at_every_epsilon() {
        let t = torus();
        let tr = NaiveDft::for_torus(&t);
        let cert = certify_nonresonant(&t, 2, CertifyMethod::Floating).unwrap();
        // the kernel is not invariant once ū depends on x₃: waves are forced
        // at second order in the amplitude, so keep the data small
        let u0 = make_initial_data(
            &Recipe::KernelVortex {
                amplitude: 0.002,
                layers: 1,
            },
            &t,
            &SeedTree::new(3),
        )
        .unwrap();
        let (_, rows) = run_convergence_study(
            &u0,
            &cfg(),
            &[1e3, 1e-1, 1e-2],
            Some(&cert),
            &tr,
            &StudyOptions::default(),
        )
        .unwrap();
        for r in &rows {
            assert!(r.sup_hs.is_finite());
            assert!(r.sup_hs < 1e-3 * sobolev_norm(&u0, 1.0), "{:?}", r);
        }
    }

    #[test]
    fn difference_shrinks_with_epsilon() {
        let t = torus();
        let tr = NaiveDft::for_torus(&t);
        let cert = certify_nonresonant(&t, 2, CertifyMethod::Floating).unwrap();
        let mut u0 = random_vector(&t, 4, true);
        u0.truncate_to_band();
        u0.remove_horizontal_average();
        let u0 = u0.scaled(0.3 / sobolev_norm(&u0, 1.0));
        let (_, rows) = run_convergence_study(
            &u0,
            &cfg(),
            &[1e-1, 1e-2],
            Some(&cert),
            &tr,
            &StudyOptions::default(),
        )
        .unwrap();
        assert!(strictly_decreasing(&rows), "{:?}", rows);
    }
}
