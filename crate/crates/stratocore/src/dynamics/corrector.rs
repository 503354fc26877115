//! Oscillating remainder of the filtered bilinear form along a limit
//! trajectory, its small-divisor corrector and the derived quantities.

use alloc::format;
use alloc::vec::Vec;

use super::config::RunConfig;
use super::interact::{smallest_divisor, symmetric, Band, Divided, Phase, Truncated};
use super::limit::{limit_d, limit_q, LimitRun};
use crate::resonance::DEFAULT_TOLERANCE;
use crate::spectral_torus::{norm2, sobolev_norm, Spectral, SpectralField};
use crate::wave_basis::WaveFrame;
use crate::{Error, Result};

/// Divisors `|ω^{a,b,c}|` in `[tol, MIN_DIVISOR)` are rejected.
pub const MIN_DIVISOR: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrectorOptions {
    /// Truncation `|k|∞, |n|∞ ≤ N`.
    pub n: i64,
    /// `C` in `Θ = 2C(‖U‖²_{H^{s+1}} + ε‖R̃‖²_{H^{s+1}})`.
    pub big_c: f64,
    /// Verify `∂_t(εR̃) = R_{osc,N} + εR̃^t` by a central difference of
    /// half-width `delta · ε` along `U ± δ ∂_tU`.
    pub check_identity: bool,
    pub delta: f64,
}

impl Default for CorrectorOptions {
    fn default() -> Self {
        Self {
            n: 4,
            big_c: 1.0,
            check_identity: true,
            delta: 1e-5,
        }
    }
}

/// Corrector quantities at one sample time.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrectorState {
    pub t: f64,
    /// `R_osc = Q^ε(U, U) − Q(U, U)` on nondegenerate output modes.
    pub r_osc_i: SpectralField,
    /// `R_osc` on the horizontal-average modes `n_h = 0`.
    pub r_osc_ii: SpectralField,
    pub r_osc_n: SpectralField,
    /// `R^{ε,N} = R_osc − R_{osc,N}`.
    pub r_high: SpectralField,
    pub tilde_r: SpectralField,
    pub tilde_r_t: SpectralField,
    /// `W + εR̃` when `W` is supplied.
    pub psi: Option<SpectralField>,
    pub gamma: SpectralField,
    pub theta: f64,
    /// Relative `L²` defect of the time-derivative identity.
    pub identity_defect: Option<f64>,
}

impl CorrectorState {
    pub fn r_osc(&self) -> SpectralField {
        self.r_osc_i.add(&self.r_osc_ii)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrectorSeries {
    pub epsilon: f64,
    pub n: i64,
    pub s: f64,
    /// Smallest divisor among the included triads.
    pub smallest_divisor: Option<f64>,
    pub states: Vec<CorrectorState>,
}

fn trapezoid(t: &[f64], y: &[f64]) -> f64 {
    t.windows(2)
        .zip(y.windows(2))
        .map(|(a, b)| 0.5 * (a[1] - a[0]) * (b[0] + b[1]))
        .sum()
}

impl CorrectorSeries {
    fn l2_in_time(&self, f: impl Fn(&CorrectorState) -> f64) -> f64 {
        let t: Vec<f64> = self.states.iter().map(|s| s.t).collect();
        let y: Vec<f64> = self
            .states
            .iter()
            .map(|s| {
                let v = f(s);
                v * v
            })
            .collect();
        crate::math::sqrt(trapezoid(&t, &y))
    }

    /// `‖R^{ε,N}‖_{L²_t H^{s−1}}`.
    pub fn r_high_norm(&self) -> f64 {
        self.l2_in_time(|c| sobolev_norm(&c.r_high, self.s - 1.0))
    }

    /// `‖Γ‖_{L²_t H^{s−1}}`.
    pub fn gamma_norm(&self) -> f64 {
        self.l2_in_time(|c| sobolev_norm(&c.gamma, self.s - 1.0))
    }

    /// `‖Θ‖_{L¹_t}`.
    pub fn theta_l1(&self) -> f64 {
        let t: Vec<f64> = self.states.iter().map(|s| s.t).collect();
        let y: Vec<f64> = self.states.iter().map(|s| s.theta).collect();
        trapezoid(&t, &y)
    }

    pub fn max_identity_defect(&self) -> Option<f64> {
        self.states
            .iter()
            .filter_map(|s| s.identity_defect)
            .reduce(f64::max)
    }
}

/// `D = diag(ν, ν, ν, ν′)Δ`.
fn heat_symbol(f: &SpectralField, nu: f64, nu_prime: f64) -> SpectralField {
    let t = *f.torus();
    let mut out = f.clone();
    for (idx, v) in out.coeffs_mut().iter_mut().enumerate() {
        let k2 = norm2(t.check(t.freq(idx)));
        for c in 0..3 {
            v[c] *= -nu * k2;
        }
        v[3] *= -nu_prime * k2;
    }
    out
}

/// Evaluate the corrector along `limit` at every sample time.
///
/// `w`, when given, supplies `W^ε` at the same times for `ψ = W + εR̃`.
pub fn corrector_diagnostics(
    limit: &LimitRun,
    cfg: &RunConfig,
    opts: &CorrectorOptions,
    w: Option<&[SpectralField]>,
) -> Result<CorrectorSeries> {
    let Some(first) = limit.u.first() else {
        return Err(Error::Constraint("empty limit trajectory".into()));
    };
    if opts.n < 1 {
        return Err(Error::Config(format!(
            "truncation N must be at least 1, got {}",
            opts.n
        )));
    }
    if let Some(w) = w {
        if w.len() != limit.u.len() {
            return Err(Error::Constraint(format!(
                "{} W samples for {} limit samples",
                w.len(),
                limit.u.len()
            )));
        }
    }
    let t = *first.torus();
    let eps = cfg.epsilon;
    let frame = WaveFrame::new(t);
    let band = Band::new(&t);
    let tol = DEFAULT_TOLERANCE;
    let trunc = |tau: f64| Truncated(Divided { tau, tol }, opts.n);
    let smallest = smallest_divisor(&band, &frame, &trunc(0.0), tol);
    if let Some((d, triad)) = &smallest {
        if *d < MIN_DIVISOR {
            return Err(Error::Divisor {
                divisor: *d,
                triad: triad.clone(),
            });
        }
    }
    let mut states = Vec::with_capacity(limit.u.len());
    for (j, (&time, u)) in limit.times.iter().zip(limit.u.iter()).enumerate() {
        let tau = time / eps;
        let r_osc = symmetric(
            &band,
            &frame,
            u,
            u,
            &Phase {
                tau,
                skip_below: tol,
            },
        )?;
        let r_osc_ii = frame.project_degenerate(&r_osc)?;
        let r_osc_i = r_osc.sub(&r_osc_ii);
        let r_osc_n = symmetric(
            &band,
            &frame,
            u,
            u,
            &Truncated(
                Phase {
                    tau,
                    skip_below: tol,
                },
                opts.n,
            ),
        )?;
        let r_high = r_osc.sub(&r_osc_n);
        let tilde_r = symmetric(&band, &frame, u, u, &trunc(tau))?;
        let u_dot = limit_d(&frame, u, cfg.nu, cfg.nu_prime)?.sub(&limit_q(&frame, u, u)?);
        let tilde_r_t = symmetric(&band, &frame, &u_dot, u, &trunc(tau))?.scaled(2.0);
        let second = tilde_r.scaled(eps).add(&u.scaled(2.0));
        let q_eps = symmetric(
            &band,
            &frame,
            &tilde_r,
            &second,
            &Phase {
                tau,
                skip_below: 0.0,
            },
        )?;
        let gamma = heat_symbol(&tilde_r, cfg.nu, cfg.nu_prime)
            .add(&q_eps)
            .add(&tilde_r_t);
        let h1 = |f: &SpectralField| {
            let x = sobolev_norm(f, cfg.s + 1.0);
            x * x
        };
        let theta = 2.0 * opts.big_c * (h1(u) + eps * h1(&tilde_r));
        let identity_defect = if opts.check_identity {
            let d = opts.delta * eps;
            let up = u.axpy(d.into(), &u_dot);
            let um = u.axpy((-d).into(), &u_dot);
            let rp = symmetric(&band, &frame, &up, &up, &trunc((time + d) / eps))?;
            let rm = symmetric(&band, &frame, &um, &um, &trunc((time - d) / eps))?;
            let lhs = rp.sub(&rm).scaled(eps / (2.0 * d));
            let rhs = r_osc_n.add(&tilde_r_t.scaled(eps));
            let scale = rhs.energy_sqrt().max(f64::MIN_POSITIVE);
            Some(lhs.sub(&rhs).energy_sqrt() / scale)
        } else {
            None
        };
        let psi = w.map(|w| w[j].add(&tilde_r.scaled(eps)));
        states.push(CorrectorState {
            t: time,
            r_osc_i,
            r_osc_ii,
            r_osc_n,
            r_high,
            tilde_r,
            tilde_r_t,
            psi,
            gamma,
            theta,
            identity_defect,
        });
    }
    Ok(CorrectorSeries {
        epsilon: eps,
        n: opts.n,
        s: cfg.s,
        smallest_divisor: smallest.map(|s| s.0),
        states,
    })
}
