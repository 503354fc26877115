//! Integrating-factor RK4 for the full system and its filtered form.

use alloc::vec::Vec;

use super::config::RunConfig;
use super::linear::LinearPropagator;
use super::nonlinear::nonlinear_term;
use crate::spectral_torus::{
    divergence_residual, norm2, sobolev_norm, Spectral, SpectralField, TorusSpec, Transform,
};
use crate::wave_basis::WaveFrame;
use crate::{Error, Result};

/// State of a stepper: time and field.
#[derive(Clone, Debug, PartialEq)]
pub struct FullState {
    pub t: f64,
    pub v: SpectralField,
}

/// Lawson RK4 with exact factors for `−PA/ε` and the diffusion.
///
/// `epsilon = ∞` freezes the rotation, giving plain Boussinesq without
/// stratification.
pub struct FullSolver<'a> {
    cfg: RunConfig,
    frame: WaveFrame,
    tr: &'a dyn Transform,
    h: f64,
    half: LinearPropagator,
    full: LinearPropagator,
}

impl<'a> FullSolver<'a> {
    /// Solver with step `h`; the configuration is validated against the grid.
    pub fn new(torus: TorusSpec, cfg: RunConfig, h: f64, tr: &'a dyn Transform) -> Result<Self> {
        cfg.validate(&torus)?;
        if !(h > 0.0) || h > cfg.dt * (1.0 + 1e-12) {
            return Err(Error::Config(alloc::format!(
                "step {} outside (0, dt = {}]",
                h,
                cfg.dt
            )));
        }
        if tr.dims() != torus.n {
            return Err(Error::TorusMismatch);
        }
        let frame = WaveFrame::new(torus);
        let lin = |s: f64| LinearPropagator::new(&frame, cfg.nu, cfg.nu_prime, cfg.epsilon, s);
        Ok(Self {
            half: lin(0.5 * h),
            full: lin(h),
            cfg,
            frame,
            tr,
            h,
        })
    }

    pub fn step_size(&self) -> f64 {
        self.h
    }

    pub fn frame(&self) -> &WaveFrame {
        &self.frame
    }

    pub fn config(&self) -> &RunConfig {
        &self.cfg
    }

    /// `−P(v·∇V)`, or zero for linearized runs.
    fn rhs(&self, v: &SpectralField) -> Result<SpectralField> {
        if self.cfg.linearized {
            return Ok(SpectralField::zeros(*v.torus()));
        }
        Ok(nonlinear_term(v, self.cfg.dealias, self.tr)?.scaled(-1.0))
    }

    fn guard(&self, t: f64, v: &SpectralField) -> Result<()> {
        let norm = sobolev_norm(v, self.cfg.s);
        if !(norm <= self.cfg.blowup_guard) {
            return Err(Error::Blowup { t, norm });
        }
        Ok(())
    }

    /// Lawson RK4 over one step. `g(θa, θb, f)` is the exact linear
    /// propagator from `t0 + θa h` to `t0 + θb h` and `n(θ, f)` the explicit
    /// part at `t0 + θ h`.
    fn lawson(
        &self,
        u: &SpectralField,
        g: &dyn Fn(f64, f64, &SpectralField) -> Result<SpectralField>,
        n: &dyn Fn(f64, &SpectralField) -> Result<SpectralField>,
    ) -> Result<SpectralField> {
        let h = self.h;
        let k1 = n(0.0, u)?;
        let k2 = n(0.5, &g(0.0, 0.5, &u.axpy((0.5 * h).into(), &k1))?)?;
        let k3 = n(0.5, &g(0.0, 0.5, u)?.axpy((0.5 * h).into(), &k2))?;
        let eu = g(0.0, 1.0, u)?;
        let k4 = n(1.0, &eu.axpy(h.into(), &g(0.5, 1.0, &k3)?))?;
        let mut out = eu;
        out.add_scaled((h / 6.0).into(), &g(0.0, 1.0, &k1)?);
        out.add_scaled((h / 3.0).into(), &g(0.5, 1.0, &k2.add(&k3))?);
        out.add_scaled((h / 6.0).into(), &k4);
        out.enforce();
        Ok(out)
    }

    fn factor(&self, span: f64) -> &LinearPropagator {
        if span > 0.75 {
            &self.full
        } else {
            &self.half
        }
    }

    /// One step of the full system.
    pub fn step_full(&self, s: &FullState) -> Result<FullState> {
        let g = |a: f64, b: f64, f: &SpectralField| Ok(self.factor(b - a).apply(&self.frame, f));
        let n = |_: f64, f: &SpectralField| self.rhs(f);
        let v = self.lawson(&s.v, &g, &n)?;
        let t = s.t + self.h;
        self.guard(t, &v)?;
        Ok(FullState { t, v })
    }

    fn tau(&self, t: f64) -> f64 {
        if self.cfg.epsilon.is_finite() {
            t / self.cfg.epsilon
        } else {
            0.0
        }
    }

    /// One step of the filtered system for `U = L(t/ε)V`.
    ///
    /// Stages evaluate `−Q^ε(U, U) = −L(τ) P(v·∇V)|_{V = L(−τ)U}` at the
    /// stage times `τ = t/ε`; the linear part is the exact filtered propagator
    /// `L(t_b/ε) e^{(t_b−t_a)(−PA/ε + D)} L(−t_a/ε)`.
    pub fn step_filtered(&self, s: &FullState) -> Result<FullState> {
        let (t0, h) = (s.t, self.h);
        let g = |a: f64, b: f64, f: &SpectralField| -> Result<SpectralField> {
            let v = self.frame.propagate(f, -self.tau(t0 + a * h))?;
            let v = self.factor(b - a).apply(&self.frame, &v);
            self.frame.propagate(&v, self.tau(t0 + b * h))
        };
        let n = |theta: f64, f: &SpectralField| -> Result<SpectralField> {
            let tt = self.tau(t0 + theta * h);
            let v = self.frame.propagate(f, -tt)?;
            self.frame.propagate(&self.rhs(&v)?, tt)
        };
        let u = self.lawson(&s.v, &g, &n)?;
        let t = t0 + h;
        self.guard(t, &u)?;
        Ok(FullState { t, v: u })
    }
}

/// Sampled output of [`run_full`].
#[derive(Clone, Debug, PartialEq)]
pub struct FullRun {
    pub times: Vec<f64>,
    pub states: Vec<SpectralField>,
    /// `‖V‖_{L²}` at the sample times.
    pub l2: Vec<f64>,
    /// `‖V‖_{H^s}` at the sample times.
    pub hs: Vec<f64>,
    /// `∫₀ᵗ ‖∇V‖²_{L²}`, trapezoid over every step.
    pub grad_integral: Vec<f64>,
    /// `∫₀ᵗ ‖V‖²_{H^{s+1}}`, trapezoid over every step.
    pub hs1_integral: Vec<f64>,
    pub div_residual: Vec<f64>,
    pub step: f64,
}

/// `‖∇V‖²_{L²}`.
pub fn gradient_energy(v: &SpectralField) -> f64 {
    let t = *v.torus();
    (0..t.len())
        .map(|i| norm2(t.check(t.freq(i))) * v.mode_energy(i))
        .sum()
}

/// Which unknown [`run_full`] advances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Unknown {
    /// `V^ε` of the full system.
    Full,
    /// `U^ε = L(t/ε)V^ε` of the filtered system.
    Filtered,
}

/// Integrate from `v0` over `[0, t_final]`, sampling `cfg.samples + 1` times.
///
/// The step is the largest whole fraction of a sample interval not
/// exceeding `dt` (or `cfg.dt` when `dt` is `None`).
pub fn run_full(
    v0: &SpectralField,
    cfg: &RunConfig,
    dt: Option<f64>,
    unknown: Unknown,
    tr: &dyn Transform,
) -> Result<FullRun> {
    let torus = *v0.torus();
    let (per, h) = cfg.schedule(dt.unwrap_or(cfg.dt).min(cfg.dt));
    let solver = FullSolver::new(torus, *cfg, h, tr)?;
    let mut s = FullState {
        t: 0.0,
        v: v0.clone(),
    };
    solver.guard(0.0, &s.v)?;
    let hs1 = |v: &SpectralField| {
        let x = sobolev_norm(v, cfg.s + 1.0);
        x * x
    };
    let mut run = FullRun {
        times: Vec::new(),
        states: Vec::new(),
        l2: Vec::new(),
        hs: Vec::new(),
        grad_integral: Vec::new(),
        hs1_integral: Vec::new(),
        div_residual: Vec::new(),
        step: h,
    };
    let (mut gi, mut si) = (0.0, 0.0);
    let (mut g_prev, mut s_prev) = (gradient_energy(&s.v), hs1(&s.v));
    let record = |run: &mut FullRun, t: f64, v: &SpectralField, gi: f64, si: f64| {
        run.times.push(t);
        run.l2.push(sobolev_norm(v, 0.0));
        run.hs.push(sobolev_norm(v, cfg.s));
        run.grad_integral.push(gi);
        run.hs1_integral.push(si);
        run.div_residual.push(divergence_residual(v));
        run.states.push(v.clone());
    };
    record(&mut run, 0.0, &s.v, gi, si);
    for j in 1..=cfg.samples {
        for _ in 0..per {
            s = match unknown {
                Unknown::Full => solver.step_full(&s)?,
                Unknown::Filtered => solver.step_filtered(&s)?,
            };
            let (g, q) = (gradient_energy(&s.v), hs1(&s.v));
            gi += 0.5 * h * (g + g_prev);
            si += 0.5 * h * (q + s_prev);
            g_prev = g;
            s_prev = q;
        }
        let t = cfg.t_final * j as f64 / cfg.samples as f64;
        s.t = t;
        record(&mut run, t, &s.v, gi, si);
    }
    Ok(run)
}
