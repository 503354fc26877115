use alloc::format;

use crate::spectral_torus::TorusSpec;
use crate::{Error, Result};

/// Parameters shared by every stepper.
///
/// `dt` is an upper bound: runs split `[0, t_final]` into `samples` equal
/// intervals and each interval into the smallest whole number of steps no
/// longer than `dt`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunConfig {
    pub epsilon: f64,
    pub nu: f64,
    pub nu_prime: f64,
    pub dt: f64,
    pub t_final: f64,
    pub dealias: bool,
    /// Sobolev exponent of the diagnostics.
    pub s: f64,
    pub seed: u64,
    /// Drop the transport term (linear runs).
    pub linearized: bool,
    /// Stop with [`Error::Blowup`] once `‖V‖_{H^s}` exceeds this.
    pub blowup_guard: f64,
    /// Number of output intervals over `[0, t_final]`.
    pub samples: usize,
    /// `C` in `dt ≤ C min(aᵢ²) / (N² max(ν, ν′))`.
    pub stability_constant: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            nu: 0.05,
            nu_prime: 0.05,
            dt: 1e-3,
            t_final: 1.0,
            dealias: true,
            s: 1.0,
            seed: 0,
            linearized: false,
            blowup_guard: 1e8,
            samples: 20,
            stability_constant: 100.0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self, t: &TorusSpec) -> Result<()> {
        let positive = [
            ("epsilon", self.epsilon),
            ("nu", self.nu),
            ("nu_prime", self.nu_prime),
            ("dt", self.dt),
            ("t_final", self.t_final),
            ("blowup_guard", self.blowup_guard),
            ("stability_constant", self.stability_constant),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(Error::Config(format!(
                    "{} must be positive, got {}",
                    name, v
                )));
            }
        }
        if !(self.s > 0.5) {
            return Err(Error::Config(format!("s must exceed 1/2, got {}", self.s)));
        }
        if self.dt >= self.t_final {
            return Err(Error::Config(format!(
                "dt = {} must be below t_final = {}",
                self.dt, self.t_final
            )));
        }
        if self.samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        let bound = self.stability_bound(t);
        if self.dt > bound {
            return Err(Error::Config(format!(
                "dt = {} exceeds the stability bound {:e}",
                self.dt, bound
            )));
        }
        Ok(())
    }

    /// `C min(aᵢ²) / (N² max(ν, ν′))` with `N` the largest grid size.
    pub fn stability_bound(&self, t: &TorusSpec) -> f64 {
        let a2 = t.a.iter().map(|a| a * a).fold(f64::INFINITY, f64::min);
        let n = *t.n.iter().max().unwrap_or(&1) as f64;
        self.stability_constant * a2 / (n * n * self.nu.max(self.nu_prime))
    }

    /// `(steps per sample, effective dt)` for a target step `dt`.
    pub fn schedule(&self, dt: f64) -> (usize, f64) {
        let interval = self.t_final / self.samples as f64;
        let steps = libm::ceil(interval / dt - 1e-9).max(1.0) as usize;
        (steps, interval / steps as f64)
    }

    pub fn sample_times(&self) -> alloc::vec::Vec<f64> {
        (0..=self.samples)
            .map(|j| self.t_final * j as f64 / self.samples as f64)
            .collect()
    }
}

/// Constants of the a priori bounds; the defaults are `C = 1`, `K = 2`,
/// `c` the horizontal Poincaré constant, `p = ∞`, `σ = 1/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundConstants {
    pub big_c: f64,
    pub big_k: f64,
    /// `None` selects [`TorusSpec::poincare_constant_h`].
    pub small_c: Option<f64>,
    pub p: f64,
    pub sigma: f64,
}

impl Default for BoundConstants {
    fn default() -> Self {
        Self {
            big_c: 1.0,
            big_k: 2.0,
            small_c: None,
            p: f64::INFINITY,
            sigma: 0.5,
        }
    }
}
