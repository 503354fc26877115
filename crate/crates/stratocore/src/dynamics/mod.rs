//! Time integration of the full, filtered and limit systems, the corrector
//! diagnostics and the a priori bounds.

mod bounds;
mod config;
mod corrector;
mod full;
pub(crate) mod interact;
mod limit;
mod linear;
mod nonlinear;
mod study;

pub use bounds::{apriori_bounds, AprioriBounds};
pub use config::{BoundConstants, RunConfig};
pub use corrector::{
    corrector_diagnostics, CorrectorOptions, CorrectorSeries, CorrectorState, MIN_DIVISOR,
};
pub use full::{gradient_energy, run_full, FullRun, FullSolver, FullState, Unknown};
pub use limit::{
    limit_d, limit_q, solve_limit, solve_limit_bar, solve_limit_osc, BarTrajectory, LimitRun,
    OscTrajectory,
};
pub use linear::LinearPropagator;
pub use nonlinear::{nonlinear_term, symmetric_transport, transport};
pub use study::{
    convergence_row, run_convergence_study, strictly_decreasing, ConvergenceRow, StudyOptions,
};
