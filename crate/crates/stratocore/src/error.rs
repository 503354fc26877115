use alloc::string::String;

/// Errors raised by the spectral kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid torus: {0}")]
    InvalidTorus(String),
    #[error("mismatched tori in a binary operation")]
    TorusMismatch,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("field has relative energy {energy:e} outside the wave frame")]
    Residual { energy: f64 },
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("exact decision unavailable: {0}")]
    Exactness(String),
    #[error("degenerate frequency ({}, {}, {}) has no oscillating eigenvectors", .0[0], .0[1], .0[2])]
    Degenerate([i64; 3]),
    #[error("{count} resonant triads, first: {first}")]
    ResonantDomain { count: usize, first: String },
    #[error("certificate error: {0}")]
    Certificate(String),
    #[error("root finder: {0}")]
    Root(String),
    #[error("norm {norm:e} exceeded the blow-up guard at t = {t}")]
    Blowup { t: f64, norm: f64 },
    #[error("small divisor {divisor:e} at triad {triad}")]
    Divisor { divisor: f64, triad: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("bad initial-data recipe: {0}")]
    Recipe(String),
}
