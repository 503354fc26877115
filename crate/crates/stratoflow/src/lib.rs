//! Files, manifests and experiment orchestration around `stratocore`.

pub mod fft;
pub mod manifest;
pub mod output;
pub mod run;
pub mod snapshot;
pub mod summarize;

pub use fft::{fft_planner, FftTransform};
