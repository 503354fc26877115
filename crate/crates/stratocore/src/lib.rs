//! Pseudospectral kernels for the strongly stratified Boussinesq system on an
//! anisotropic periodic box.
//!
//! The crate is `no_std` (it needs `alloc`). Discrete Fourier transforms are
//! abstracted behind [`spectral_torus::Transform`]; a direct-sum reference
//! implementation ships here and faster backends live in companion crates.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dynamics;
mod error;
pub mod init;
pub(crate) mod math;
pub mod resonance;
pub mod rng;
pub mod spectral_torus;
pub mod wave_basis;

pub use error::Error;
pub use num_complex::Complex64 as C64;
pub use spectral_torus::{PhysicalField, ScalarField, SpectralField, TorusSpec, Transform};

pub type Result<T> = core::result::Result<T, Error>;
