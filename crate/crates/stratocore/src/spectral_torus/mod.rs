//! Torus geometry, spectral fields, transforms, Fourier multipliers and the
//! norms used as diagnostics.

mod dyadic;
mod field;
pub mod harmonic;
mod norms;
mod ops;
mod torus;
mod transform;

pub use dyadic::{chi, dyadic_block, dyadic_qmax, low_pass, phi, DyadicAxis};
pub use field::{PhysicalField, ScalarField, Spectral, SpectralField, COMPONENTS};
pub use norms::{
    aniso_lebesgue_norm, aniso_sobolev_norm, homogeneous_sobolev_norm, lebesgue_norm, lp_mean,
    lpv_hsigma_norm, lpv_hsigma_profile, sobolev_norm, MixedOrder,
};
pub use ops::{
    biot_savart, curl_h, divergence, divergence_residual, grad_h, gradient, inv_lap_h,
    inv_sqrt_lap_h, lap_h, laplacian, leray_mode, leray_project, perp_grad_h,
};
pub use torus::TorusSpec;
pub(crate) use torus::{norm2, norm2_h};
pub use transform::{
    from_physical, naive_planner, product, scalar_from_physical, scalar_to_physical, to_physical,
    NaiveDft, Planner, Transform,
};

impl SpectralField {
    /// Coefficient `ℓ²` norm.
    pub fn energy_sqrt(&self) -> f64 {
        crate::math::sqrt(self.energy())
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::{ScalarField, SpectralField, TorusSpec};
    use crate::init::{random_scalar_with, random_vector_with};
    use crate::rng::SeedTree;

    fn weight(k: [f64; 3]) -> f64 {
        1.0 / (1.0 + k[0] * k[0] + k[1] * k[1] + k[2] * k[2])
    }

    pub fn random_scalar(t: &TorusSpec, seed: u64) -> ScalarField {
        random_scalar_with(t, &mut SeedTree::new(seed).stream("scalar"), weight)
    }

    pub fn random_vector(t: &TorusSpec, seed: u64, solenoidal: bool) -> SpectralField {
        random_vector_with(
            t,
            &mut SeedTree::new(seed).stream("vector"),
            weight,
            solenoidal,
        )
    }
}
