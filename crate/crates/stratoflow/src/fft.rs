//! FFT-backed [`Transform`] built on `rustfft`.

use std::sync::Arc;

use rustfft::{Fft, FftPlanner};
use stratocore::{TorusSpec, Transform, C64};

/// Separable 3D FFT: one forward and one inverse plan per axis.
pub struct FftTransform {
    dims: [usize; 3],
    fwd: [Arc<dyn Fft<f64>>; 3],
    inv: [Arc<dyn Fft<f64>>; 3],
}

impl FftTransform {
    pub fn new(dims: [usize; 3]) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = dims.map(|n| planner.plan_fft_forward(n));
        let inv = dims.map(|n| planner.plan_fft_inverse(n));
        Self { dims, fwd, inv }
    }

    pub fn for_torus(t: &TorusSpec) -> Self {
        Self::new(t.n)
    }

    fn run(&self, data: &mut [C64], plans: &[Arc<dyn Fft<f64>>; 3]) {
        let [n0, n1, n2] = self.dims;
        assert_eq!(
            data.len(),
            n0 * n1 * n2,
            "buffer does not match the transform grid"
        );
        plans[0].process(data);
        let mut line = Vec::new();
        for (axis, n, stride, count) in [(1, n1, n0, n0 * n2), (2, n2, n0 * n1, n0 * n1)] {
            line.resize(n, C64::new(0.0, 0.0));
            for c in 0..count {
                let base = if axis == 1 {
                    (c % n0) + (c / n0) * n0 * n1
                } else {
                    c
                };
                for (j, l) in line.iter_mut().enumerate() {
                    *l = data[base + j * stride];
                }
                plans[axis].process(&mut line);
                for (j, l) in line.iter().enumerate() {
                    data[base + j * stride] = *l;
                }
            }
        }
    }
}

impl Transform for FftTransform {
    fn dims(&self) -> [usize; 3] {
        self.dims
    }

    fn inverse(&self, data: &mut [C64]) {
        self.run(data, &self.inv);
    }

    fn forward(&self, data: &mut [C64]) {
        self.run(data, &self.fwd);
        let s = 1.0 / data.len() as f64;
        data.iter_mut().for_each(|z| *z *= s);
    }
}

/// [`stratocore::spectral_torus::Planner`] producing [`FftTransform`].
pub fn fft_planner(t: &TorusSpec) -> Box<dyn Transform> {
    Box::new(FftTransform::for_torus(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use stratocore::spectral_torus::NaiveDft;

    fn sample(len: usize) -> Vec<C64> {
        (0..len)
            .map(|i| C64::new((i as f64 * 0.37).sin(), (i as f64 * 1.3).cos()))
            .collect()
    }

    #[test]
    fn matches_direct_sum() {
        for dims in [[8, 6, 4], [5, 7, 3], [16, 16, 8]] {
            let fft = FftTransform::new(dims);
            let naive = NaiveDft::new(dims);
            let x = sample(dims.iter().product());
            for inverse in [false, true] {
                let (mut a, mut b) = (x.clone(), x.clone());
                if inverse {
                    fft.inverse(&mut a);
                    naive.inverse(&mut b);
                } else {
                    fft.forward(&mut a);
                    naive.forward(&mut b);
                }
                let err = a
                    .iter()
                    .zip(&b)
                    .map(|(p, q)| (p - q).norm())
                    .fold(0.0, f64::max);
                assert!(err < 1e-12, "{:?} inverse={} err={:e}", dims, inverse, err);
            }
        }
    }

    #[test]
    fn round_trip() {
        let fft = FftTransform::new([12, 10, 6]);
        let x = sample(720);
        let mut y = x.clone();
        fft.inverse(&mut y);
        fft.forward(&mut y);
        assert!(x.iter().zip(&y).all(|(p, q)| (p - q).norm() < 1e-13));
    }
}
