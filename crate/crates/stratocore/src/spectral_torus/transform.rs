use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use super::field::{PhysicalField, ScalarField, SpectralField};
use super::torus::TorusSpec;
use crate::{Error, Result, C64};

/// Three-dimensional discrete Fourier transform on a fixed grid.
///
/// Data is flat with axis 0 fastest. `inverse` maps coefficients to grid
/// values `u(x_j) = Σ_n û_n e^{2πi n·j/N}` without normalization; `forward`
/// is its exact inverse and carries the `1/(N₁N₂N₃)` factor.
pub trait Transform: Send + Sync {
    fn dims(&self) -> [usize; 3];
    fn inverse(&self, data: &mut [C64]);
    fn forward(&self, data: &mut [C64]);
}

/// Builds a transform for a given grid; lets grid-generic routines pick a backend.
pub type Planner<'a> = &'a dyn Fn(&TorusSpec) -> Box<dyn Transform>;

/// [`Planner`] producing [`NaiveDft`].
pub fn naive_planner(t: &TorusSpec) -> Box<dyn Transform> {
    Box::new(NaiveDft::for_torus(t))
}

/// Direct-sum DFT along each axis; `O(N)` work per output sample.
///
/// Slow but free of any factorization logic, so it serves as the reference
/// for faster backends and as the default on small grids.
#[derive(Clone, Debug)]
pub struct NaiveDft {
    dims: [usize; 3],
    twiddle: [Vec<C64>; 3],
}

impl NaiveDft {
    pub fn new(dims: [usize; 3]) -> Self {
        let tw = |n: usize| {
            (0..n)
                .map(|j| crate::math::cis(2.0 * core::f64::consts::PI * j as f64 / n as f64))
                .collect::<Vec<_>>()
        };
        Self {
            dims,
            twiddle: [tw(dims[0]), tw(dims[1]), tw(dims[2])],
        }
    }

    pub fn for_torus(t: &TorusSpec) -> Self {
        Self::new(t.n)
    }

    fn pass(&self, data: &mut [C64], axis: usize, sign: i64) {
        let n = self.dims[axis];
        let stride = match axis {
            0 => 1,
            1 => self.dims[0],
            _ => self.dims[0] * self.dims[1],
        };
        let tw = &self.twiddle[axis];
        let mut line = vec![C64::new(0.0, 0.0); n];
        let total = data.len();
        for base in 0..total {
            if (base / stride) % n != 0 {
                continue;
            }
            for (j, l) in line.iter_mut().enumerate() {
                *l = data[base + j * stride];
            }
            for j in 0..n {
                let mut s = C64::new(0.0, 0.0);
                for (k, &l) in line.iter().enumerate() {
                    let e = ((sign * (j * k) as i64).rem_euclid(n as i64)) as usize;
                    s += l * tw[e];
                }
                data[base + j * stride] = s;
            }
        }
    }
}

impl Transform for NaiveDft {
    fn dims(&self) -> [usize; 3] {
        self.dims
    }

    fn inverse(&self, data: &mut [C64]) {
        for axis in 0..3 {
            self.pass(data, axis, 1);
        }
    }

    fn forward(&self, data: &mut [C64]) {
        for axis in 0..3 {
            self.pass(data, axis, -1);
        }
        let s = 1.0 / data.len() as f64;
        data.iter_mut().for_each(|z| *z *= s);
    }
}

fn check_dims<T: Transform + ?Sized>(tr: &T, torus: &TorusSpec) -> Result<()> {
    if tr.dims() != torus.n {
        return Err(Error::Constraint(alloc::format!(
            "transform dims {:?} do not match grid {:?}",
            tr.dims(),
            torus.n
        )));
    }
    Ok(())
}

/// Grid values of a scalar spectral field.
pub fn scalar_to_physical<T: Transform + ?Sized>(f: &ScalarField, tr: &T) -> Result<Vec<f64>> {
    check_dims(tr, f.torus_ref())?;
    let mut buf = f.coeffs().to_vec();
    tr.inverse(&mut buf);
    Ok(buf.into_iter().map(|z| z.re).collect())
}

/// Fourier coefficients of real grid values; Hermitian by construction.
pub fn scalar_from_physical<T: Transform + ?Sized>(
    torus: &TorusSpec,
    values: &[f64],
    tr: &T,
) -> Result<ScalarField> {
    check_dims(tr, torus)?;
    let mut buf: Vec<C64> = values.iter().map(|&x| C64::new(x, 0.0)).collect();
    tr.forward(&mut buf);
    let mut s = ScalarField::from_coeffs(*torus, buf)?;
    s.enforce();
    Ok(s)
}

/// Grid values of all four components.
pub fn to_physical<T: Transform + ?Sized>(f: &SpectralField, tr: &T) -> Result<PhysicalField> {
    let t = *super::Spectral::torus(f);
    check_dims(tr, &t)?;
    let len = t.len();
    let mut values = vec![0.0; 4 * len];
    for c in 0..4 {
        let mut buf: Vec<C64> = f.coeffs().iter().map(|v| v[c]).collect();
        tr.inverse(&mut buf);
        for (dst, z) in values[c * len..(c + 1) * len].iter_mut().zip(buf) {
            *dst = z.re;
        }
    }
    PhysicalField::from_values(t, 4, values)
}

/// Spectral field from four physical components; mean and Nyquist cleared.
pub fn from_physical<T: Transform + ?Sized>(p: &PhysicalField, tr: &T) -> Result<SpectralField> {
    let t = *p.torus();
    check_dims(tr, &t)?;
    if p.ncomp() != 4 {
        return Err(Error::Constraint(alloc::format!(
            "expected 4 components, got {}",
            p.ncomp()
        )));
    }
    let mut out = SpectralField::zeros(t);
    for c in 0..4 {
        let s = scalar_from_physical(&t, p.component(c), tr)?;
        out.set_component(c, &s);
    }
    out.enforce();
    Ok(out)
}

/// Pointwise product of two scalar fields.
///
/// With `dealias`, both factors are truncated to the two-thirds band first and
/// the result is truncated again, so the retained band is alias-free.
pub fn product<T: Transform + ?Sized>(
    a: &ScalarField,
    b: &ScalarField,
    dealias: bool,
    tr: &T,
) -> Result<ScalarField> {
    let t = *a.torus_ref();
    if t != *b.torus_ref() {
        return Err(Error::TorusMismatch);
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    if dealias {
        a.truncate_to_band();
        b.truncate_to_band();
    }
    let pa = scalar_to_physical(&a, tr)?;
    let pb = scalar_to_physical(&b, tr)?;
    let prod: Vec<f64> = pa.iter().zip(pb.iter()).map(|(x, y)| x * y).collect();
    let mut out = scalar_from_physical(&t, &prod, tr)?;
    if dealias {
        out.truncate_to_band();
    }
    Ok(out)
}

impl ScalarField {
    pub(crate) fn torus_ref(&self) -> &TorusSpec {
        super::Spectral::torus(self)
    }
}
