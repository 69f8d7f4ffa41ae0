//! Real scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point type the library is generic over: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Sum
    + NumAssign
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Every `Real` can represent (a rounding of) any finite `f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Relative tolerance used for structural checks (symmetry, pivots,
    /// imaginary residue of quadratic forms) at this precision.
    fn structural_tol() -> Self;

    /// Relative asymmetry accepted for matrices that are symmetric or Hermitian by construction.
    fn symmetry_tol() -> Self;

    /// Relative spacing below which two Takagi values are treated as one cluster.
    fn cluster_tol() -> Self;
}

impl Real for f32 {
    fn structural_tol() -> Self {
        1e-5
    }

    fn symmetry_tol() -> Self {
        1e-4
    }

    fn cluster_tol() -> Self {
        1e-4
    }
}

impl Real for f64 {
    fn structural_tol() -> Self {
        1e-12
    }

    fn symmetry_tol() -> Self {
        1e-10
    }

    fn cluster_tol() -> Self {
        1e-9
    }
}

/// Squared modulus without the square root.
#[inline]
pub fn abs2<T: Real>(z: Complex<T>) -> T {
    z.re * z.re + z.im * z.im
}

#[inline]
pub fn cplx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}
