//! Scalar abstraction shared by every numerical kernel.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating point type the kernels are generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Never fails for the supported types.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Gaussian exponents below this value are flushed to zero when
    /// sampling packets, so products of a few amplitudes stay normal.
    #[inline]
    fn gaussian_cutoff() -> Self {
        Self::min_positive_value().ln() / Self::lit(4.0)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex amplitude over the scalar type.
pub type Cplx<T> = Complex<T>;

#[inline]
pub(crate) fn cis<T: Real>(phase: T) -> Cplx<T> {
    let (s, c) = phase.sin_cos();
    Complex::new(c, s)
}
