//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point field the matrices are built over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Tolerance used when callers do not supply one.
    fn default_tol() -> Self;
}

impl Real for f64 {
    fn default_tol() -> Self {
        1e-10
    }
}

impl Real for f32 {
    fn default_tol() -> Self {
        1e-4
    }
}

/// Converts an `f64` literal into the working scalar.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

#[cfg(test)]
pub(crate) fn cplx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(lit(re), lit(im))
}

#[inline]
pub(crate) fn as_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub(crate) fn is_finite_c<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Principal square root with a signed-zero imaginary part treated as `+0`,
/// so negative reals map to the positive imaginary axis.
#[inline]
pub fn principal_sqrt<T: Real>(z: Complex<T>) -> Complex<T> {
    Complex::new(z.re, z.im + T::zero()).sqrt()
}
