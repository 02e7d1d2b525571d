//! Floating-point scalar abstraction shared by every numeric module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar backing all amplitudes, coefficients and matrix entries.
///
/// Implemented for `f32` and `f64`. Oracle comparisons in the test suites are
/// only tight for `f64`.
pub trait Scalar:
    Float + NumAssign + FloatConst + FromPrimitive + ToPrimitive + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Tolerance used when validating unitarity of user-supplied matrices.
    fn unitary_tol() -> Self;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {
    fn unitary_tol() -> Self {
        1e-5
    }
}

impl Scalar for f64 {
    fn unitary_tol() -> Self {
        1e-10
    }
}

/// Complex number over a [`Scalar`].
pub type C<T> = Complex<T>;

#[inline]
pub fn c<T: Scalar>(re: f64, im: f64) -> C<T> {
    Complex::new(T::lit(re), T::lit(im))
}

#[inline]
pub fn czero<T: Scalar>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub fn cone<T: Scalar>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

/// Multiply by `i^k`.
#[inline]
pub fn times_i_pow<T: Scalar>(z: C<T>, k: u8) -> C<T> {
    match k % 4 {
        0 => z,
        1 => Complex::new(-z.im, z.re),
        2 => Complex::new(-z.re, -z.im),
        _ => Complex::new(z.im, -z.re),
    }
}
