//! Scalar abstraction shared by the signal-processing core.
//!
//! Sample buffers are generic over [`Real`] so the same chain runs in `f32` for
//! throughput or `f64` for reference-grade numerics. Configuration values
//! (frequencies, delays, ranges) stay in `f64` regardless.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Floating-point type usable for sample buffers.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + FftNum + Default + Display + Debug + Sum + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` constant into the working precision.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 is representable in every Real type")
}

/// Converts a working-precision value back to `f64`.
#[inline]
pub fn wide<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Unit phasor `exp(i·phase)` evaluated in `f64` and narrowed afterwards.
///
/// Phases in this crate are often large (carrier frequency times delay), so the
/// argument reduction happens in double precision even for `f32` buffers.
#[inline]
pub fn cis<T: Real>(phase: f64) -> Complex<T> {
    let (s, c) = phase.sin_cos();
    Complex::new(lit(c), lit(s))
}

/// Widens a complex sample to `f64`.
#[inline]
pub fn widen<T: Real>(z: Complex<T>) -> Complex<f64> {
    Complex::new(wide(z.re), wide(z.im))
}

/// Narrows a complex `f64` value to the working precision.
#[inline]
pub fn narrow<T: Real>(z: Complex<f64>) -> Complex<T> {
    Complex::new(lit(z.re), lit(z.im))
}
