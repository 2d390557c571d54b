//! Gray-mapped QPSK with unit average energy.

use num_complex::Complex;

use crate::scalar::{lit, Real};

/// Maps two bits to a constellation point; bit value 0 maps to the positive
/// half-axis.
#[inline]
pub fn map<T: Real>(b0: u8, b1: u8) -> Complex<T> {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let re = if b0 == 0 { a } else { -a };
    let im = if b1 == 0 { a } else { -a };
    Complex::new(lit(re), lit(im))
}

/// Hard decision.
#[inline]
pub fn demap_hard<T: Real>(z: Complex<T>) -> (u8, u8) {
    (u8::from(z.re < T::zero()), u8::from(z.im < T::zero()))
}

/// Bit log-likelihood ratios `ln P(b=0)/P(b=1)` for a symbol observed in
/// complex Gaussian noise of total variance `noise_var`.
#[inline]
pub fn llr<T: Real>(z: Complex<T>, noise_var: T) -> (T, T) {
    let scale = lit::<T>(2.0 * std::f64::consts::SQRT_2) / noise_var;
    (z.re * scale, z.im * scale)
}
