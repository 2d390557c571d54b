//! Small DSP helpers shared by the processing modules.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::consts::DB_FLOOR;
use crate::scalar::{lit, wide, Real};

/// Planned forward/inverse DFT pair of a fixed length.
///
/// The forward transform is unscaled and the inverse is scaled by `1/N`, so a
/// receive-side forward DFT returns cell values directly comparable to the
/// transmitted grid.
#[derive(Clone)]
pub struct Dft<T: Real> {
    len: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Real> Dft<T> {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self { len, forward: planner.plan_fft_forward(len), inverse: planner.plan_fft_inverse(len) }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// In-place forward transform of one or more consecutive length-`N` blocks.
    pub fn forward(&self, buf: &mut [Complex<T>]) {
        self.forward.process(buf);
    }

    /// In-place inverse transform (scaled by `1/N`) of one or more blocks.
    pub fn inverse(&self, buf: &mut [Complex<T>]) {
        self.inverse.process(buf);
        let scale = lit::<T>(1.0 / self.len as f64);
        for z in buf.iter_mut() {
            *z = *z * scale;
        }
    }

    /// Inverse transform without the `1/N` factor.
    pub fn inverse_unscaled(&self, buf: &mut [Complex<T>]) {
        self.inverse.process(buf);
    }
}

impl<T: Real> std::fmt::Debug for Dft<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Dft").field("len", &self.len).finish()
    }
}

/// Maps DFT bin `k` of an `n`-point transform to its signed frequency index in
/// `[-n/2, n/2)`.
#[inline]
pub fn signed_bin(k: usize, n: usize) -> i64 {
    if k < n.div_ceil(2) {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// `10·log10(x)`, clamped below at the global dB floor.
#[inline]
pub fn power_db(x: f64) -> f64 {
    if x > 0.0 {
        (10.0 * x.log10()).max(DB_FLOOR)
    } else {
        DB_FLOOR
    }
}

/// Mean of `|z|²` in double precision.
pub fn mean_power<T: Real>(x: &[Complex<T>]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    x.iter().map(|z| wide(z.norm_sqr())).sum::<f64>() / x.len() as f64
}

/// Wraps a phase to `(-π, π]`.
#[inline]
pub fn wrap_phase(phi: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut p = phi.rem_euclid(two_pi);
    if p > std::f64::consts::PI {
        p -= two_pi;
    }
    p
}
