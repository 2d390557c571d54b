//! Windowed-sinc fractional interpolation.

use num_complex::Complex;

use crate::error::{IsacError, Result};

/// Default interpolator length.
pub const RESAMPLER_TAPS: usize = 31;
/// Default Kaiser shape parameter.
pub const KAISER_BETA: f64 = 8.0;

/// Modified Bessel function of the first kind, order zero.
fn bessel_i0(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= q / (k * k) as f64;
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

/// Kaiser-windowed sinc interpolator evaluating a sampled sequence at
/// arbitrary real positions; samples outside the sequence read as zero.
#[derive(Clone, Debug)]
pub struct SincInterpolator {
    half: i64,
    window_half_width: f64,
    beta: f64,
    norm: f64,
}

impl SincInterpolator {
    pub fn new(taps: usize, beta: f64) -> Result<Self> {
        if taps.is_multiple_of(2) || taps < 3 {
            return Err(IsacError::Argument(format!("interpolator length {taps} must be odd and at least 3")));
        }
        let half = (taps / 2) as i64;
        Ok(Self { half, window_half_width: half as f64 + 1.0, beta, norm: bessel_i0(beta) })
    }

    fn kernel(&self, t: f64) -> f64 {
        let r = t / self.window_half_width;
        if r.abs() >= 1.0 {
            return 0.0;
        }
        let w = bessel_i0(self.beta * (1.0 - r * r).sqrt()) / self.norm;
        let sinc = if t == 0.0 { 1.0 } else { (std::f64::consts::PI * t).sin() / (std::f64::consts::PI * t) };
        w * sinc
    }

    /// Value of the band-limited continuation of `x` at `position`.
    pub fn at(&self, x: &[Complex<f64>], position: f64) -> Complex<f64> {
        let centre = position.round();
        let frac = position - centre;
        let c = centre as i64;
        if frac == 0.0 {
            return usize::try_from(c).ok().and_then(|i| x.get(i)).copied().unwrap_or_default();
        }
        let mut acc = Complex::new(0.0, 0.0);
        for k in (c - self.half)..=(c + self.half) {
            if let Some(v) = usize::try_from(k).ok().and_then(|i| x.get(i)) {
                acc += v * self.kernel(k as f64 - position);
            }
        }
        acc
    }
}

impl Default for SincInterpolator {
    fn default() -> Self {
        Self::new(RESAMPLER_TAPS, KAISER_BETA).expect("valid default")
    }
}

/// Resamples `x` onto the grid `y[n] = x(n·ratio)`, keeping the length.
pub fn resample(x: &[Complex<f64>], ratio: f64) -> Vec<Complex<f64>> {
    let interp = SincInterpolator::default();
    (0..x.len()).map(|n| interp.at(x, n as f64 * ratio)).collect()
}
