
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::window::Window;
use crate::consts::SPEED_OF_LIGHT;
use crate::dsp::{signed_bin, Dft};
use crate::error::{IsacError, Result};
use crate::scalar::{lit, Real};
use crate::waveform::FrameGrid;

/// Physical spacing of the image bins.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImageAxes {
    /// Relative bistatic range per range bin, metres (c0/B).
    pub range_step: f64,
    /// Doppler shift per Doppler bin, Hz (1/(M·T_sym)).
    pub doppler_step: f64,
    pub num_range: usize,
    pub num_doppler: usize,
}

impl ImageAxes {
    pub fn range(&self, bin: usize) -> f64 {
        bin as f64 * self.range_step
    }

    /// Doppler bins above M/2 are negative shifts.
    pub fn doppler(&self, bin: usize) -> f64 {
        signed_bin(bin, self.num_doppler) as f64 * self.doppler_step
    }
}

/// Complex range–Doppler image, range-major (`r·M + q`).
#[derive(Clone, Debug, PartialEq)]
pub struct RangeDopplerImage<T: Real> {
    pub values: Vec<Complex<T>>,
    pub axes: ImageAxes,
}

impl<T: Real> RangeDopplerImage<T> {
    pub fn get(&self, range: usize, doppler: usize) -> Complex<T> {
        self.values[range * self.axes.num_doppler + doppler]
    }

    /// Zeroes the zero-range row, removing the line-of-sight response.
    pub fn notch_zero_range(&mut self) {
        let m = self.axes.num_doppler;
        for v in &mut self.values[..m] {
            *v = Complex::new(T::zero(), T::zero());
        }
    }

    pub fn power(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr().to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// `(range, doppler)` of the strongest cell.
    pub fn peak(&self) -> (usize, usize) {
        let i = self
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().partial_cmp(&b.1.norm_sqr()).unwrap_or(std::cmp::Ordering::Equal))
            .map_or(0, |(i, _)| i);
        (i / self.axes.num_doppler, i % self.axes.num_doppler)
    }
}

/// Windowed periodogram of one radar CFR: unnormalised inverse DFT over
/// subcarriers (range) and DFT over symbols (Doppler). The range window runs
/// over subcarriers in ascending frequency.
pub fn range_doppler_image<T: Real>(
    d: &FrameGrid<T>,
    window_range: &Window,
    window_doppler: &Window,
) -> Result<RangeDopplerImage<T>> {
    let (n, m) = (d.num_subcarriers(), d.num_symbols());
    if window_range.len() != n || window_doppler.len() != m {
        return Err(IsacError::Dimension(format!(
            "{}/{}-point windows for a {n}×{m} grid",
            window_range.len(),
            window_doppler.len()
        )));
    }
    let wr: Vec<T> = (0..n).map(|k| lit(window_range.coefficients[(signed_bin(k, n) + n as i64 / 2) as usize])).collect();
    let range_dft = Dft::<T>::new(n);
    // Range profile of every symbol, stored symbol-major.
    let mut profiles: Vec<Complex<T>> = Vec::with_capacity(n * m);
    for sym in 0..m {
        let mut buf: Vec<Complex<T>> = d.symbol(sym).iter().zip(&wr).map(|(v, w)| *v * *w).collect();
        range_dft.inverse_unscaled(&mut buf);
        profiles.extend(buf);
    }
    let doppler_dft = Dft::<T>::new(m);
    let wd: Vec<T> = window_doppler.coefficients.iter().map(|&w| lit(w)).collect();
    let mut values = vec![Complex::new(T::zero(), T::zero()); n * m];
    let mut column = vec![Complex::new(T::zero(), T::zero()); m];
    for r in 0..n {
        for (sym, c) in column.iter_mut().enumerate() {
            *c = profiles[sym * n + r] * wd[sym];
        }
        doppler_dft.forward(&mut column);
        values[r * m..(r + 1) * m].copy_from_slice(&column);
    }
    let axes = ImageAxes {
        range_step: SPEED_OF_LIGHT / (d.subcarrier_spacing() * n as f64),
        doppler_step: 1.0 / (m as f64 * d.symbol_duration()),
        num_range: n,
        num_doppler: m,
    };
    Ok(RangeDopplerImage { values, axes })
}
