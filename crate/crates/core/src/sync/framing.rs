use std::f64::consts::PI;

use num_complex::Complex;

use super::estimates::GlobalSync;
use crate::dsp::{signed_bin, Dft};
use crate::error::{IsacError, Result};
use crate::scalar::{narrow, widen, Real};
use crate::waveform::{FrameGrid, OfdmConfig};

/// Removes a carrier offset, `rx[j]·exp(-i·2π·cfo·j·T_s·(1+sfo))`, with time
/// measured from the first received sample on the receiver's clock.
pub fn derotate<T: Real>(rx: &[Complex<T>], cfo: f64, sfo: f64, config: &OfdmConfig) -> Vec<Complex<T>> {
    let step = 2.0 * PI * cfo * config.sampling_period() * (1.0 + sfo);
    rx.iter().enumerate().map(|(j, z)| narrow(widen(*z) * Complex::from_polar(1.0, -step * j as f64))).collect()
}

/// DFTs the payload symbols of a frame starting at sample `start`, with the
/// symbol spacing compressed by `1/(1+sfo)`. Each body window starts at the
/// integer part of its position; the fractional part is removed afterwards
/// as a per-subcarrier phase ramp.
pub fn frame_at<T: Real>(rx: &[Complex<T>], start: f64, sfo: f64, config: &OfdmConfig) -> Result<FrameGrid<T>> {
    let n = config.num_subcarriers;
    let l = config.symbol_length() as f64;
    if !(start >= 0.0) {
        return Err(IsacError::Framing(format!("frame start {start} before the first sample")));
    }
    let dft = Dft::<f64>::new(n);
    let mut grid = FrameGrid::zeros(config);
    for m in 0..config.num_symbols {
        let pos = start + ((m + 1) as f64 * l + config.cp_length as f64) / (1.0 + sfo);
        let q = (pos + 1e-9).floor();
        let mu = pos - q;
        let q = q as usize;
        if q + n > rx.len() {
            return Err(IsacError::Framing(format!("symbol {m} ends after the received buffer")));
        }
        let mut body: Vec<Complex<f64>> = rx[q..q + n].iter().map(|z| widen(*z)).collect();
        dft.forward(&mut body);
        for (k, (out, y)) in grid.symbol_mut(m).iter_mut().zip(&body).enumerate() {
            let ramp = if mu == 0.0 { Complex::new(1.0, 0.0) } else { Complex::from_polar(1.0, 2.0 * PI * signed_bin(k, n) as f64 * mu / n as f64) };
            *out = narrow(y * ramp);
        }
    }
    Ok(grid)
}

/// Applies the global estimates to one channel: carrier derotation, the
/// common frame start and the sampling-offset compensation, then DFT per
/// payload symbol.
pub fn correct_and_frame<T: Real>(rx: &[Complex<T>], global: &GlobalSync, config: &OfdmConfig) -> Result<FrameGrid<T>> {
    let corrected = derotate(rx, global.cfo, global.sfo, config);
    let start = (global.sto / config.sampling_period()).round();
    frame_at(&corrected, start, global.sfo, config)
}
