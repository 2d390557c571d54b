use std::f64::consts::PI;

use num_complex::Complex;

use crate::dsp::signed_bin;
use crate::error::{IsacError, Result};
use crate::scalar::{widen, Real};
use crate::waveform::{FrameGrid, OfdmConfig};

/// Weighted least-squares slope of `y` against `x`.
pub(crate) fn weighted_slope(x: &[f64], y: &[f64], w: &[f64]) -> Option<(f64, f64)> {
    let sw: f64 = w.iter().sum();
    if !(sw > 0.0) {
        return None;
    }
    let mx = x.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / sw;
    let my = y.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / sw;
    let sxx: f64 = x.iter().zip(w).map(|(a, b)| b * (a - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).zip(w).map(|((a, c), b)| b * (a - mx) * (c - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Unwraps a phase sequence in place.
pub(crate) fn unwrap(phases: &mut [f64]) {
    for i in 1..phases.len() {
        let d = phases[i] - phases[i - 1];
        phases[i] -= (2.0 * PI) * (d / (2.0 * PI)).round();
    }
}

/// Sampling frequency offset from a frame demodulated at nominal (unstretched)
/// symbol positions.
///
/// A clock offset δ moves symbol `m` by about `-δ·m·L` samples, which turns into
/// a phase drift over symbols proportional to the subcarrier index. The drift
/// rate is fitted per pilot subcarrier, and its slope across subcarriers gives
/// δ; a drift common to all subcarriers (residual carrier offset) is absorbed
/// by the intercept.
pub fn sfo_per_channel<T: Real>(grid: &FrameGrid<T>, reference: &FrameGrid<T>, config: &OfdmConfig) -> Result<f64> {
    grid.check_shape(reference)?;
    let pattern = grid.pilots();
    let symbols: Vec<usize> = (0..grid.num_symbols()).step_by(pattern.symbol_spacing).collect();
    if symbols.len() < 2 {
        return Err(IsacError::InsufficientPilots { available: symbols.len(), required: 2 });
    }
    let n = grid.num_subcarriers();
    let l = config.symbol_length() as f64;
    let times: Vec<f64> = symbols.iter().map(|&m| m as f64 * l).collect();
    let (mut ks, mut rates, mut weights) = (Vec::new(), Vec::new(), Vec::new());
    for k in (0..n).step_by(pattern.subcarrier_spacing) {
        let z: Vec<Complex<f64>> = symbols.iter().map(|&m| widen(grid.get(k, m)) * widen(reference.get(k, m)).conj()).collect();
        let power = z.iter().map(|v| v.norm_sqr()).sum::<f64>() / z.len() as f64;
        if !(power > 0.0) {
            continue;
        }
        let mut phase: Vec<f64> = z.iter().map(|v| v.arg()).collect();
        unwrap(&mut phase);
        let ones = vec![1.0; phase.len()];
        if let Some((slope, _)) = weighted_slope(&times, &phase, &ones) {
            ks.push(signed_bin(k, n) as f64);
            rates.push(slope);
            weights.push(power);
        }
    }
    let (gradient, _) = weighted_slope(&ks, &rates, &weights)
        .ok_or(IsacError::InsufficientPilots { available: ks.len(), required: 2 })?;
    let u = gradient * n as f64 / (2.0 * PI);
    Ok(u / (1.0 - u))
}
