use num_complex::Complex;

use super::ofdm::{filter_symbols, SymbolLayout};
use crate::dsp::Dft;
use crate::error::{IsacError, Result};
use crate::geometry::SteeringVector;
use crate::scalar::{lit, wide, Real};

/// Regularisation of the pre-distortion inverse, relative to the peak `|H|²`.
pub const PREDISTORTION_REGULARISATION: f64 = 1e-6;

/// Copies `signal` onto every transmit channel, weighted by the sum of the
/// per-direction steering weights of that element.
pub fn apply_tx_beamforming<T: Real>(
    signal: &[Complex<T>],
    steering: &[SteeringVector<T>],
) -> Result<Vec<Vec<Complex<T>>>> {
    let weights = combined_weights(steering)?;
    Ok(weights.iter().map(|w| signal.iter().map(|x| *x * *w).collect()).collect())
}

/// Element-wise sum of several steering vectors.
pub fn combined_weights<T: Real>(steering: &[SteeringVector<T>]) -> Result<Vec<Complex<T>>> {
    let first = steering.first().ok_or_else(|| IsacError::Argument("no steering directions".into()))?;
    let n = first.weights.len();
    if steering.iter().any(|s| s.weights.len() != n) {
        return Err(IsacError::Dimension("steering vectors with different element counts".into()));
    }
    Ok((0..n).map(|i| steering.iter().map(|s| s.weights[i]).sum()).collect())
}

/// Pre-distorts one signal for each transmit channel with the regularised
/// inverse `conj(H)/(|H|² + ε)` of that channel's front-end response.
///
/// `min_magnitude` is the smallest acceptable `|H|` relative to the channel's
/// peak magnitude.
pub fn apply_tx_predistortion<T: Real>(
    time_signal: &[Complex<T>],
    afe_cfr: &[Vec<Complex<T>>],
    layout: &SymbolLayout,
    min_magnitude: f64,
) -> Result<Vec<Vec<Complex<T>>>> {
    let copies = vec![time_signal.to_vec(); afe_cfr.len()];
    predistort_channels(&copies, afe_cfr, layout, min_magnitude)
}

/// Channel-by-channel variant of [`apply_tx_predistortion`].
pub fn predistort_channels<T: Real>(
    channels: &[Vec<Complex<T>>],
    afe_cfr: &[Vec<Complex<T>>],
    layout: &SymbolLayout,
    min_magnitude: f64,
) -> Result<Vec<Vec<Complex<T>>>> {
    if channels.len() != afe_cfr.len() {
        return Err(IsacError::Dimension(format!("{} channels, {} responses", channels.len(), afe_cfr.len())));
    }
    let dft = Dft::new(layout.fft_len);
    channels
        .iter()
        .zip(afe_cfr)
        .enumerate()
        .map(|(ch, (signal, h))| {
            let inverse = regularised_inverse(h, ch, min_magnitude)?;
            let mut out = signal.clone();
            filter_symbols(&mut out, layout, &inverse, &dft)?;
            Ok(out)
        })
        .collect()
}

fn regularised_inverse<T: Real>(h: &[Complex<T>], channel: usize, min_magnitude: f64) -> Result<Vec<Complex<T>>> {
    let peak = h.iter().map(|z| wide(z.norm_sqr())).fold(0.0, f64::max);
    let floor = min_magnitude * peak.sqrt();
    if let Some((bin, z)) = h.iter().enumerate().find(|(_, z)| wide(z.norm()) < floor || peak == 0.0) {
        return Err(IsacError::Calibration { channel, bin, magnitude: wide(z.norm()) });
    }
    let eps = PREDISTORTION_REGULARISATION * peak;
    // Rescaled so the strongest bin is inverted exactly; a flat response then
    // passes through unchanged.
    let gain = lit::<T>((peak + eps) / peak);
    let eps = lit::<T>(eps);
    Ok(h.iter().map(|z| z.conj() * gain / (z.norm_sqr() + eps)).collect())
}
