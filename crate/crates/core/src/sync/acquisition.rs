use std::f64::consts::PI;

use num_complex::Complex;

use crate::dsp::Dft;
use crate::error::{IsacError, Result};
use crate::scalar::{widen, Real};
use crate::waveform::OfdmConfig;

/// Smallest timing-metric peak accepted as a preamble.
pub const DEFAULT_PLATEAU_THRESHOLD: f64 = 0.5;
/// Required cross-correlation peak above the mean correlation power, dB.
pub const DEFAULT_STO_THRESHOLD_DB: f64 = 6.0;
/// Windows with less energy than this fraction of the strongest window are
/// ignored by the timing metric.
const ENERGY_GATE: f64 = 0.01;
/// Timing estimates within this many samples above an integer round to it.
const FLOOR_TOLERANCE: f64 = 0.01;

/// Carrier offset from the half-symbol repetition of the preamble: the lag
/// autocorrelation is accumulated over the timing-metric plateau and its
/// angle converted to Hz. Unambiguous for offsets below one subcarrier
/// spacing in magnitude.
pub fn coarse_cfo_per_channel<T: Real>(rx: &[Complex<T>], config: &OfdmConfig, threshold: f64) -> Result<f64> {
    let half = config.num_subcarriers / 2;
    if rx.len() < 2 * half + 1 {
        return Err(IsacError::PreambleNotFound { metric: 0.0 });
    }
    let x: Vec<Complex<f64>> = rx.iter().map(|z| widen(*z)).collect();
    let windows = x.len() - 2 * half + 1;
    let mut lag = vec![Complex::new(0.0, 0.0); x.len() - half + 1];
    let mut energy = vec![0.0; x.len() + 1];
    for j in 0..x.len() {
        energy[j + 1] = energy[j] + x[j].norm_sqr();
        if j + half < x.len() {
            lag[j + 1] = lag[j] + x[j].conj() * x[j + half];
        }
    }
    let p = |d: usize| lag[d + half] - lag[d];
    let first = |d: usize| energy[d + half] - energy[d];
    let r = |d: usize| energy[d + 2 * half] - energy[d + half];
    let max_r = (0..windows).map(r).fold(0.0, f64::max);
    if max_r <= 0.0 {
        return Err(IsacError::PreambleNotFound { metric: 0.0 });
    }
    let metric: Vec<f64> =
        (0..windows)
            .map(|d| {
                // Normalising by both halves bounds the metric by one.
                let (a, b) = (first(d), r(d));
                if b >= ENERGY_GATE * max_r && a >= ENERGY_GATE * max_r { p(d).norm_sqr() / (a * b) } else { 0.0 }
            })
            .collect();
    let (peak_at, &peak) = metric.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty");
    if !(peak >= threshold) {
        return Err(IsacError::PreambleNotFound { metric: peak });
    }
    let level = 0.9 * peak;
    let mut lo = peak_at;
    while lo > 0 && metric[lo - 1] >= level {
        lo -= 1;
    }
    let mut hi = peak_at;
    while hi + 1 < windows && metric[hi + 1] >= level {
        hi += 1;
    }
    // The region above 90 % leaks into the neighbouring symbol at its ends;
    // its middle third lies on the clean plateau.
    let third = (hi - lo) / 3;
    let acc: Complex<f64> = (lo + third..=hi - third).map(p).sum();
    Ok(acc.arg() / (2.0 * PI * half as f64 * config.sampling_period()))
}

/// Frame start of `rx` from cross-correlation with the preamble, in seconds
/// from the first received sample. The sub-sample peak position is rounded
/// towards the earlier sample so the fractional remainder is always
/// non-negative; `preamble` includes its cyclic prefix.
pub fn sto_per_channel<T: Real>(
    rx: &[Complex<T>],
    preamble: &[Complex<T>],
    config: &OfdmConfig,
    threshold_db: f64,
) -> Result<f64> {
    let n = config.num_subcarriers;
    let cp = config.cp_length;
    if preamble.len() != n + cp {
        return Err(IsacError::Dimension(format!("preamble of {} samples", preamble.len())));
    }
    if rx.len() < n {
        return Err(IsacError::SyncFailure { peak_db: f64::NEG_INFINITY, threshold_db });
    }
    let corr = cross_correlate(rx, &preamble[cp..]);
    let mags: Vec<f64> = corr.iter().map(|c| c.norm()).collect();
    let (peak_at, &peak) = mags.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty");
    let floor = mags.iter().map(|m| m * m).sum::<f64>() / mags.len() as f64;
    let peak_db = 10.0 * (peak * peak / floor).log10();
    if !(peak_db >= threshold_db) {
        return Err(IsacError::SyncFailure { peak_db, threshold_db });
    }
    // Sinc-shaped peak: neighbours projected on the peak phase are
    // δ/(1−δ) on the right and −δ/(1+δ) on the left. Their signs pick the
    // side even when both magnitudes are at sidelobe level.
    let c0 = corr[peak_at];
    let project = |i: Option<usize>| i.and_then(|i| corr.get(i)).map_or(0.0, |c| (c * c0.conj()).re / (peak * peak));
    let left = project(peak_at.checked_sub(1));
    let right = project(Some(peak_at + 1));
    let position = if right.abs() >= left.abs() {
        peak_at as f64 + right / (1.0 + right)
    } else {
        peak_at as f64 - left / (1.0 + left)
    };
    let body = (position + FLOOR_TOLERANCE).floor();
    if body < cp as f64 {
        return Err(IsacError::Framing(format!("preamble detected {body} samples into the buffer, before its cyclic prefix")));
    }
    Ok((body - cp as f64) * config.sampling_period())
}

/// `c[d] = Σ_m conj(t[m])·x[d+m]` for every lag `d` with the template inside `x`.
fn cross_correlate<T: Real>(x: &[Complex<T>], template: &[Complex<T>]) -> Vec<Complex<f64>> {
    let size = (x.len() + template.len()).next_power_of_two();
    let dft = Dft::<f64>::new(size);
    let mut a: Vec<Complex<f64>> = x.iter().map(|z| widen(*z)).collect();
    a.resize(size, Complex::new(0.0, 0.0));
    let mut b: Vec<Complex<f64>> = template.iter().map(|z| widen(*z)).collect();
    b.resize(size, Complex::new(0.0, 0.0));
    dft.forward(&mut a);
    dft.forward(&mut b);
    for (u, v) in a.iter_mut().zip(&b) {
        *u *= v.conj();
    }
    dft.inverse(&mut a);
    a.truncate(x.len() - template.len() + 1);
    a
}
