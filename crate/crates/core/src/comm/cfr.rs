use num_complex::Complex;

use crate::dsp::signed_bin;
use crate::error::{IsacError, Result};
use crate::scalar::{lit, Real};
use crate::waveform::FrameGrid;

/// Interpolated channel frequency response of one receive channel.
#[derive(Clone, Debug, PartialEq)]
pub struct CommCfr<T: Real> {
    pub grid: FrameGrid<T>,
}

/// Linear interpolation weights placing `target` between the anchors
/// `anchors` (ascending); targets outside hold the nearest anchor.
fn linear_weights(anchors: &[i64], target: i64) -> (usize, usize, f64) {
    match anchors.binary_search(&target) {
        Ok(i) => (i, i, 0.0),
        Err(0) => (0, 0, 0.0),
        Err(i) if i == anchors.len() => (i - 1, i - 1, 0.0),
        Err(i) => {
            let (a, b) = (anchors[i - 1], anchors[i]);
            (i - 1, i, (target - a) as f64 / (b - a) as f64)
        }
    }
}

/// Least-squares channel estimates at the pilot cells, linearly interpolated
/// over frequency (ascending baseband frequency, nearest-pilot hold beyond the
/// outermost pilots) and then over time (hold after the last pilot symbol).
/// `reference` carries the known pilot values.
pub fn estimate_cfr<T: Real>(frame: &FrameGrid<T>, reference: &FrameGrid<T>) -> Result<CommCfr<T>> {
    frame.check_shape(reference)?;
    let n = frame.num_subcarriers();
    let pattern = frame.pilots();
    let pilot_symbols: Vec<usize> = (0..frame.num_symbols()).step_by(pattern.symbol_spacing).collect();
    // Pilot subcarriers sorted by baseband frequency.
    let mut pilot_bins: Vec<usize> = (0..n).step_by(pattern.subcarrier_spacing).collect();
    pilot_bins.sort_by_key(|&k| signed_bin(k, n));
    let anchors: Vec<i64> = pilot_bins.iter().map(|&k| signed_bin(k, n)).collect();

    let mut along_freq: Vec<Vec<Complex<T>>> = Vec::with_capacity(pilot_symbols.len());
    for &m in &pilot_symbols {
        let ls: Vec<Complex<T>> = pilot_bins
            .iter()
            .map(|&k| {
                let x = reference.get(k, m);
                if x.norm_sqr() == T::zero() {
                    Err(IsacError::DegeneratePilot { subcarrier: k, symbol: m })
                } else {
                    Ok(frame.get(k, m) / x)
                }
            })
            .collect::<Result<_>>()?;
        let row = (0..n)
            .map(|k| {
                let (a, b, w) = linear_weights(&anchors, signed_bin(k, n));
                ls[a] * lit::<T>(1.0 - w) + ls[b] * lit::<T>(w)
            })
            .collect();
        along_freq.push(row);
    }

    let times: Vec<i64> = pilot_symbols.iter().map(|&m| m as i64).collect();
    let mut grid = frame.zeros_like();
    for m in 0..frame.num_symbols() {
        let (a, b, w) = linear_weights(&times, m as i64);
        for (k, v) in grid.symbol_mut(m).iter_mut().enumerate() {
            *v = along_freq[a][k] * lit::<T>(1.0 - w) + along_freq[b][k] * lit::<T>(w);
        }
    }
    Ok(CommCfr { grid })
}
