use num_complex::Complex;

use crate::error::{IsacError, Result};
use crate::scalar::{lit, Real};
use crate::waveform::FrameGrid;

/// Smallest back-end magnitude, relative to its peak, accepted for
/// calibration.
pub const CALIBRATION_FLOOR: f64 = 1e-3;

/// Radar channel frequency responses, one grid per receive channel.
#[derive(Clone, Debug, PartialEq)]
pub struct RadarCfr<T: Real> {
    pub channels: Vec<FrameGrid<T>>,
    /// Cells left at zero because the transmit estimate vanished there.
    pub masked_cells: usize,
}

/// Divides every received cell by the transmit-frame estimate and by the
/// magnitude (only) of the channel's back-end response at that subcarrier.
/// The back-end phase stays in the data and is removed together with the
/// line-of-sight delay by fine synchronization.
pub fn build_radar_cfr<T: Real>(
    frames: &[FrameGrid<T>],
    x_hat: &FrameGrid<T>,
    abe_cfr: &[Vec<Complex<T>>],
) -> Result<RadarCfr<T>> {
    if frames.len() != abe_cfr.len() {
        return Err(IsacError::Dimension(format!("{} frames with {} back-end responses", frames.len(), abe_cfr.len())));
    }
    let n = x_hat.num_subcarriers();
    let masked_cells = x_hat.cells().iter().filter(|v| v.norm_sqr() == T::zero()).count();
    let channels = frames
        .iter()
        .zip(abe_cfr)
        .enumerate()
        .map(|(ch, (y, h))| {
            y.check_shape(x_hat)?;
            if h.len() != n {
                return Err(IsacError::Dimension(format!("{}-bin back-end response for {n} subcarriers", h.len())));
            }
            let mags: Vec<T> = h.iter().map(|v| v.norm()).collect();
            let peak = mags.iter().copied().fold(T::zero(), T::max);
            let floor = peak * lit::<T>(CALIBRATION_FLOOR);
            if let Some((bin, m)) = mags.iter().enumerate().find(|(_, m)| !(**m > floor)) {
                return Err(IsacError::Calibration { channel: ch, bin, magnitude: m.to_f64().unwrap_or(f64::NAN) });
            }
            let mut d = y.zeros_like();
            for m in 0..y.num_symbols() {
                for (k, &mag) in mags.iter().enumerate() {
                    let x = x_hat.get(k, m);
                    if x.norm_sqr() != T::zero() {
                        d.set(k, m, y.get(k, m) / (x * mag));
                    }
                }
            }
            Ok(d)
        })
        .collect::<Result<_>>()?;
    Ok(RadarCfr { channels, masked_cells })
}
