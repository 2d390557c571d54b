//! Distributed synchronization of the receive channels: per-channel
//! acquisition, fusion into common offsets, correction, and pilot-based fine
//! tuning that aligns the line-of-sight path on every channel.

mod acquisition;
mod estimates;
mod fine;
mod framing;
mod sfo;

pub use acquisition::{coarse_cfo_per_channel, sto_per_channel, DEFAULT_PLATEAU_THRESHOLD, DEFAULT_STO_THRESHOLD_DB};
pub use estimates::{fuse_global, ChannelSync, GlobalSync, SyncEstimates};
pub use fine::{fine_tune_residuals, FineTuneOptions, FineTuneReport};
pub use framing::{correct_and_frame, derotate, frame_at};
pub use sfo::sfo_per_channel;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::scalar::Real;
use crate::waveform::{FrameGrid, OfdmConfig};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyncOptions {
    pub plateau_threshold: f64,
    pub sto_threshold_db: f64,
    /// `None` disables pilot fine tuning.
    pub fine: Option<FineTuneOptions>,
}

impl Default for SyncOptions {
    fn default() -> Self {
        Self {
            plateau_threshold: DEFAULT_PLATEAU_THRESHOLD,
            sto_threshold_db: DEFAULT_STO_THRESHOLD_DB,
            fine: Some(FineTuneOptions::default()),
        }
    }
}

/// Frames and estimates of a full synchronization pass.
#[derive(Clone, Debug)]
pub struct SyncOutput<T: Real> {
    pub estimates: SyncEstimates,
    pub frames: Vec<FrameGrid<T>>,
    pub fine: Vec<FineTuneReport>,
}

/// Offsets of one channel measured on its own: carrier offset, frame start
/// after removing that offset, then the clock offset from a frame taken at
/// that start.
pub fn estimate_channel<T: Real>(
    rx: &[Complex<T>],
    preamble: &[Complex<T>],
    reference: &FrameGrid<T>,
    config: &OfdmConfig,
    options: &SyncOptions,
) -> Result<ChannelSync> {
    let cfo = coarse_cfo_per_channel(rx, config, options.plateau_threshold)?;
    let derotated = derotate(rx, cfo, 0.0, config);
    let sto = sto_per_channel(&derotated, preamble, config, options.sto_threshold_db)?;
    let nominal = frame_at(&derotated, (sto / config.sampling_period()).round(), 0.0, config)?;
    let sfo = sfo_per_channel(&nominal, reference, config)?;
    Ok(ChannelSync { sto, cfo, sfo, residual_sto: 0.0, residual_cfo: 0.0 })
}

/// Runs acquisition on every channel, fuses the estimates, frames every
/// channel with the common offsets and optionally fine tunes each channel.
pub fn synchronize<T: Real>(
    rx: &[Vec<Complex<T>>],
    preamble: &[Complex<T>],
    reference: &FrameGrid<T>,
    config: &OfdmConfig,
    options: &SyncOptions,
) -> Result<SyncOutput<T>> {
    let per_channel: Vec<ChannelSync> = rx
        .par_iter()
        .map(|r| estimate_channel(r, preamble, reference, config, options))
        .collect::<Result<_>>()?;
    let mut estimates = fuse_global(per_channel)?;
    let mut frames: Vec<FrameGrid<T>> =
        rx.par_iter().map(|r| correct_and_frame(r, &estimates.global, config)).collect::<Result<_>>()?;
    let fine = match &options.fine {
        Some(opts) => {
            let reports = fine_tune_residuals(&mut frames, reference, config, opts)?;
            for (c, r) in estimates.channels.iter_mut().zip(&reports) {
                if r.skipped.is_none() {
                    c.residual_sto = r.residual_sto;
                    c.residual_cfo = r.residual_cfo;
                }
            }
            reports
        }
        None => Vec::new(),
    };
    Ok(SyncOutput { estimates, frames, fine })
}
