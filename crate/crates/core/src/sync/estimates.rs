use serde::{Deserialize, Serialize};

use crate::error::{IsacError, Result};

/// Offsets estimated on one receive channel.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSync {
    /// Frame start relative to the first received sample, seconds.
    pub sto: f64,
    /// Hz.
    pub cfo: f64,
    pub sfo: f64,
    /// Start offset left after framing at the global start, seconds.
    pub residual_sto: f64,
    /// Hz.
    pub residual_cfo: f64,
}

/// Offsets shared by all receive channels.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlobalSync {
    pub sto: f64,
    pub cfo: f64,
    pub sfo: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyncEstimates {
    pub channels: Vec<ChannelSync>,
    pub global: GlobalSync,
}

/// Averages carrier and sampling offsets over channels and takes the earliest
/// frame start, so that no channel's frame begins before the common window.
pub fn fuse_global(per_channel: Vec<ChannelSync>) -> Result<SyncEstimates> {
    if per_channel.is_empty() {
        return Err(IsacError::Argument("no channels to fuse".into()));
    }
    let n = per_channel.len() as f64;
    let cfo = per_channel.iter().map(|c| c.cfo).sum::<f64>() / n;
    let sfo = per_channel.iter().map(|c| c.sfo).sum::<f64>() / n;
    let sto = per_channel.iter().map(|c| c.sto).fold(f64::INFINITY, f64::min);
    let channels = per_channel.into_iter().map(|c| ChannelSync { residual_sto: c.sto - sto, ..c }).collect();
    Ok(SyncEstimates { channels, global: GlobalSync { sto, cfo, sfo } })
}
