use serde::{Deserialize, Serialize};

use crate::consts::DB_FLOOR;
use crate::dsp::power_db;
use crate::error::Result;
use crate::scalar::Real;
use crate::waveform::FrameGrid;

/// Error vector magnitude over data cells.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evm {
    pub mean_db: f64,
    /// Standard deviation of the per-subcarrier EVM in dB.
    pub spread_db: f64,
}

pub fn evm<T: Real>(frame: &FrameGrid<T>, reference: &FrameGrid<T>) -> Result<Evm> {
    frame.check_shape(reference)?;
    let n = frame.num_subcarriers();
    let mut err = vec![0.0; n];
    let mut sig = vec![0.0; n];
    for (k, m) in reference.data_positions() {
        let x = crate::scalar::widen(reference.get(k, m));
        let y = crate::scalar::widen(frame.get(k, m));
        err[k] += (y - x).norm_sqr();
        sig[k] += x.norm_sqr();
    }
    let ratio_db = |e: f64, s: f64| if s > 0.0 { power_db(e / s) } else { DB_FLOOR };
    let mean_db = ratio_db(err.iter().sum(), sig.iter().sum());
    let per_sc: Vec<f64> = err.iter().zip(&sig).filter(|(_, &s)| s > 0.0).map(|(&e, &s)| ratio_db(e, s)).collect();
    let spread_db = if per_sc.len() > 1 {
        let mu = per_sc.iter().sum::<f64>() / per_sc.len() as f64;
        (per_sc.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / per_sc.len() as f64).sqrt()
    } else {
        0.0
    };
    Ok(Evm { mean_db, spread_db })
}
