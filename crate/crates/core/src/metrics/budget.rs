use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::consts::BOLTZMANN;
use crate::dsp::power_db;
use crate::error::{IsacError, Result};

/// Bistatic radar link budget for one point target.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkBudget {
    /// Per transmit element, W.
    pub tx_power: f64,
    /// Single-element gains, linear.
    pub tx_gain: f64,
    pub rx_gain: f64,
    /// Radar cross section, m².
    pub rcs: f64,
    pub tx_range: f64,
    pub rx_range: f64,
    pub wavelength: f64,
    pub bandwidth: f64,
    /// Kelvin.
    pub temperature: f64,
    /// Linear.
    pub noise_figure: f64,
}

impl LinkBudget {
    fn validate(&self) -> Result<()> {
        let v = [
            self.tx_power,
            self.tx_gain,
            self.rx_gain,
            self.rcs,
            self.tx_range,
            self.rx_range,
            self.wavelength,
            self.bandwidth,
            self.temperature,
            self.noise_figure,
        ];
        if v.iter().all(|x| x.is_finite() && *x > 0.0) {
            Ok(())
        } else {
            Err(IsacError::Argument(format!("link budget entries must be positive: {self:?}")))
        }
    }

    /// `k_B·B·T·NF`, W.
    pub fn noise_power(&self) -> f64 {
        BOLTZMANN * self.bandwidth * self.temperature * self.noise_figure
    }
}

/// Predicted radar image SNR in dB. With `with_doa_gain` the receive array
/// gain is included, which raises the result by exactly `10·log10(num_rx)`.
pub fn image_snr(budget: &LinkBudget, num_tx: usize, num_rx: usize, processing_gain: f64, with_doa_gain: bool) -> Result<f64> {
    budget.validate()?;
    if num_tx == 0 || num_rx == 0 || !(processing_gain > 0.0) {
        return Err(IsacError::Argument(format!("{num_tx} tx, {num_rx} rx, gain {processing_gain}")));
    }
    let rx_array = if with_doa_gain { num_rx as f64 } else { 1.0 };
    let signal = budget.tx_power
        * (num_tx as f64 * budget.tx_gain)
        * (rx_array * budget.rx_gain)
        * budget.rcs
        * budget.wavelength.powi(2)
        * processing_gain;
    let spreading = (4.0 * PI).powi(3) * budget.tx_range.powi(2) * budget.rx_range.powi(2);
    Ok(power_db(signal / (spreading * budget.noise_power())))
}

/// Amplitude factor of a point reflector between two isotropic elements:
/// `|α|² = G_Tx·G_Rx·σ·λ²/((4π)³·R_Tx²·R_Rx²)`.
pub fn reflection_attenuation(budget: &LinkBudget) -> Result<f64> {
    budget.validate()?;
    let p = budget.tx_gain * budget.rx_gain * budget.rcs * budget.wavelength.powi(2)
        / ((4.0 * PI).powi(3) * budget.tx_range.powi(2) * budget.rx_range.powi(2));
    Ok(p.sqrt())
}
