use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::consts::SPEED_OF_LIGHT;
use crate::error::{IsacError, Result};
use crate::waveform::OfdmConfig;

/// System-level figures derived from the numerology and array size.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsacParams {
    /// Information rate at full duty cycle, bit/s.
    pub comm_rate: f64,
    /// Range–Doppler gain times the beamforming gain, dB.
    pub processing_gain_db: f64,
    /// Range–Doppler gain alone (`N·M`), dB.
    pub range_doppler_gain_db: f64,
    pub range_resolution: f64,
    pub max_unambiguous_range: f64,
    pub max_isi_free_range: f64,
    pub doppler_resolution: f64,
    /// Symmetric bound, Hz.
    pub max_unambiguous_doppler: f64,
    /// Symmetric bound (a tenth of the subcarrier spacing), Hz.
    pub max_ici_free_doppler: f64,
    /// Radians.
    pub azimuth_resolution: f64,
    /// Symmetric bound, radians.
    pub max_unambiguous_azimuth: f64,
}

/// One line of the parameter table in display units.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParamRow {
    pub name: &'static str,
    pub value: f64,
    pub unit: &'static str,
    pub decimals: usize,
    /// Printed with a ± sign.
    pub symmetric: bool,
}

impl ParamRow {
    pub fn formatted(&self) -> String {
        let sign = if self.symmetric { "±" } else { "" };
        format!("{sign}{:.*} {}", self.decimals, self.value, self.unit)
    }
}

impl IsacParams {
    /// The figures in the order and units of the usual parameter table.
    pub fn rows(&self) -> Vec<ParamRow> {
        let row = |name, value, unit, decimals, symmetric| ParamRow { name, value, unit, decimals, symmetric };
        vec![
            row("communication rate", self.comm_rate / 1e9, "Gbit/s", 2, false),
            row("processing gain", self.processing_gain_db, "dB", 2, false),
            row("range resolution", self.range_resolution, "m", 2, false),
            row("max. unambiguous range", self.max_unambiguous_range, "m", 2, false),
            row("max. ISI-free range", self.max_isi_free_range, "m", 2, false),
            row("Doppler shift resolution", self.doppler_resolution, "Hz", 0, false),
            row("max. unambiguous Doppler shift", self.max_unambiguous_doppler / 1e3, "kHz", 0, true),
            row("max. ICI-free Doppler shift", self.max_ici_free_doppler / 1e3, "kHz", 0, true),
            row("azimuth resolution", self.azimuth_resolution.to_degrees(), "°", 2, false),
            row("max. unambiguous azimuth", self.max_unambiguous_azimuth.to_degrees(), "°", 0, true),
        ]
    }
}

pub fn derive_isac_params(
    config: &OfdmConfig,
    num_rx: usize,
    code_rate: Ratio<u32>,
    bits_per_symbol: usize,
) -> Result<IsacParams> {
    config.validate()?;
    if num_rx == 0 || *code_rate.numer() == 0 || code_rate > Ratio::new(1, 1) || bits_per_symbol == 0 {
        return Err(IsacError::Argument(format!(
            "{num_rx} receive channels, rate {code_rate}, {bits_per_symbol} bits per symbol"
        )));
    }
    let n = config.num_subcarriers as f64;
    let m = config.num_symbols as f64;
    let b = config.bandwidth;
    let t_sym = config.symbol_duration();
    let rate = f64::from(*code_rate.numer()) / f64::from(*code_rate.denom());
    let range_resolution = SPEED_OF_LIGHT / b;
    Ok(IsacParams {
        comm_rate: bits_per_symbol as f64 * rate * (1.0 - config.pilot_fraction()) * n / t_sym,
        processing_gain_db: 10.0 * (n * m * num_rx as f64).log10(),
        range_doppler_gain_db: 10.0 * (n * m).log10(),
        range_resolution,
        max_unambiguous_range: range_resolution * n,
        max_isi_free_range: range_resolution * config.cp_length as f64,
        doppler_resolution: 1.0 / (m * t_sym),
        max_unambiguous_doppler: 1.0 / (2.0 * t_sym),
        max_ici_free_doppler: config.subcarrier_spacing() / 10.0,
        azimuth_resolution: 2.0 / num_rx as f64,
        max_unambiguous_azimuth: std::f64::consts::FRAC_PI_2,
    })
}
