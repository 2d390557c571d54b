use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{IsacError, Result};

/// Constellation used on data and pilot cells.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modulation {
    #[default]
    Qpsk,
}

impl Modulation {
    pub fn bits_per_symbol(self) -> usize {
        match self {
            Modulation::Qpsk => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    None,
    #[default]
    Ldpc,
}

/// Forward error correction settings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    pub kind: CodeKind,
    #[serde(with = "rate_text")]
    pub rate: Ratio<u32>,
    /// Codeword length in bits.
    pub block_length: usize,
}

impl Default for CodeSpec {
    fn default() -> Self {
        Self { kind: CodeKind::Ldpc, rate: Ratio::new(2, 3), block_length: 1536 }
    }
}

impl CodeSpec {
    pub fn uncoded() -> Self {
        Self { kind: CodeKind::None, rate: Ratio::new(1, 1), block_length: 0 }
    }

    pub fn rate_f64(&self) -> f64 {
        f64::from(*self.rate.numer()) / f64::from(*self.rate.denom())
    }

    /// Information bits per codeword.
    pub fn info_length(&self) -> usize {
        self.block_length * *self.rate.numer() as usize / *self.rate.denom() as usize
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.rate;
        if *r.numer() == 0 || r.numer() > r.denom() {
            return Err(IsacError::Configuration(format!("code rate {r} outside (0, 1]")));
        }
        match self.kind {
            CodeKind::None if *r.numer() != *r.denom() => {
                Err(IsacError::Configuration("uncoded operation requires rate 1".into()))
            }
            CodeKind::None => Ok(()),
            CodeKind::Ldpc => {
                let n = self.block_length;
                if r.numer() == r.denom() {
                    return Err(IsacError::Configuration("LDPC code needs rate below 1".into()));
                }
                if n == 0 || !(n * *r.numer() as usize).is_multiple_of(*r.denom() as usize) {
                    return Err(IsacError::Configuration(format!(
                        "block length {n} not compatible with rate {r}"
                    )));
                }
                if n - self.info_length() < 3 {
                    return Err(IsacError::Configuration("LDPC code needs at least 3 parity bits".into()));
                }
                Ok(())
            }
        }
    }
}

mod rate_text {
    use num_rational::Ratio;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Ratio<u32>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio<u32>, D::Error> {
        let text = String::deserialize(d)?;
        let (a, b) = text.split_once('/').unwrap_or((text.as_str(), "1"));
        let numer: u32 = a.trim().parse().map_err(D::Error::custom)?;
        let denom: u32 = b.trim().parse().map_err(D::Error::custom)?;
        if denom == 0 {
            return Err(D::Error::custom("zero denominator in code rate"));
        }
        Ok(Ratio::new(numer, denom))
    }
}

/// OFDM numerology and pilot layout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OfdmConfig {
    pub num_subcarriers: usize,
    pub num_symbols: usize,
    pub cp_length: usize,
    /// Occupied (and sampled) bandwidth in Hz.
    pub bandwidth: f64,
    pub pilot_subcarrier_spacing: usize,
    pub pilot_symbol_spacing: usize,
    #[serde(default)]
    pub modulation: Modulation,
    #[serde(default)]
    pub code: CodeSpec,
}

impl Default for OfdmConfig {
    fn default() -> Self {
        Self::full_scale()
    }
}

impl OfdmConfig {
    /// Full-size numerology: 2048 subcarriers at 240 kHz, 512 symbols.
    pub fn full_scale() -> Self {
        Self {
            num_subcarriers: 2048,
            num_symbols: 512,
            cp_length: 512,
            bandwidth: 491.52e6,
            pilot_subcarrier_spacing: 2,
            pilot_symbol_spacing: 2,
            modulation: Modulation::Qpsk,
            code: CodeSpec::default(),
        }
    }

    /// Reduced frame for minute-scale Monte-Carlo runs. Keeps the full
    /// subcarrier count and cyclic prefix so delay tolerance is unchanged and
    /// only shortens the frame in slow time.
    pub fn desk() -> Self {
        Self { num_symbols: 16, ..Self::full_scale() }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_subcarriers;
        let m = self.num_symbols;
        if !n.is_power_of_two() || n < 2 {
            return Err(IsacError::Configuration(format!("subcarrier count {n} is not a power of two")));
        }
        if !m.is_power_of_two() {
            return Err(IsacError::Configuration(format!("symbol count {m} is not a power of two")));
        }
        if self.cp_length > n {
            return Err(IsacError::Configuration(format!("cyclic prefix {} longer than symbol", self.cp_length)));
        }
        if !(self.bandwidth.is_finite() && self.bandwidth > 0.0) {
            return Err(IsacError::Configuration(format!("bandwidth {} Hz", self.bandwidth)));
        }
        let (dn, dm) = (self.pilot_subcarrier_spacing, self.pilot_symbol_spacing);
        if dn == 0 || !n.is_multiple_of(dn) || dm == 0 || !m.is_multiple_of(dm) {
            return Err(IsacError::Configuration(format!(
                "pilot spacing ({dn}, {dm}) must divide the grid ({n}, {m})"
            )));
        }
        self.code.validate()
    }

    /// Δf = B/N.
    pub fn subcarrier_spacing(&self) -> f64 {
        self.bandwidth / self.num_subcarriers as f64
    }

    /// T_s = 1/B.
    pub fn sampling_period(&self) -> f64 {
        1.0 / self.bandwidth
    }

    /// Samples per OFDM symbol including the cyclic prefix.
    pub fn symbol_length(&self) -> usize {
        self.num_subcarriers + self.cp_length
    }

    /// Duration of one OFDM symbol including the cyclic prefix.
    pub fn symbol_duration(&self) -> f64 {
        self.symbol_length() as f64 * self.sampling_period()
    }

    /// Samples in one frame: preamble plus `M` payload symbols.
    pub fn frame_length(&self) -> usize {
        (self.num_symbols + 1) * self.symbol_length()
    }

    pub fn frame_duration(&self) -> f64 {
        self.frame_length() as f64 * self.sampling_period()
    }

    pub fn num_pilot_subcarriers(&self) -> usize {
        self.num_subcarriers / self.pilot_subcarrier_spacing
    }

    pub fn num_pilot_symbols(&self) -> usize {
        self.num_symbols / self.pilot_symbol_spacing
    }

    pub fn num_pilot_cells(&self) -> usize {
        self.num_pilot_subcarriers() * self.num_pilot_symbols()
    }

    pub fn num_data_cells(&self) -> usize {
        self.num_subcarriers * self.num_symbols - self.num_pilot_cells()
    }

    pub fn pilot_fraction(&self) -> f64 {
        self.num_pilot_cells() as f64 / (self.num_subcarriers * self.num_symbols) as f64
    }

    pub fn is_pilot(&self, subcarrier: usize, symbol: usize) -> bool {
        subcarrier.is_multiple_of(self.pilot_subcarrier_spacing) && symbol.is_multiple_of(self.pilot_symbol_spacing)
    }

    /// Baseband frequency of DFT bin `k` (negative for the upper half).
    pub fn subcarrier_frequency(&self, k: usize) -> f64 {
        crate::dsp::signed_bin(k, self.num_subcarriers) as f64 * self.subcarrier_spacing()
    }
}
