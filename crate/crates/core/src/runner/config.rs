use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channel::{Path, PathSet};
use crate::consts::SPEED_OF_LIGHT;
use crate::error::{IsacError, Result};
use crate::geometry::Angle;
use crate::metrics::{derive_isac_params, IsacParams};
use crate::radar::{WindowKind, WindowSet};
use crate::sync::SyncOptions;
use crate::waveform::OfdmConfig;

/// Numerology preset.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// Full subcarrier count and cyclic prefix, 16 symbols.
    #[default]
    Desk,
    /// The 2048 × 512 frame.
    Full,
}

impl Profile {
    pub fn ofdm(self) -> OfdmConfig {
        match self {
            Profile::Desk => OfdmConfig::desk(),
            Profile::Full => OfdmConfig::full_scale(),
        }
    }
}

/// Direct path between the arrays.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LosSpec {
    pub distance_m: f64,
    pub dod_deg: f64,
    pub doa_deg: f64,
    /// Amplitude factor; replaced when an SNR is configured.
    #[serde(default = "one")]
    pub attenuation: f64,
}

/// Point reflector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    pub tx_range_m: f64,
    pub rx_range_m: f64,
    #[serde(default)]
    pub doppler_hz: f64,
    pub dod_deg: f64,
    pub doa_deg: f64,
    /// Power relative to the direct path, dB.
    pub relative_power_db: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneSpec {
    pub los: LosSpec,
    #[serde(default)]
    pub targets: Vec<TargetSpec>,
}

impl Default for SceneSpec {
    fn default() -> Self {
        Self { los: LosSpec { distance_m: 0.55, dod_deg: 0.0, doa_deg: 0.0, attenuation: 1.0 }, targets: Vec::new() }
    }
}

impl SceneSpec {
    /// Paths with the direct path scaled to `los_attenuation`.
    pub fn paths(&self, los_attenuation: f64) -> Result<PathSet> {
        let los = &self.los;
        let mut paths = vec![Path::line_of_sight(
            los_attenuation,
            los.distance_m,
            Angle::from_degrees(los.dod_deg),
            Angle::from_degrees(los.doa_deg),
        )];
        for t in &self.targets {
            if t.tx_range_m + t.rx_range_m < los.distance_m {
                return Err(IsacError::Configuration(format!(
                    "target path {} m shorter than the direct path",
                    t.tx_range_m + t.rx_range_m
                )));
            }
            paths.push(Path::scatterer(
                los_attenuation * 10f64.powf(t.relative_power_db / 20.0),
                t.tx_range_m,
                t.rx_range_m,
                t.doppler_hz,
                Angle::from_degrees(t.dod_deg),
                Angle::from_degrees(t.doa_deg),
            ));
        }
        PathSet::new(paths)
    }

    /// Relative bistatic range of every target, m.
    pub fn relative_ranges(&self) -> Vec<f64> {
        self.targets.iter().map(|t| t.tx_range_m + t.rx_range_m - self.los.distance_m).collect()
    }
}

/// Receive back-end model.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AbeSpec {
    #[default]
    Ideal,
    /// Seeded multi-tap responses with dominant delays up to 3 ns.
    MeasuredLike,
    /// Pure delays, one per receive channel, ns.
    Delays { delays_ns: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ImpairmentConfig {
    /// Timing offset, s.
    pub sto_s: f64,
    pub cfo_hz: f64,
    pub sfo_ppm: f64,
    /// Drawn at random when absent.
    pub common_phase_rad: Option<f64>,
    /// Direct-path SNR per receive element before array gains; noiseless
    /// when absent.
    pub snr_db: Option<f64>,
    pub noise_figure_db: f64,
    pub abe: AbeSpec,
    /// Rayleigh delay mismatch among receive channels, in sampling periods.
    /// Sweeps overwrite it with the grid value.
    pub sigma_tau_ts: f64,
}

impl Default for ImpairmentConfig {
    fn default() -> Self {
        Self {
            sto_s: 0.0,
            cfo_hz: 0.0,
            sfo_ppm: 0.0,
            common_phase_rad: Some(0.0),
            snr_db: None,
            noise_figure_db: 10.0,
            abe: AbeSpec::Ideal,
            sigma_tau_ts: 0.0,
        }
    }
}

/// How frames are aligned before processing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum SyncMode {
    /// Every channel is framed at the true start of channel 0 with the true
    /// carrier and clock offsets, so per-channel delay mismatch remains.
    #[default]
    GenieCommonStart,
    /// Full estimation chain.
    Estimate { options: SyncOptions },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSpec {
    /// σ_τ/T_s of every grid point. Zero is allowed.
    pub sigma_tau_ts: Vec<f64>,
    pub trials: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self { sigma_tau_ts: (0..=36).map(|i| 10f64.powf(-6.0 + 0.25 * i as f64)).collect(), trials: 100 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WindowConfig {
    /// Windows for peak and sidelobe metrics.
    pub image: WindowSet,
    /// Windows for the mean image SIR.
    pub sir: WindowSet,
    pub azimuth_zero_padding: usize,
}

impl Default for WindowConfig {
    fn default() -> Self {
        let cheb = WindowKind::Chebyshev { sidelobe_db: 100.0 };
        Self {
            image: WindowSet::default(),
            sir: WindowSet { range: cheb, doppler: cheb, azimuth: cheb },
            azimuth_zero_padding: 4,
        }
    }
}

/// Complete experiment description. Every field has a default, so `{}` is a
/// valid configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub profile: Profile,
    /// Replaces the profile numerology when present.
    pub ofdm: Option<OfdmConfig>,
    pub carrier_frequency_hz: f64,
    pub if_frequency_hz: f64,
    pub num_tx: usize,
    pub num_rx: usize,
    /// Transmit beams are formed towards every listed direction.
    pub tx_beams_deg: Vec<f64>,
    pub scene: SceneSpec,
    pub impairments: ImpairmentConfig,
    pub sync: SyncMode,
    pub sweep: SweepSpec,
    pub windows: WindowConfig,
    pub genie_decoding: bool,
    pub seed: u64,
    /// Share of failed trials above which a sweep counts as failed.
    pub max_failure_rate: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            profile: Profile::Desk,
            ofdm: None,
            carrier_frequency_hz: 27.5e9,
            if_frequency_hz: 3.68e9,
            num_tx: 4,
            num_rx: 8,
            tx_beams_deg: vec![0.0],
            scene: SceneSpec::default(),
            impairments: ImpairmentConfig::default(),
            sync: SyncMode::default(),
            sweep: SweepSpec::default(),
            windows: WindowConfig::default(),
            genie_decoding: false,
            seed: 1,
            max_failure_rate: 0.1,
        }
    }
}

fn one() -> f64 {
    1.0
}

impl ScenarioConfig {
    /// Bench-like single scenario: beams towards 0° and 30°, the direct path
    /// leaving at 30°, a reflector at −20° less than one range cell behind
    /// it, offsets of the measured magnitude, multi-tap back-ends and 40 dB
    /// SNR, processed with the full estimation chain.
    pub fn measurement_like() -> Self {
        Self {
            tx_beams_deg: vec![0.0, 30.0],
            scene: SceneSpec {
                los: LosSpec { distance_m: 0.55, dod_deg: 30.0, doa_deg: 0.0, attenuation: 1.0 },
                targets: vec![TargetSpec {
                    tx_range_m: 0.5,
                    rx_range_m: 0.4,
                    doppler_hz: 0.0,
                    dod_deg: 0.0,
                    doa_deg: -20.0,
                    relative_power_db: -3.0,
                }],
            },
            impairments: ImpairmentConfig {
                sto_s: 2e-6,
                cfo_hz: 15.4772e3,
                sfo_ppm: -4.1606,
                common_phase_rad: None,
                snr_db: Some(40.0),
                abe: AbeSpec::MeasuredLike,
                ..ImpairmentConfig::default()
            },
            sync: SyncMode::Estimate { options: SyncOptions::default() },
            ..Self::default()
        }
    }

    pub fn ofdm(&self) -> OfdmConfig {
        self.ofdm.clone().unwrap_or_else(|| self.profile.ofdm())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| IsacError::Configuration(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(IsacError::Configuration(msg));
        self.ofdm().validate()?;
        if self.num_tx == 0 || self.num_rx == 0 {
            return bad(format!("{} transmit and {} receive channels", self.num_tx, self.num_rx));
        }
        if !(self.carrier_frequency_hz > 0.0 && self.if_frequency_hz >= 0.0) {
            return bad("carrier and IF frequencies must be positive".into());
        }
        if self.tx_beams_deg.is_empty() || self.tx_beams_deg.iter().any(|a| a.abs() > 90.0) {
            return bad(format!("transmit beams {:?}", self.tx_beams_deg));
        }
        let los = &self.scene.los;
        if !(los.distance_m >= 0.0) || los.dod_deg.abs() > 90.0 || los.doa_deg.abs() > 90.0 {
            return bad(format!("direct path {los:?}"));
        }
        self.scene.paths(1.0)?;
        let imp = &self.impairments;
        if !(imp.sfo_ppm.abs() < 1e3) || !(imp.sigma_tau_ts >= 0.0) || !(imp.sto_s >= 0.0) {
            return bad(format!("impairments {imp:?}"));
        }
        if let AbeSpec::Delays { delays_ns } = &imp.abe {
            if delays_ns.len() != self.num_rx || delays_ns.iter().any(|d| !(*d >= 0.0)) {
                return bad(format!("{} back-end delays for {} channels", delays_ns.len(), self.num_rx));
            }
        }
        if self.sweep.trials == 0 || self.sweep.sigma_tau_ts.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return bad("sweep needs at least one trial and finite non-negative grid points".into());
        }
        if self.windows.azimuth_zero_padding == 0 {
            return bad("azimuth zero padding must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.max_failure_rate) {
            return bad(format!("failure rate threshold {}", self.max_failure_rate));
        }
        Ok(())
    }

    /// SHA-256 over the canonical JSON form (sorted keys, no whitespace).
    pub fn hash(&self) -> String {
        let value = serde_json::to_value(self).expect("configuration serializes");
        let canonical = serde_json::to_string(&value).expect("value serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    /// Direct-path delay in sampling periods.
    pub fn los_delay_samples(&self) -> f64 {
        self.scene.los.distance_m / SPEED_OF_LIGHT * self.ofdm().bandwidth
    }

    /// System figures of the configured numerology, code and receive array.
    pub fn isac_params(&self) -> Result<IsacParams> {
        let ofdm = self.ofdm();
        derive_isac_params(&ofdm, self.num_rx, ofdm.code.rate, ofdm.modulation.bits_per_symbol())
    }
}
