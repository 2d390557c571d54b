use std::f64::consts::PI;

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::consts::BOLTZMANN;
use crate::error::{IsacError, Result};
use crate::rng::Seed;
use crate::scalar::{narrow, Real};
use crate::waveform::OfdmConfig;

/// One tap of a receive back-end impulse response.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbeTap {
    /// Seconds.
    pub delay: f64,
    pub gain: Complex<f64>,
}

/// Impulse response of one receive analog back-end, as a sparse set of
/// continuous-delay taps. The strongest tap defines the channel's hardware
/// delay.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbeResponse {
    pub taps: Vec<AbeTap>,
}

impl AbeResponse {
    pub fn ideal() -> Self {
        Self::delayed(0.0)
    }

    /// A pure delay.
    pub fn delayed(delay: f64) -> Self {
        Self { taps: vec![AbeTap { delay, gain: Complex::new(1.0, 0.0) }] }
    }

    /// A pure delay experienced at an intermediate frequency `f_if`: after
    /// conversion to baseband the tap also carries the phase rotation
    /// `exp(-i·2π·f_if·delay)`.
    pub fn delayed_at_if(delay: f64, f_if: f64) -> Self {
        Self::ideal().then_delayed_at_if(delay, f_if)
    }

    /// This response followed by a pure delay at the intermediate frequency.
    pub fn then_delayed_at_if(&self, delay: f64, f_if: f64) -> Self {
        let rot = Complex::from_polar(1.0, -2.0 * PI * f_if * delay);
        Self { taps: self.taps.iter().map(|t| AbeTap { delay: t.delay + delay, gain: t.gain * rot }).collect() }
    }

    fn dominant(&self) -> Option<&AbeTap> {
        self.taps.iter().max_by(|a, b| a.gain.norm().total_cmp(&b.gain.norm()))
    }

    /// Delay of the strongest tap.
    pub fn dominant_delay(&self) -> f64 {
        self.dominant().map_or(0.0, |t| t.delay)
    }

    pub fn max_delay(&self) -> f64 {
        self.taps.iter().map(|t| t.delay).fold(0.0, f64::max)
    }

    /// Frequency response on the subcarrier grid of `config` (DFT bin order).
    pub fn cfr<T: Real>(&self, config: &OfdmConfig) -> Vec<Complex<T>> {
        (0..config.num_subcarriers)
            .map(|k| {
                let f = config.subcarrier_frequency(k);
                narrow(self.taps.iter().map(|t| t.gain * Complex::from_polar(1.0, -2.0 * PI * f * t.delay)).sum())
            })
            .collect()
    }

    fn validate(&self, channel: usize) -> Result<()> {
        let dom = self.dominant().ok_or_else(|| IsacError::Model(format!("back-end {channel} has no taps")))?;
        if dom.gain.norm() == 0.0 {
            return Err(IsacError::Model(format!("back-end {channel} has an all-zero response")));
        }
        if self.taps.iter().any(|t| !(t.delay >= 0.0 && t.delay.is_finite())) {
            return Err(IsacError::Model(format!("back-end {channel} has a negative or non-finite tap delay")));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbeProfile {
    #[default]
    Ideal,
    MeasuredLike,
}

/// Largest dominant-tap delay drawn by the measured-like profile, seconds.
pub const MEASURED_LIKE_MAX_DELAY: f64 = 3e-9;

/// Synthesises one back-end response per receive channel.
///
/// The measured-like profile draws a dominant unit tap at a uniform delay in
/// `[0, 3 ns]` followed by two exponentially weaker echoes (amplitudes 0.1 and 0.01, random
/// phase) one to two and two to four sampling periods later; the echoes keep the
/// passband ripple below 3 dB.
pub fn make_abe_bank(num_channels: usize, profile: AbeProfile, sampling_period: f64, seed: Seed) -> Vec<AbeResponse> {
    let mut rng = seed.stream("abe").rng();
    (0..num_channels)
        .map(|_| match profile {
            AbeProfile::Ideal => AbeResponse::ideal(),
            AbeProfile::MeasuredLike => {
                let d0 = rng.random_range(0.0..=MEASURED_LIKE_MAX_DELAY);
                let echo = |rng: &mut rand_chacha::ChaCha8Rng, amp: f64, lo: f64, hi: f64| AbeTap {
                    delay: d0 + rng.random_range(lo..hi) * sampling_period,
                    gain: Complex::from_polar(amp, rng.random_range(-PI..PI)),
                };
                let taps = vec![
                    AbeTap { delay: d0, gain: Complex::new(1.0, 0.0) },
                    echo(&mut rng, 0.1, 1.0, 2.0),
                    echo(&mut rng, 0.01, 2.0, 4.0),
                ];
                AbeResponse { taps }
            }
        })
        .collect()
}

/// Per-channel delays for the delay-mismatch study: channel 0 is exactly 0, the
/// others are Rayleigh distributed with standard deviation `sigma_tau`.
pub fn sample_rayleigh_channel_delays(sigma_tau: f64, num_channels: usize, seed: Seed) -> Result<Vec<f64>> {
    if !(sigma_tau >= 0.0 && sigma_tau.is_finite()) {
        return Err(IsacError::Argument(format!("delay standard deviation {sigma_tau}")));
    }
    let scale = sigma_tau / ((4.0 - PI) / 2.0).sqrt();
    let mut rng = seed.stream("rayleigh").rng();
    Ok((0..num_channels)
        .map(|n| {
            let u: f64 = rng.random();
            if n == 0 || sigma_tau == 0.0 {
                0.0
            } else {
                scale * (-2.0 * (1.0 - u).ln()).sqrt()
            }
        })
        .collect())
}

/// Receiver thermal noise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    pub noise_figure_db: f64,
    /// Kelvin.
    pub temperature: f64,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self { noise_figure_db: 10.0, temperature: 290.0 }
    }
}

impl NoiseSpec {
    /// Noise power per complex sample, k_B·B·T·NF, in W.
    pub fn power(&self, bandwidth: f64) -> f64 {
        BOLTZMANN * bandwidth * self.temperature * 10f64.powf(self.noise_figure_db / 10.0)
    }
}

/// Transmitter/receiver offsets and hardware responses.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImpairmentSpec {
    /// Sampling time offset τ_Δ, seconds.
    pub sto: f64,
    /// Carrier frequency offset f_Δ, Hz.
    pub cfo: f64,
    /// Common phase ψ_Δ in radians; drawn uniformly when absent.
    pub common_phase: Option<f64>,
    /// Normalised sampling frequency offset δ.
    pub sfo: f64,
    /// Thermal noise; `None` disables noise.
    pub noise: Option<NoiseSpec>,
    /// One response per receive channel.
    pub abe: Vec<AbeResponse>,
    /// One frequency response (DFT bin order) per transmit channel; `None`
    /// means ideal front ends.
    pub afe: Option<Vec<Vec<Complex<f64>>>>,
}

impl ImpairmentSpec {
    /// No offsets, no noise, ideal hardware, zero common phase.
    pub fn ideal(num_rx: usize) -> Self {
        Self {
            sto: 0.0,
            cfo: 0.0,
            common_phase: Some(0.0),
            sfo: 0.0,
            noise: None,
            abe: vec![AbeResponse::ideal(); num_rx],
            afe: None,
        }
    }

    pub fn validate(&self, num_rx: usize, num_tx: usize) -> Result<()> {
        if !(self.sfo.abs() < 1e-3) {
            return Err(IsacError::Model(format!("sampling frequency offset {} outside ±1e-3", self.sfo)));
        }
        if !(self.sto.is_finite() && self.cfo.is_finite()) {
            return Err(IsacError::Model("non-finite offsets".into()));
        }
        if self.abe.len() != num_rx {
            return Err(IsacError::Model(format!("{} back-end responses for {num_rx} receive channels", self.abe.len())));
        }
        for (n, r) in self.abe.iter().enumerate() {
            r.validate(n)?;
        }
        if let Some(afe) = &self.afe {
            if afe.len() != num_tx {
                return Err(IsacError::Model(format!("{} front-end responses for {num_tx} transmit channels", afe.len())));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rayleigh_statistics() {
        assert!(sample_rayleigh_channel_delays(0.0, 8, Seed(1)).unwrap().iter().all(|&d| d == 0.0));
        assert!(sample_rayleigh_channel_delays(-1.0, 8, Seed(1)).is_err());
        let d = sample_rayleigh_channel_delays(1e-9, 1_000_001, Seed(2)).unwrap();
        assert_eq!(d[0], 0.0);
        assert!(d.iter().all(|&x| x >= 0.0));
        let tail = &d[1..];
        let mean = tail.iter().sum::<f64>() / tail.len() as f64;
        let var = tail.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (tail.len() - 1) as f64;
        assert!((var.sqrt() / 1e-9 - 1.0).abs() < 0.01, "std {}", var.sqrt());
        assert_eq!(d[..5], sample_rayleigh_channel_delays(1e-9, 5, Seed(2)).unwrap()[..]);
    }

    #[test]
    fn abe_profiles() {
        let cfg = OfdmConfig::desk();
        let ts = cfg.sampling_period();
        for r in make_abe_bank(4, AbeProfile::Ideal, ts, Seed(0)) {
            assert!(r.cfr::<f64>(&cfg).iter().all(|h| (h - Complex::new(1.0, 0.0)).norm() < 1e-15));
        }
        let mut spreads = Vec::new();
        for s in 0..20 {
            let bank = make_abe_bank(8, AbeProfile::MeasuredLike, ts, Seed(s));
            let delays: Vec<f64> = bank.iter().map(AbeResponse::dominant_delay).collect();
            let mean = delays.iter().sum::<f64>() / 8.0;
            spreads.push(delays.iter().map(|d| (d - mean).powi(2)).sum::<f64>());
            for r in &bank {
                let peak = r.taps[0].gain.norm();
                assert!(r.taps[1..].iter().all(|t| peak >= 3.0 * t.gain.norm()));
                assert!((0.0..=MEASURED_LIKE_MAX_DELAY).contains(&r.dominant_delay()));
                let mags: Vec<f64> = r.cfr::<f64>(&cfg).iter().map(|h| 20.0 * h.norm().log10()).collect();
                let ripple = mags.iter().cloned().fold(f64::MIN, f64::max) - mags.iter().cloned().fold(f64::MAX, f64::min);
                assert!(ripple <= 3.0, "ripple {ripple}");
            }
        }
        assert!(spreads.iter().all(|&s| s > 0.0));
    }

    #[test]
    fn noise_power_formula() {
        let n = NoiseSpec { noise_figure_db: 10.0, temperature: 290.0 };
        assert!((n.power(491.52e6) / (1.380649e-23 * 491.52e6 * 290.0 * 10.0) - 1.0).abs() < 1e-12);
    }
}
