use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::evaluate::Waveform;
use super::impairments::{AbeResponse, ImpairmentSpec};
use super::paths::PathSet;
use crate::error::{IsacError, Result};
use crate::geometry::UlaGeometry;
use crate::rng::Seed;
use crate::scalar::{narrow, widen, Real};
use crate::waveform::SymbolLayout;

/// Transmit samples of every transmit channel plus what the channel needs to
/// know about them.
#[derive(Clone, Debug)]
pub struct TxStream<T: Real> {
    pub channels: Vec<Vec<Complex<T>>>,
    pub sample_rate: f64,
    /// CP-OFDM symbol positions, when every non-zero sample belongs to a
    /// symbol of this layout. Enables exact fractional delays.
    pub layout: Option<SymbolLayout>,
}

impl<T: Real> TxStream<T> {
    pub fn len(&self) -> usize {
        self.channels.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// What actually happened in one channel realisation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundTruth {
    pub sample_rate: f64,
    pub carrier_frequency: f64,
    pub sto: f64,
    pub cfo: f64,
    pub sfo: f64,
    pub common_phase: f64,
    /// Per-sample noise power, W.
    pub noise_power: f64,
    pub paths: PathSet,
    pub abe: Vec<AbeResponse>,
    /// Index of the first transmitted sample in the transmit stream.
    pub tx_start: usize,
}

impl GroundTruth {
    /// Dominant back-end delay of each receive channel, seconds.
    pub fn abe_delays(&self) -> Vec<f64> {
        self.abe.iter().map(AbeResponse::dominant_delay).collect()
    }

    /// Fractional receive-sample index at which the line-of-sight copy of the
    /// transmit sample `tx_start` arrives on channel `n`.
    pub fn frame_start(&self, n: usize) -> f64 {
        let ts = 1.0 / self.sample_rate;
        let delay = self.paths.los().delay() + self.sto + self.abe[n].dominant_delay();
        (self.tx_start as f64 + delay / ts) / (1.0 + self.sfo)
    }
}

/// Received samples per receive channel and the ground truth behind them.
#[derive(Clone, Debug)]
pub struct ChannelRealization<T: Real> {
    pub channels: Vec<Vec<Complex<T>>>,
    pub truth: GroundTruth,
}

/// Path attenuation giving `snr_db` between the received power of a
/// unit-gain path and `noise_power`, for transmit power `tx_power`.
pub fn attenuation_for_snr(snr_db: f64, tx_power: f64, noise_power: f64) -> f64 {
    (10f64.powf(snr_db / 10.0) * noise_power / tx_power).sqrt()
}

/// Passes the transmit channels through the multipath channel, the
/// transceiver offsets and the receive back-ends:
/// per receive channel the paths are summed, the carrier offset is applied,
/// the back-end response filters the result, and the stretched sampling grid
/// is read out before thermal noise is added.
///
/// The output has the length of the transmit stream; the caller pads the
/// stream so that every delayed copy fits.
pub fn propagate<T: Real>(
    tx: &TxStream<T>,
    geometry_tx: &UlaGeometry,
    geometry_rx: &UlaGeometry,
    paths: &PathSet,
    imp: &ImpairmentSpec,
    seed: Seed,
) -> Result<ChannelRealization<T>> {
    let num_tx = geometry_tx.num_elements();
    let num_rx = geometry_rx.num_elements();
    if tx.channels.len() != num_tx {
        return Err(IsacError::Dimension(format!("{} transmit streams for {num_tx} elements", tx.channels.len())));
    }
    let len = tx.len();
    if tx.channels.iter().any(|c| c.len() != len) {
        return Err(IsacError::Dimension("transmit streams differ in length".into()));
    }
    if !(tx.sample_rate > 0.0) {
        return Err(IsacError::Argument(format!("sample rate {}", tx.sample_rate)));
    }
    imp.validate(num_rx, num_tx)?;
    if geometry_tx.carrier_frequency() != geometry_rx.carrier_frequency() {
        return Err(IsacError::Model("transmit and receive arrays use different carriers".into()));
    }
    let ts = 1.0 / tx.sample_rate;
    let fc = geometry_rx.carrier_frequency();

    let longest = paths.max_delay() + imp.sto + imp.abe.iter().map(AbeResponse::max_delay).fold(0.0, f64::max);
    let shortest = paths.paths().iter().map(|p| p.delay()).fold(f64::INFINITY, f64::min) + imp.sto;
    if shortest < 0.0 {
        return Err(IsacError::Configuration(format!("negative total delay {shortest:e} s")));
    }
    if longest / ts >= len as f64 {
        return Err(IsacError::Configuration(format!(
            "delay of {:.1} samples exceeds the {len}-sample buffer",
            longest / ts
        )));
    }

    let wide_tx: Vec<Vec<Complex<f64>>> = tx.channels.iter().map(|c| c.iter().map(|z| widen(*z)).collect()).collect();
    let wide_tx = match (&imp.afe, tx.layout) {
        (None, _) => wide_tx,
        (Some(afe), Some(layout)) => apply_afe(wide_tx, afe, &layout)?,
        (Some(_), None) => {
            return Err(IsacError::Model("front-end responses need a CP-OFDM symbol layout".into()));
        }
    };

    // Per path: the transmit channels combined with their far-field phases.
    let path_waveforms: Vec<Waveform> = paths
        .paths()
        .iter()
        .map(|p| {
            let w: Vec<Complex<f64>> = (0..num_tx)
                .map(|e| Ok(Complex::from_polar(1.0, -2.0 * PI * fc * geometry_tx.element_delay(e, p.dod)?)))
                .collect::<Result<_>>()?;
            let combined: Vec<Complex<f64>> =
                (0..len).map(|j| wide_tx.iter().zip(&w).map(|(x, c)| x[j] * c).sum()).collect();
            Ok(match tx.layout {
                Some(layout) => Waveform::ofdm(&combined, layout),
                None => Waveform::samples(combined),
            })
        })
        .collect::<Result<_>>()?;

    let common_phase = imp.common_phase.unwrap_or_else(|| seed.stream("common-phase").rng().random_range(-PI..PI));
    let noise_power = imp.noise.map_or(0.0, |n| n.power(tx.sample_rate));

    // Delayed path waveforms, shared between channels with equal delays.
    let mut cache: HashMap<(usize, u64), Vec<Complex<f64>>> = HashMap::new();
    for n in 0..num_rx {
        for tap in &imp.abe[n].taps {
            for (pi, p) in paths.paths().iter().enumerate() {
                let d = (tap.delay + p.delay() + imp.sto) / ts;
                cache.entry((pi, d.to_bits())).or_insert_with(|| path_waveforms[pi].delayed(len, d, imp.sfo));
            }
        }
    }

    let channels: Vec<Vec<Complex<T>>> = (0..num_rx)
        .into_par_iter()
        .map(|n| {
            let mut acc = vec![Complex::new(0.0, 0.0); len];
            for tap in &imp.abe[n].taps {
                for (pi, p) in paths.paths().iter().enumerate() {
                    let rx_delay = p.rx_delay - geometry_rx.element_delay(n, p.doa)?;
                    let gain = tap.gain
                        * p.attenuation
                        * Complex::from_polar(1.0, common_phase - 2.0 * PI * fc * (p.tx_delay + rx_delay));
                    let d = (tap.delay + p.delay() + imp.sto) / ts;
                    let delayed = &cache[&(pi, d.to_bits())];
                    // Carrier offset and Doppler are evaluated before the back-end delay.
                    let rate = 2.0 * PI * (imp.cfo + p.doppler);
                    for (j, (a, x)) in acc.iter_mut().zip(delayed).enumerate() {
                        let t = j as f64 * ts * (1.0 + imp.sfo) - tap.delay;
                        *a += gain * x * Complex::from_polar(1.0, rate * t);
                    }
                }
            }
            if noise_power > 0.0 {
                let mut rng = seed.stream("noise").child(n as u64).rng();
                let s = (noise_power / 2.0).sqrt();
                for a in &mut acc {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    *a += Complex::new(re, im) * s;
                }
            }
            Ok(acc.into_iter().map(narrow).collect())
        })
        .collect::<Result<_>>()?;

    let truth = GroundTruth {
        sample_rate: tx.sample_rate,
        carrier_frequency: fc,
        sto: imp.sto,
        cfo: imp.cfo,
        sfo: imp.sfo,
        common_phase,
        noise_power,
        paths: paths.clone(),
        abe: imp.abe.clone(),
        tx_start: tx.layout.map_or(0, |l| l.start),
    };
    Ok(ChannelRealization { channels, truth })
}

fn apply_afe(
    mut streams: Vec<Vec<Complex<f64>>>,
    afe: &[Vec<Complex<f64>>],
    layout: &SymbolLayout,
) -> Result<Vec<Vec<Complex<f64>>>> {
    let dft = crate::dsp::Dft::new(layout.fft_len);
    for (s, h) in streams.iter_mut().zip(afe) {
        crate::waveform::filter_symbols(s, layout, h, &dft)?;
    }
    Ok(streams)
}
