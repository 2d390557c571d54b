use std::f64::consts::PI;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::sfo::{unwrap, weighted_slope};
use crate::dsp::{signed_bin, Dft};
use crate::error::{IsacError, Result};
use crate::scalar::{narrow, widen, Real};
use crate::waveform::{FrameGrid, OfdmConfig};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FineTuneOptions {
    /// Taps kept on either side of the dominant tap of the pilot CIR.
    pub gate_half_width: usize,
    /// Below this pilot SNR the channel is left untouched.
    pub min_pilot_snr_db: f64,
    /// Refinement passes of the delay estimate.
    pub iterations: usize,
}

impl Default for FineTuneOptions {
    fn default() -> Self {
        Self { gate_half_width: 2, min_pilot_snr_db: 3.0, iterations: 4 }
    }
}

/// Outcome of fine tuning one channel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FineTuneReport {
    /// Delay of the dominant path that was removed, seconds.
    pub residual_sto: f64,
    /// Carrier drift that was removed, Hz.
    pub residual_cfo: f64,
    /// Energy in the gated dominant tap over the noise taps.
    pub pilot_snr_db: f64,
    /// Set when the channel was left uncorrected, with the reason.
    pub skipped: Option<String>,
}

/// Pilot subcarriers, pilot symbols and the ratio rows indexed by them.
type PilotRatios = (Vec<usize>, Vec<usize>, Vec<Vec<Complex<f64>>>);

/// Pilot cells divided by their known values, per pilot symbol.
fn pilot_ratios<T: Real>(grid: &FrameGrid<T>, reference: &FrameGrid<T>) -> Result<PilotRatios> {
    let p = grid.pilots();
    let ks: Vec<usize> = (0..grid.num_subcarriers()).step_by(p.subcarrier_spacing).collect();
    let ms: Vec<usize> = (0..grid.num_symbols()).step_by(p.symbol_spacing).collect();
    let mut out = Vec::with_capacity(ms.len());
    for &m in &ms {
        let mut row = Vec::with_capacity(ks.len());
        for &k in &ks {
            let x = widen(reference.get(k, m));
            if x.norm_sqr() == 0.0 {
                return Err(IsacError::DegeneratePilot { subcarrier: k, symbol: m });
            }
            row.push(widen(grid.get(k, m)) / x);
        }
        out.push(row);
    }
    Ok((ks, ms, out))
}

/// Gated pilot response with its dominant tap moved to delay `d` (samples)
/// removed, and the energy ratio of the gate to the remaining taps.
fn gated(h: &[Complex<f64>], signed: &[f64], n: usize, d: f64, gate: usize, dft: &Dft<f64>) -> (Vec<Complex<f64>>, f64) {
    let np = h.len();
    let mut g: Vec<Complex<f64>> =
        h.iter().zip(signed).map(|(v, &k)| v * Complex::from_polar(1.0, 2.0 * PI * k * d / n as f64)).collect();
    dft.inverse(&mut g);
    let (mut inside, mut outside) = (0.0, 0.0);
    for (l, v) in g.iter_mut().enumerate() {
        let dist = l.min(np - l);
        if dist <= gate {
            inside += v.norm_sqr();
        } else {
            outside += v.norm_sqr();
            *v = Complex::new(0.0, 0.0);
        }
    }
    dft.forward(&mut g);
    let noise_per_tap = outside / (np - 2 * gate - 1).max(1) as f64;
    let snr = if noise_per_tap > 0.0 { inside / ((2 * gate + 1) as f64 * noise_per_tap) } else { f64::INFINITY };
    (g, snr)
}

/// Per channel: estimates the delay of the dominant path from the pilot phase
/// slope over frequency and the carrier drift from the pilot phase over
/// symbols, then removes both so the dominant path sits at zero delay and
/// zero Doppler. The constant phase of the dominant path is kept.
pub fn fine_tune_residuals<T: Real>(
    frames: &mut [FrameGrid<T>],
    reference: &FrameGrid<T>,
    config: &OfdmConfig,
    options: &FineTuneOptions,
) -> Result<Vec<FineTuneReport>> {
    frames.iter_mut().enumerate().map(|(ch, f)| fine_tune_channel(ch, f, reference, config, options)).collect()
}

fn fine_tune_channel<T: Real>(
    channel: usize,
    grid: &mut FrameGrid<T>,
    reference: &FrameGrid<T>,
    config: &OfdmConfig,
    options: &FineTuneOptions,
) -> Result<FineTuneReport> {
    grid.check_shape(reference)?;
    let n = grid.num_subcarriers();
    let (ks, ms, ratios) = pilot_ratios(grid, reference)?;
    let np = ks.len();
    if np < 2 * options.gate_half_width + 2 {
        return Err(IsacError::InsufficientPilots { available: np, required: 2 * options.gate_half_width + 2 });
    }
    let signed: Vec<f64> = ks.iter().map(|&k| signed_bin(k, n) as f64).collect();
    let mean: Vec<Complex<f64>> =
        (0..np).map(|j| ratios.iter().map(|r| r[j]).sum::<Complex<f64>>() / ms.len() as f64).collect();
    let dft = Dft::<f64>::new(np);

    // Integer start from the CIR peak, then phase-slope refinement.
    let mut cir = mean.clone();
    dft.inverse(&mut cir);
    let peak = cir.iter().enumerate().max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr())).map_or(0, |(l, _)| l);
    let mut delay = if peak < np / 2 { peak as f64 } else { peak as f64 - np as f64 };
    // Phase unwrapping follows ascending frequency.
    let mut order: Vec<usize> = (0..np).collect();
    order.sort_by(|&a, &b| signed[a].total_cmp(&signed[b]));
    let mut snr = 0.0;
    for _ in 0..options.iterations.max(1) {
        let (g, s) = gated(&mean, &signed, n, delay, options.gate_half_width, &dft);
        snr = s;
        let mut phase: Vec<f64> = order.iter().map(|&j| g[j].arg()).collect();
        unwrap(&mut phase);
        let x: Vec<f64> = order.iter().map(|&j| signed[j]).collect();
        let w: Vec<f64> = order.iter().map(|&j| g[j].norm_sqr()).collect();
        let Some((slope, _)) = weighted_slope(&x, &phase, &w) else { break };
        delay -= slope * n as f64 / (2.0 * PI);
    }
    let snr_db = 10.0 * snr.log10();
    if !(snr_db >= options.min_pilot_snr_db) {
        let reason = format!("pilot SNR {snr_db:.1} dB below {:.1} dB", options.min_pilot_snr_db);
        log::warn!("fine tuning skipped on channel {channel}: {reason}");
        return Ok(FineTuneReport { residual_sto: 0.0, residual_cfo: 0.0, pilot_snr_db: snr_db, skipped: Some(reason) });
    }
    for m in 0..grid.num_symbols() {
        for (k, v) in grid.symbol_mut(m).iter_mut().enumerate() {
            let r = Complex::from_polar(1.0, 2.0 * PI * signed_bin(k, n) as f64 * delay / n as f64);
            *v = narrow(widen(*v) * r);
        }
    }

    // Carrier drift: phase of each pilot symbol against the frame average.
    let ramp: Vec<Complex<f64>> = signed.iter().map(|&k| Complex::from_polar(1.0, 2.0 * PI * k * delay / n as f64)).collect();
    let avg: Vec<Complex<f64>> = mean.iter().zip(&ramp).map(|(a, r)| a * r).collect();
    let period = config.symbol_duration();
    let times: Vec<f64> = ms.iter().map(|&m| m as f64 * period).collect();
    let mut phase: Vec<f64> = ratios
        .iter()
        .map(|row| row.iter().zip(&ramp).zip(&avg).map(|((z, r), a)| z * r * a.conj()).sum::<Complex<f64>>().arg())
        .collect();
    unwrap(&mut phase);
    let residual_cfo = weighted_slope(&times, &phase, &vec![1.0; times.len()]).map_or(0.0, |(s, _)| s / (2.0 * PI));
    let centre = times.iter().sum::<f64>() / times.len() as f64;
    for m in 0..grid.num_symbols() {
        let r = Complex::from_polar(1.0, -2.0 * PI * residual_cfo * (m as f64 * period - centre));
        for v in grid.symbol_mut(m) {
            *v = narrow(widen(*v) * r);
        }
    }
    Ok(FineTuneReport { residual_sto: delay * config.sampling_period(), residual_cfo, pilot_snr_db: snr_db, skipped: None })
}
