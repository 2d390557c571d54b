//! One end-to-end pass: transmit, channel, synchronization, communication
//! and radar processing.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::config::{AbeSpec, ScenarioConfig, SyncMode};
use crate::channel::{
    attenuation_for_snr, make_abe_bank, propagate, sample_rayleigh_channel_delays, AbeProfile, AbeResponse,
    ChannelRealization, GroundTruth, ImpairmentSpec, NoiseSpec, TxStream,
};
use crate::comm::{
    demod_decode_reencode, estimate_cfr, mrc_combine, zf_equalize, DecodeMode, Decoded, Equalized,
    DEFAULT_MAX_ITERATIONS,
};
use crate::dsp::mean_power;
use crate::error::{IsacError, Result};
use crate::geometry::{Angle, AzimuthGrid, UlaGeometry};
use crate::metrics::{evm, mean_image_sir, peak_sidelobe_metrics, Evm, DEFAULT_MAINLOBE_GUARD};
use crate::radar::{
    build_radar_cfr, doa_cube, make_window, range_azimuth_cut, range_doppler_image, RadarCube, RangeAzimuthCut,
    Window, WindowSet,
};
use crate::rng::Seed;
use crate::sync::{correct_and_frame, synchronize, GlobalSync, SyncEstimates};
use crate::waveform::{combined_weights, FrameCodec, FrameGrid, OfdmConfig, SymbolLayout, TxFrame};
use crate::C64;

struct Windows {
    range: Window,
    doppler: Window,
    azimuth: Window,
}

impl Windows {
    fn new(set: &WindowSet, ofdm: &OfdmConfig, num_rx: usize) -> Result<Self> {
        Ok(Self {
            range: make_window(set.range, ofdm.num_subcarriers)?,
            doppler: make_window(set.doppler, ofdm.num_symbols)?,
            azimuth: make_window(set.azimuth, num_rx)?,
        })
    }
}

/// Everything that stays fixed across the trials of one configuration.
pub struct Prepared {
    pub config: ScenarioConfig,
    pub ofdm: OfdmConfig,
    pub codec: FrameCodec<f64>,
    pub geometry_tx: UlaGeometry,
    pub geometry_rx: UlaGeometry,
    pub azimuth_grid: AzimuthGrid,
    pub config_hash: String,
    tx_weights: Vec<C64>,
    image_windows: Windows,
    sir_windows: Windows,
}

impl Prepared {
    pub fn new(config: &ScenarioConfig) -> Result<Self> {
        config.validate()?;
        let ofdm = config.ofdm();
        let geometry_tx = UlaGeometry::new(config.num_tx, config.carrier_frequency_hz)?;
        let geometry_rx = UlaGeometry::new(config.num_rx, config.carrier_frequency_hz)?;
        let steering = config
            .tx_beams_deg
            .iter()
            .map(|&d| geometry_tx.transmit_steering_vector::<f64>(Angle::from_degrees(d)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            codec: FrameCodec::new(&ofdm, Seed(config.seed).stream("frame"))?,
            azimuth_grid: AzimuthGrid::for_array(config.num_rx, config.windows.azimuth_zero_padding)?,
            tx_weights: combined_weights(&steering)?,
            image_windows: Windows::new(&config.windows.image, &ofdm, config.num_rx)?,
            sir_windows: Windows::new(&config.windows.sir, &ofdm, config.num_rx)?,
            config_hash: config.hash(),
            config: config.clone(),
            ofdm,
            geometry_tx,
            geometry_rx,
        })
    }

    /// Azimuth grid index of the direct path.
    pub fn los_azimuth_index(&self) -> usize {
        self.azimuth_grid.nearest_index(Angle::from_degrees(self.config.scene.los.doa_deg))
    }
}

/// Transmitted frame and received channels of one trial.
pub struct Simulated {
    pub frame: TxFrame<f64>,
    pub rx: ChannelRealization<f64>,
    /// Extra per-channel delays drawn for the mismatch study, s.
    pub mismatch: Vec<f64>,
}

pub fn simulate(p: &Prepared, sigma_tau_s: f64, seed: Seed) -> Result<Simulated> {
    let cfg = &p.config;
    let ofdm = &p.ofdm;
    let ts = ofdm.sampling_period();
    let mut rng = seed.stream("payload").rng();
    let bits: Vec<u8> = (0..p.codec.capacity().info_bits).map(|_| rng.random_range(0..2u8)).collect();
    let frame = p.codec.build(&bits)?;
    let body = frame.to_time_domain(ofdm)?;

    let base = match &cfg.impairments.abe {
        AbeSpec::Ideal => vec![AbeResponse::ideal(); cfg.num_rx],
        AbeSpec::MeasuredLike => make_abe_bank(cfg.num_rx, AbeProfile::MeasuredLike, ts, seed.stream("abe")),
        AbeSpec::Delays { delays_ns } => delays_ns.iter().map(|d| AbeResponse::delayed(d * 1e-9)).collect(),
    };
    let mismatch = sample_rayleigh_channel_delays(sigma_tau_s, cfg.num_rx, seed.stream("mismatch"))?;
    let abe: Vec<AbeResponse> =
        base.iter().zip(&mismatch).map(|(a, &d)| a.then_delayed_at_if(d, cfg.if_frequency_hz)).collect();

    let noise = cfg.impairments.snr_db.map(|_| NoiseSpec { noise_figure_db: cfg.impairments.noise_figure_db, ..NoiseSpec::default() });
    let los_attenuation = match (cfg.impairments.snr_db, noise) {
        (Some(snr), Some(n)) => attenuation_for_snr(snr, mean_power(&body), n.power(ofdm.bandwidth)),
        _ => cfg.scene.los.attenuation,
    };
    let paths = cfg.scene.paths(los_attenuation)?;
    let imp = ImpairmentSpec {
        sto: cfg.impairments.sto_s,
        cfo: cfg.impairments.cfo_hz,
        common_phase: cfg.impairments.common_phase_rad,
        sfo: cfg.impairments.sfo_ppm * 1e-6,
        noise,
        abe,
        afe: None,
    };

    let lead = ofdm.symbol_length();
    let longest = paths.max_delay() + imp.sto + imp.abe.iter().map(AbeResponse::max_delay).fold(0.0, f64::max);
    let tail = ofdm.symbol_length() + (longest / ts).ceil() as usize + (body.len() as f64 * imp.sfo.abs()).ceil() as usize + 64;
    let channels = p
        .tx_weights
        .iter()
        .map(|w| {
            let mut s = vec![C64::new(0.0, 0.0); lead + body.len() + tail];
            for (d, x) in s[lead..].iter_mut().zip(&body) {
                *d = x * w;
            }
            s
        })
        .collect();
    let layout = SymbolLayout { start: lead, ..SymbolLayout::frame(ofdm) };
    let tx = TxStream { channels, sample_rate: ofdm.bandwidth, layout: Some(layout) };
    let rx = propagate(&tx, &p.geometry_tx, &p.geometry_rx, &paths, &imp, seed.stream("channel"))?;
    Ok(Simulated { frame, rx, mismatch })
}

/// Synchronization outcome in reporting units.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyncReport {
    pub channels: Vec<SyncRow>,
    pub global_sto_ns: f64,
    pub global_cfo_khz: f64,
    pub global_sfo_ppm: f64,
    pub true_cfo_khz: f64,
    pub true_sfo_ppm: f64,
    pub estimated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyncRow {
    pub channel: usize,
    pub sto_ns: f64,
    pub cfo_khz: f64,
    pub sfo_ppm: f64,
    pub residual_sto_ns: f64,
    pub residual_cfo_hz: f64,
    /// Arrival of the frame on this channel relative to the common start, ns.
    pub true_residual_sto_ns: f64,
}

fn sync_report(estimates: Option<&SyncEstimates>, global: &GlobalSync, truth: &GroundTruth) -> SyncReport {
    let ts = 1.0 / truth.sample_rate;
    let start = global.sto / ts;
    let num = truth.abe.len();
    let channels = (0..num)
        .map(|n| {
            let est = estimates.map(|e| &e.channels[n]);
            SyncRow {
                channel: n,
                sto_ns: est.map_or(truth.frame_start(n) * ts, |c| c.sto) * 1e9,
                cfo_khz: est.map_or(truth.cfo, |c| c.cfo) / 1e3,
                sfo_ppm: est.map_or(truth.sfo, |c| c.sfo) * 1e6,
                residual_sto_ns: est.map_or(0.0, |c| c.residual_sto) * 1e9,
                residual_cfo_hz: est.map_or(0.0, |c| c.residual_cfo),
                true_residual_sto_ns: (truth.frame_start(n) - start) * ts * 1e9,
            }
        })
        .collect();
    SyncReport {
        channels,
        global_sto_ns: global.sto * 1e9,
        global_cfo_khz: global.cfo / 1e3,
        global_sfo_ppm: global.sfo * 1e6,
        true_cfo_khz: truth.cfo / 1e3,
        true_sfo_ppm: truth.sfo * 1e6,
        estimated: estimates.is_some(),
    }
}

/// Scalar figures of one trial.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialMetrics {
    pub evm_db: f64,
    pub evm_spread_db: f64,
    pub ber: f64,
    pub uncoded_ber: f64,
    pub failed_blocks: usize,
    /// Strongest cube cell, linear power.
    pub peak_power: f64,
    /// Range, Doppler and azimuth index of the strongest cube cell.
    pub peak_cell: (usize, usize, usize),
    pub range_pslr_db: f64,
    pub range_islr_db: f64,
    pub azimuth_pslr_db: f64,
    pub azimuth_islr_db: f64,
    pub sir_db: f64,
}

/// Full products of one pass, for the replay.
pub struct ChainOutput {
    pub sync: SyncReport,
    pub frames: Vec<FrameGrid<f64>>,
    pub zf: Equalized<f64>,
    pub mrc: Equalized<f64>,
    pub decoded: Decoded<f64>,
    pub cube: RadarCube<f64>,
    pub sir_cut: RangeAzimuthCut<f64>,
    pub metrics: TrialMetrics,
}

pub fn process(p: &Prepared, sim: &Simulated) -> Result<ChainOutput> {
    let ofdm = &p.ofdm;
    let truth = &sim.rx.truth;
    let reference = p.codec.pilot_grid();
    let (frames, sync) = match &p.config.sync {
        SyncMode::GenieCommonStart => {
            let global = GlobalSync { sto: truth.frame_start(0) / truth.sample_rate, cfo: truth.cfo, sfo: truth.sfo };
            let frames = sim
                .rx
                .channels
                .iter()
                .map(|r| correct_and_frame(r, &global, ofdm))
                .collect::<Result<Vec<_>>>()?;
            (frames, sync_report(None, &global, truth))
        }
        SyncMode::Estimate { options } => {
            let out = synchronize(&sim.rx.channels, &p.codec.preamble(), &reference, ofdm, options)?;
            let report = sync_report(Some(&out.estimates), &out.estimates.global, truth);
            (out.frames, report)
        }
    };

    let cfrs = frames.iter().map(|f| estimate_cfr(f, &reference)).collect::<Result<Vec<_>>>()?;
    let mrc = mrc_combine(&frames, &cfrs)?;
    let zf = zf_equalize(&frames[0], &cfrs[0])?;
    let mode = if p.config.genie_decoding { DecodeMode::Genie } else { DecodeMode::Estimate };
    let decoded = demod_decode_reencode(&mrc, &p.codec, mode, Some(&sim.frame), DEFAULT_MAX_ITERATIONS)?;
    let errors = decoded.errors.ok_or_else(|| IsacError::Model("bit errors unavailable".into()))?;
    let Evm { mean_db: evm_db, spread_db: evm_spread_db } = evm(&mrc.grid, &sim.frame.grid)?;

    let abe_cfr: Vec<Vec<C64>> = truth.abe.iter().map(|a| a.cfr::<f64>(ofdm)).collect();
    let radar = build_radar_cfr(&frames, &decoded.x_hat, &abe_cfr)?;
    let images = |w: &Windows| {
        radar.channels.iter().map(|d| range_doppler_image(d, &w.range, &w.doppler)).collect::<Result<Vec<_>>>()
    };
    let rect_images = images(&p.image_windows)?;
    let mut cube = doa_cube(&rect_images, &p.geometry_rx, &p.azimuth_grid, &p.image_windows.azimuth)?;
    cube.windows = p.config.windows.image;
    let (r0, q0, s0) = cube.peak();
    let peak_power = cube.get(r0, q0, s0).norm_sqr();
    let range_cut: Vec<f64> = (0..cube.axes.num_range).map(|r| cube.get(r, q0, s0).norm()).collect();
    let az_cut: Vec<f64> = (0..cube.azimuth.len()).map(|s| cube.get(r0, q0, s).norm()).collect();
    let range_sl = peak_sidelobe_metrics(&range_cut, DEFAULT_MAINLOBE_GUARD)?;
    let az_sl = peak_sidelobe_metrics(&az_cut, DEFAULT_MAINLOBE_GUARD)?;

    let sir_images = images(&p.sir_windows)?;
    let sir_cut = range_azimuth_cut(&sir_images, 0, &p.geometry_rx, &p.azimuth_grid, &p.sir_windows.azimuth)?;
    let magnitudes: Vec<f64> = sir_cut.values.iter().map(|v| v.norm()).collect();
    let sir_db = mean_image_sir(&magnitudes, sir_cut.azimuth.len(), (0, p.los_azimuth_index()))?;

    let metrics = TrialMetrics {
        evm_db,
        evm_spread_db,
        ber: errors.coded_ber(),
        uncoded_ber: errors.uncoded_ber(),
        failed_blocks: decoded.failed_blocks,
        peak_power,
        peak_cell: (r0, q0, s0),
        range_pslr_db: range_sl.pslr_db,
        range_islr_db: range_sl.islr_db,
        azimuth_pslr_db: az_sl.pslr_db,
        azimuth_islr_db: az_sl.islr_db,
        sir_db,
    };
    Ok(ChainOutput { sync, frames, zf, mrc, decoded, cube, sir_cut, metrics })
}
