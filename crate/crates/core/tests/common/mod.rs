#![allow(dead_code)]

use isac_sim::channel::{propagate, AbeResponse, ChannelRealization, ImpairmentSpec, Path, PathSet, TxStream};
use isac_sim::geometry::{Angle, UlaGeometry};
use isac_sim::waveform::{FrameCodec, OfdmConfig, SymbolLayout, TxFrame};
use isac_sim::{Seed, C64};

pub const FC: f64 = 3.68e9;

/// Reduced numerology for many-seed statistics.
pub fn small_config() -> OfdmConfig {
    OfdmConfig { num_subcarriers: 256, num_symbols: 8, cp_length: 64, ..OfdmConfig::full_scale() }
}

pub struct Scene {
    pub config: OfdmConfig,
    pub codec: FrameCodec<f64>,
    pub frame: TxFrame<f64>,
    pub stream: Vec<C64>,
    pub lead: usize,
}

impl Scene {
    /// A random-payload frame after `lead` zeros and followed by `tail` zeros.
    pub fn new(config: OfdmConfig, seed: u64, lead: usize, tail: usize) -> Self {
        let codec = FrameCodec::<f64>::new(&config, Seed(seed)).unwrap();
        let mut rng = Seed(seed).stream("payload").rng();
        let bits: Vec<u8> = (0..codec.capacity().info_bits).map(|_| rand::Rng::random_range(&mut rng, 0..2u8)).collect();
        let frame = codec.build(&bits).unwrap();
        let body = frame.to_time_domain(&config).unwrap();
        let mut stream = vec![C64::new(0.0, 0.0); lead + body.len() + tail];
        stream[lead..lead + body.len()].copy_from_slice(&body);
        Self { config, codec, frame, stream, lead }
    }

    pub fn tx(&self, num_tx: usize) -> TxStream<f64> {
        let layout = SymbolLayout { start: self.lead, ..SymbolLayout::frame(&self.config) };
        TxStream { channels: vec![self.stream.clone(); num_tx], sample_rate: self.config.bandwidth, layout: Some(layout) }
    }

    pub fn sampling_period(&self) -> f64 {
        self.config.sampling_period()
    }

    /// Single transmit element, `num_rx` receivers.
    pub fn receive(&self, num_rx: usize, paths: &PathSet, imp: &ImpairmentSpec, seed: u64) -> ChannelRealization<f64> {
        let g_tx = UlaGeometry::new(1, FC).unwrap();
        let g_rx = UlaGeometry::new(num_rx, FC).unwrap();
        propagate(&self.tx(1), &g_tx, &g_rx, paths, imp, Seed(seed)).unwrap()
    }

    /// Mean transmit power per sample of the frame.
    pub fn tx_power(&self) -> f64 {
        let body = &self.stream[self.lead..self.lead + self.config.frame_length()];
        body.iter().map(|z| z.norm_sqr()).sum::<f64>() / body.len() as f64
    }
}

/// Line of sight whose delay is `samples` sampling periods.
pub fn los_samples(config: &OfdmConfig, samples: f64, doa_deg: f64, attenuation: f64) -> PathSet {
    let dist = samples * config.sampling_period() * isac_sim::consts::SPEED_OF_LIGHT;
    PathSet::new(vec![Path::line_of_sight(attenuation, dist, Angle::ZERO, Angle::from_degrees(doa_deg))]).unwrap()
}

pub fn delayed_abe(delays: &[f64]) -> Vec<AbeResponse> {
    delays.iter().map(|&d| AbeResponse::delayed(d)).collect()
}
