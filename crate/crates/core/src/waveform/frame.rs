use num_complex::Complex;
use rand::Rng;

use super::config::{CodeKind, OfdmConfig};
use super::grid::FrameGrid;
use super::ldpc::LdpcCode;
use super::ofdm::to_time_domain;
use super::qpsk;
use crate::dsp::Dft;
use crate::error::{IsacError, Result};
use crate::rng::Seed;
use crate::scalar::{lit, Real};

/// Bit budget of one frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrameCapacity {
    pub data_cells: usize,
    /// Coded bits carried by the data cells.
    pub coded_bits: usize,
    pub codewords: usize,
    /// Information bits available to the payload.
    pub info_bits: usize,
    /// Coded positions left over after the last full codeword; filled with a
    /// known pseudo-random sequence.
    pub tail_bits: usize,
}

/// A transmit frame together with the bits it carries.
#[derive(Clone, Debug, PartialEq)]
pub struct TxFrame<T: Real> {
    pub grid: FrameGrid<T>,
    /// All information bits: the payload followed by seeded filler.
    pub info_bits: Vec<u8>,
    pub coded_bits: Vec<u8>,
    pub payload_len: usize,
    pub preamble: Vec<Complex<T>>,
}

impl<T: Real> TxFrame<T> {
    pub fn to_time_domain(&self, config: &OfdmConfig) -> Result<Vec<Complex<T>>> {
        to_time_domain(&self.grid, config, &self.preamble)
    }
}

/// Everything both link ends derive from `(config, seed)`: the code, pilot
/// values, tail filler and preamble.
#[derive(Clone, Debug)]
pub struct FrameCodec<T: Real> {
    config: OfdmConfig,
    seed: Seed,
    code: Option<LdpcCode>,
    capacity: FrameCapacity,
    pilots: Vec<Complex<T>>,
    tail: Vec<u8>,
}

impl<T: Real> FrameCodec<T> {
    pub fn new(config: &OfdmConfig, seed: Seed) -> Result<Self> {
        config.validate()?;
        let data_cells = config.num_data_cells();
        let coded_bits = data_cells * config.modulation.bits_per_symbol();
        let (code, capacity) = match config.code.kind {
            CodeKind::None => {
                (None, FrameCapacity { data_cells, coded_bits, codewords: 0, info_bits: coded_bits, tail_bits: 0 })
            }
            CodeKind::Ldpc => {
                let code = LdpcCode::from_spec(&config.code)?;
                let codewords = coded_bits / code.block_length();
                let cap = FrameCapacity {
                    data_cells,
                    coded_bits,
                    codewords,
                    info_bits: codewords * code.info_length(),
                    tail_bits: coded_bits - codewords * code.block_length(),
                };
                (Some(code), cap)
            }
        };
        let mut rng = seed.stream("pilots").rng();
        let pilots = (0..config.num_pilot_cells())
            .map(|_| qpsk::map(rng.random_range(0..2u8), rng.random_range(0..2u8)))
            .collect();
        let mut rng = seed.stream("tail").rng();
        let tail = (0..capacity.tail_bits).map(|_| rng.random_range(0..2u8)).collect();
        Ok(Self { config: config.clone(), seed, code, capacity, pilots, tail })
    }

    pub fn config(&self) -> &OfdmConfig {
        &self.config
    }

    pub fn seed(&self) -> Seed {
        self.seed
    }

    pub fn capacity(&self) -> FrameCapacity {
        self.capacity
    }

    pub fn code(&self) -> Option<&LdpcCode> {
        self.code.as_ref()
    }

    /// Pilot values in [`FrameGrid::pilot_positions`] order.
    pub fn pilot_values(&self) -> &[Complex<T>] {
        &self.pilots
    }

    /// Grid holding only the known pilot values, zeros elsewhere.
    pub fn pilot_grid(&self) -> FrameGrid<T> {
        let mut g = FrameGrid::zeros(&self.config);
        let positions: Vec<(usize, usize)> = g.pilot_positions().collect();
        for ((k, m), v) in positions.into_iter().zip(&self.pilots) {
            g.set(k, m, *v);
        }
        g
    }

    /// Known filler occupying the coded positions after the last codeword.
    pub fn tail_bits(&self) -> &[u8] {
        &self.tail
    }

    pub fn preamble(&self) -> Vec<Complex<T>> {
        build_preamble(&self.config, self.seed)
    }

    /// Channel-codes a full set of information bits.
    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        if info.len() != self.capacity.info_bits {
            return Err(IsacError::Argument(format!(
                "{} information bits for a frame holding {}",
                info.len(),
                self.capacity.info_bits
            )));
        }
        let mut coded = Vec::with_capacity(self.capacity.coded_bits);
        match &self.code {
            None => coded.extend_from_slice(info),
            Some(code) => {
                for block in info.chunks(code.info_length()) {
                    coded.extend(code.encode(block)?);
                }
            }
        }
        coded.extend_from_slice(&self.tail);
        Ok(coded)
    }

    /// Places coded bits on the data cells and the pilot sequence on the pilot
    /// cells.
    pub fn map(&self, coded: &[u8]) -> Result<FrameGrid<T>> {
        if coded.len() != self.capacity.coded_bits {
            return Err(IsacError::Argument(format!("{} coded bits for {} positions", coded.len(), self.capacity.coded_bits)));
        }
        let mut grid = FrameGrid::zeros(&self.config);
        let positions: Vec<(usize, usize)> = grid.data_positions().collect();
        for (&(k, m), pair) in positions.iter().zip(coded.chunks_exact(2)) {
            grid.set(k, m, qpsk::map(pair[0], pair[1]));
        }
        let pilots: Vec<(usize, usize)> = grid.pilot_positions().collect();
        for (&(k, m), &p) in pilots.iter().zip(&self.pilots) {
            grid.set(k, m, p);
        }
        Ok(grid)
    }

    pub fn build(&self, payload: &[u8]) -> Result<TxFrame<T>> {
        if payload.len() > self.capacity.info_bits {
            return Err(IsacError::Capacity { requested: payload.len(), capacity: self.capacity.info_bits });
        }
        let mut info: Vec<u8> = payload.iter().map(|b| b & 1).collect();
        let mut rng = self.seed.stream("filler").rng();
        info.extend((payload.len()..self.capacity.info_bits).map(|_| rng.random_range(0..2u8)));
        let coded = self.encode(&info)?;
        let grid = self.map(&coded)?;
        Ok(TxFrame { grid, info_bits: info, coded_bits: coded, payload_len: payload.len(), preamble: self.preamble() })
    }
}

/// Builds the transmit frame for `payload_bits`; unused capacity is filled
/// with seeded pseudo-random bits.
pub fn build_frame<T: Real>(config: &OfdmConfig, payload_bits: &[u8], seed: Seed) -> Result<TxFrame<T>> {
    FrameCodec::new(config, seed)?.build(payload_bits)
}

/// Frequency-domain preamble: seeded QPSK on even subcarriers, boosted by √2 so
/// the symbol carries the same energy as a payload symbol.
pub fn preamble_spectrum<T: Real>(config: &OfdmConfig, seed: Seed) -> Vec<Complex<T>> {
    let n = config.num_subcarriers;
    let mut rng = seed.stream("preamble").rng();
    let boost = lit::<T>(std::f64::consts::SQRT_2);
    let mut spec = vec![Complex::new(T::zero(), T::zero()); n];
    for k in (0..n).step_by(2) {
        spec[k] = qpsk::map::<T>(rng.random_range(0..2u8), rng.random_range(0..2u8)) * boost;
    }
    spec
}

/// Time-domain preamble with cyclic prefix. Only even subcarriers are active,
/// so the two halves of the symbol body are identical sample for sample.
pub fn build_preamble<T: Real>(config: &OfdmConfig, seed: Seed) -> Vec<Complex<T>> {
    let n = config.num_subcarriers;
    let spec = preamble_spectrum::<T>(config, seed);
    // An N-point inverse DFT of a spectrum living on even bins equals half of
    // the N/2-point inverse DFT of those bins, repeated twice.
    let mut half: Vec<Complex<T>> = spec.iter().step_by(2).copied().collect();
    Dft::new(n / 2).inverse(&mut half);
    let scale = lit::<T>(0.5);
    let body: Vec<Complex<T>> = half.iter().chain(half.iter()).map(|z| *z * scale).collect();
    let mut out = Vec::with_capacity(n + config.cp_length);
    out.extend_from_slice(&body[n - config.cp_length..]);
    out.extend_from_slice(&body);
    out
}
