use serde::{Deserialize, Serialize};

use super::equalize::Equalized;
use crate::error::{IsacError, Result};
use crate::scalar::{lit, widen, Real};
use crate::waveform::{qpsk, FrameCodec, FrameGrid, TxFrame};

/// Sum-product iteration budget per codeword.
pub const DEFAULT_MAX_ITERATIONS: usize = 50;
/// Lower bound on the estimated noise variance.
const MIN_NOISE_VAR: f64 = 1e-12;

/// Where the transmit-frame estimate for radar processing comes from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecodeMode {
    /// Demodulate, decode and re-encode the received frame.
    #[default]
    Estimate,
    /// Use the true transmit frame.
    Genie,
}

/// Bit error counts against the transmitted frame.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitErrors {
    /// Hard decisions on coded bits of the codeword blocks.
    pub uncoded_errors: usize,
    pub uncoded_bits: usize,
    /// Decoded information bits.
    pub coded_errors: usize,
    pub coded_bits: usize,
}

impl BitErrors {
    pub fn uncoded_ber(&self) -> f64 {
        self.uncoded_errors as f64 / self.uncoded_bits.max(1) as f64
    }

    pub fn coded_ber(&self) -> f64 {
        self.coded_errors as f64 / self.coded_bits.max(1) as f64
    }
}

#[derive(Clone, Debug)]
pub struct Decoded<T: Real> {
    /// All information bits of the frame.
    pub info_bits: Vec<u8>,
    /// Re-encoded, re-mapped frame including the pilots.
    pub x_hat: FrameGrid<T>,
    /// Every codeword satisfied its parity checks.
    pub converged: bool,
    pub failed_blocks: usize,
    /// Per-channel noise variance estimated from decision errors.
    pub noise_var: f64,
    pub errors: Option<BitErrors>,
    pub genie: bool,
}

/// Decision-directed noise estimate: spread of the data cells around their
/// nearest constellation points, scaled back by each cell's channel gain.
pub fn estimate_noise_var<T: Real>(eq: &Equalized<T>) -> f64 {
    let grid = &eq.grid;
    let n = grid.num_subcarriers();
    let (mut acc, mut count) = (0.0, 0usize);
    for (k, m) in grid.data_positions() {
        let i = m * n + k;
        if eq.erased[i] {
            continue;
        }
        let z = grid.get(k, m);
        let (b0, b1) = qpsk::demap_hard(z);
        acc += (widen(z) - widen(qpsk::map::<T>(b0, b1))).norm_sqr() * eq.gain[i];
        count += 1;
    }
    if count == 0 {
        return MIN_NOISE_VAR;
    }
    (acc / count as f64).max(MIN_NOISE_VAR)
}

/// Soft-demodulates the data cells, decodes every codeword and re-encodes
/// the result into a transmit-frame estimate with regenerated pilots. Blocks
/// that fail to converge are still re-encoded from their hard information
/// bits. Genie mode returns the true frame (requires `truth`).
pub fn demod_decode_reencode<T: Real>(
    eq: &Equalized<T>,
    codec: &FrameCodec<T>,
    mode: DecodeMode,
    truth: Option<&TxFrame<T>>,
    max_iterations: usize,
) -> Result<Decoded<T>> {
    let grid = &eq.grid;
    let n = grid.num_subcarriers();
    let noise_var = estimate_noise_var(eq);
    let cap = codec.capacity();
    let mut llr: Vec<T> = Vec::with_capacity(cap.coded_bits);
    for (k, m) in grid.data_positions() {
        let i = m * n + k;
        if eq.erased[i] {
            llr.extend([T::zero(), T::zero()]);
        } else {
            let (l0, l1) = qpsk::llr(grid.get(k, m), lit::<T>(noise_var / eq.gain[i]));
            llr.extend([l0, l1]);
        }
    }
    let hard: Vec<u8> = llr.iter().map(|&l| u8::from(l < T::zero())).collect();
    let codeword_bits = cap.coded_bits - cap.tail_bits;

    let (mut info, mut failed) = (Vec::with_capacity(cap.info_bits), 0usize);
    match codec.code() {
        None => info.extend_from_slice(&hard[..cap.info_bits]),
        Some(code) => {
            for block in llr[..codeword_bits].chunks(code.block_length()) {
                let out = code.decode(block, max_iterations)?;
                failed += usize::from(!out.converged);
                info.extend_from_slice(&out.codeword[..code.info_length()]);
            }
        }
    }

    let errors = truth.map(|t| BitErrors {
        uncoded_errors: hard[..codeword_bits].iter().zip(&t.coded_bits).filter(|(a, b)| a != b).count(),
        uncoded_bits: codeword_bits,
        coded_errors: info.iter().zip(&t.info_bits).filter(|(a, b)| a != b).count(),
        coded_bits: cap.info_bits,
    });
    let x_hat = match mode {
        DecodeMode::Genie => {
            let t = truth.ok_or_else(|| IsacError::Argument("genie decoding needs the transmitted frame".into()))?;
            t.grid.clone()
        }
        DecodeMode::Estimate => codec.map(&codec.encode(&info)?)?,
    };
    Ok(Decoded {
        info_bits: info,
        x_hat,
        converged: failed == 0,
        failed_blocks: failed,
        noise_var,
        errors,
        genie: mode == DecodeMode::Genie,
    })
}
