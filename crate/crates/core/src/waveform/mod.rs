//! Transmit side: frame construction, OFDM modulation, pre-distortion and
//! beamforming.

mod config;
mod frame;
mod grid;
pub mod iq;
pub mod ldpc;
mod ofdm;
pub mod qpsk;
mod tx;

pub use config::{CodeKind, CodeSpec, Modulation, OfdmConfig};
pub use frame::{build_frame, build_preamble, preamble_spectrum, FrameCapacity, FrameCodec, TxFrame};
pub use grid::{FrameGrid, PilotPattern};
pub use ofdm::{demodulate_symbol, filter_symbols, modulate_symbol, to_time_domain, SymbolLayout};
pub use tx::{apply_tx_beamforming, apply_tx_predistortion, combined_weights, predistort_channels, PREDISTORTION_REGULARISATION};
