//! Bistatic MIMO-OFDM integrated sensing and communication simulator.
//!
//! The processing chain runs transmit frame construction ([`waveform`]), the
//! multipath channel with hardware offsets ([`channel`]), distributed
//! synchronization ([`sync`]), communication reception ([`comm`]), radar imaging
//! ([`radar`]) and performance metrics ([`metrics`]). [`runner`] ties them into
//! seeded Monte-Carlo sweeps and a single-scenario replay.
//!
//! Sample processing is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the precision used by the runner.

// `!(x > y)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod comm;
pub mod consts;
pub mod dsp;
mod error;
pub mod geometry;
pub mod metrics;
pub mod radar;
pub mod runner;
mod rng;
pub mod scalar;
pub mod sync;
pub mod waveform;

pub use error::{IsacError, Result};
pub use rng::Seed;
pub use scalar::Real;

/// Complex sample in double precision.
pub type C64 = num_complex::Complex<f64>;
/// Frame grid in double precision.
pub type FrameGrid64 = waveform::FrameGrid<f64>;
/// Transmit frame in double precision.
pub type TxFrame64 = waveform::TxFrame<f64>;
