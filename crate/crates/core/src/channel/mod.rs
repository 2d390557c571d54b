//! Multipath propagation, transceiver offsets, receive back-ends and noise.

mod evaluate;
mod impairments;
mod paths;
mod propagate;
pub mod resample;

pub use impairments::{
    make_abe_bank, sample_rayleigh_channel_delays, AbeProfile, AbeResponse, AbeTap, ImpairmentSpec, NoiseSpec,
    MEASURED_LIKE_MAX_DELAY,
};
pub use paths::{Path, PathSet};
pub use propagate::{attenuation_for_snr, propagate, ChannelRealization, GroundTruth, TxStream};
