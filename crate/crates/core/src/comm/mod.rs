//! Communication receiver: pilot channel estimation, equalisation and
//! combining, decoding, and re-encoding of the transmit-frame estimate.

mod cfr;
mod decode;
mod equalize;

pub use cfr::{estimate_cfr, CommCfr};
pub use decode::{demod_decode_reencode, estimate_noise_var, BitErrors, DecodeMode, Decoded, DEFAULT_MAX_ITERATIONS};
pub use equalize::{mrc_combine, zf_equalize, Equalized, ERASURE_POWER};
