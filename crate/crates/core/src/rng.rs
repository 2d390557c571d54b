//! Seed handling. Every random draw in the simulator is tied to a [`Seed`] so
//! that a run is reproducible from its configuration alone.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// A 64-bit seed from which independent random streams are derived.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    /// Derives a child seed for a named purpose (e.g. `"noise"`, `"payload"`).
    pub fn stream(self, label: &str) -> Seed {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in label.bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        Seed(splitmix(self.0 ^ splitmix(h)))
    }

    /// Derives a child seed for an indexed sub-task (trial, channel, ...).
    pub fn child(self, index: u64) -> Seed {
        Seed(splitmix(self.0.wrapping_add(splitmix(index.wrapping_add(0x5851_f42d_4c95_7f2d)))))
    }

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
