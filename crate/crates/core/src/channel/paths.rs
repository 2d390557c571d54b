use serde::{Deserialize, Serialize};

use crate::consts::SPEED_OF_LIGHT;
use crate::error::{IsacError, Result};
use crate::geometry::Angle;

/// One propagation path between the transmit and receive arrays.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Path {
    /// Linear amplitude gain.
    pub attenuation: f64,
    /// Transmitter-to-scatterer delay, seconds.
    pub tx_delay: f64,
    /// Scatterer-to-receiver delay, seconds.
    pub rx_delay: f64,
    /// Doppler shift, Hz.
    pub doppler: f64,
    pub dod: Angle,
    pub doa: Angle,
    pub is_los: bool,
}

impl Path {
    /// Direct path of length `distance` metres.
    pub fn line_of_sight(attenuation: f64, distance: f64, dod: Angle, doa: Angle) -> Self {
        Self { attenuation, tx_delay: distance / SPEED_OF_LIGHT, rx_delay: 0.0, doppler: 0.0, dod, doa, is_los: true }
    }

    /// Scattered path with the given leg lengths in metres.
    pub fn scatterer(attenuation: f64, tx_range: f64, rx_range: f64, doppler: f64, dod: Angle, doa: Angle) -> Self {
        Self {
            attenuation,
            tx_delay: tx_range / SPEED_OF_LIGHT,
            rx_delay: rx_range / SPEED_OF_LIGHT,
            doppler,
            dod,
            doa,
            is_los: false,
        }
    }

    /// Total propagation delay τ = τ_Tx + τ_Rx.
    pub fn delay(&self) -> f64 {
        self.tx_delay + self.rx_delay
    }

    /// Bistatic range R_Tx + R_Rx in metres.
    pub fn bistatic_range(&self) -> f64 {
        self.delay() * SPEED_OF_LIGHT
    }
}

/// The set of paths of one scenario, with exactly one line-of-sight path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Path>", into = "Vec<Path>")]
pub struct PathSet {
    paths: Vec<Path>,
}

impl PathSet {
    pub fn new(paths: Vec<Path>) -> Result<Self> {
        let los: Vec<&Path> = paths.iter().filter(|p| p.is_los).collect();
        if los.len() != 1 {
            return Err(IsacError::Model(format!("expected exactly one line-of-sight path, found {}", los.len())));
        }
        if los[0].doppler != 0.0 || los[0].rx_delay != 0.0 {
            return Err(IsacError::Model("line-of-sight path must have zero Doppler and zero receive-side delay".into()));
        }
        for (i, p) in paths.iter().enumerate() {
            if !(p.tx_delay >= 0.0 && p.rx_delay >= 0.0) {
                return Err(IsacError::Model(format!("path {i} has a negative delay")));
            }
            if !(p.attenuation.is_finite() && p.doppler.is_finite()) {
                return Err(IsacError::Model(format!("path {i} has non-finite parameters")));
            }
            p.dod.validated()?;
            p.doa.validated()?;
        }
        Ok(Self { paths })
    }

    pub fn los(&self) -> &Path {
        self.paths.iter().find(|p| p.is_los).expect("validated on construction")
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn max_delay(&self) -> f64 {
        self.paths.iter().map(Path::delay).fold(0.0, f64::max)
    }
}

impl TryFrom<Vec<Path>> for PathSet {
    type Error = IsacError;
    fn try_from(v: Vec<Path>) -> Result<Self> {
        PathSet::new(v)
    }
}

impl From<PathSet> for Vec<Path> {
    fn from(p: PathSet) -> Self {
        p.paths
    }
}
