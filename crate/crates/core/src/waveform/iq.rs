//! Raw I/Q sample files: little-endian interleaved `f32` pairs with a JSON
//! sidecar describing the stream.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{IsacError, Result};
use crate::scalar::{lit, wide, Real};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IqSidecar {
    /// Samples per second.
    pub sample_rate: f64,
    /// Number of complex samples.
    pub length: usize,
    pub channel: usize,
    pub config_hash: String,
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut p = path.as_os_str().to_owned();
    p.push(".json");
    PathBuf::from(p)
}

/// Writes `samples` to `path` and the sidecar to `path` + `.json`.
pub fn write_iq<T: Real>(path: &Path, samples: &[Complex<T>], sidecar: &IqSidecar) -> Result<()> {
    if sidecar.length != samples.len() {
        return Err(IsacError::Argument(format!("sidecar length {} for {} samples", sidecar.length, samples.len())));
    }
    let mut bytes = Vec::with_capacity(samples.len() * 8);
    for z in samples {
        bytes.extend_from_slice(&(wide(z.re) as f32).to_le_bytes());
        bytes.extend_from_slice(&(wide(z.im) as f32).to_le_bytes());
    }
    fs::write(path, bytes).map_err(|e| IsacError::io(path, e))?;
    let side = sidecar_path(path);
    let json = serde_json::to_vec_pretty(sidecar)?;
    fs::write(&side, json).map_err(|e| IsacError::io(side, e))
}

pub fn read_iq<T: Real>(path: &Path) -> Result<(Vec<Complex<T>>, IqSidecar)> {
    let side = sidecar_path(path);
    let text = fs::read(&side).map_err(|e| IsacError::io(&side, e))?;
    let sidecar: IqSidecar = serde_json::from_slice(&text)?;
    let bytes = fs::read(path).map_err(|e| IsacError::io(path, e))?;
    if bytes.len() != sidecar.length * 8 {
        return Err(IsacError::Serialization(format!(
            "{} holds {} bytes, sidecar announces {} samples",
            path.display(),
            bytes.len(),
            sidecar.length
        )));
    }
    let samples = bytes
        .chunks_exact(8)
        .map(|c| {
            let re = f32::from_le_bytes([c[0], c[1], c[2], c[3]]);
            let im = f32::from_le_bytes([c[4], c[5], c[6], c[7]]);
            Complex::new(lit(f64::from(re)), lit(f64::from(im)))
        })
        .collect();
    Ok((samples, sidecar))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ch0.iq");
        let x = vec![Complex::new(0.5f64, -0.25), Complex::new(1.0, 2.0)];
        let side = IqSidecar { sample_rate: 491.52e6, length: 2, channel: 0, config_hash: "abc".into() };
        write_iq(&path, &x, &side).unwrap();
        assert_eq!(fs::read(&path).unwrap()[..4], 0.5f32.to_le_bytes());
        let (y, s) = read_iq::<f64>(&path).unwrap();
        assert_eq!(y, x);
        assert_eq!(s, side);
    }
}
