use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::cube::{RadarCube, RangeAzimuthCut, WindowSet};
use super::image::ImageAxes;
use crate::dsp::power_db;
use crate::error::{IsacError, Result};
use crate::scalar::Real;

/// Axis description written next to a cube dump.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CubeSidecar {
    /// Dimension order of the flat array, slowest first.
    pub order: [String; 3],
    pub shape: [usize; 3],
    pub range_step_m: f64,
    pub doppler_step_hz: f64,
    pub azimuth_rad: Vec<f64>,
    pub windows: WindowSet,
    pub unit: String,
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Writes the cube as little-endian `f32` power in dB with a JSON sidecar at
/// `<path>.json`.
pub fn write_cube<T: Real>(path: &Path, cube: &RadarCube<T>) -> Result<()> {
    let file = File::create(path).map_err(|e| IsacError::io(path, e))?;
    let mut w = BufWriter::new(file);
    for v in &cube.values {
        let db = power_db(v.norm_sqr().to_f64().unwrap_or(0.0)) as f32;
        w.write_all(&db.to_le_bytes()).map_err(|e| IsacError::io(path, e))?;
    }
    w.flush().map_err(|e| IsacError::io(path, e))?;
    let ImageAxes { range_step, doppler_step, num_range, num_doppler } = cube.axes;
    let side = CubeSidecar {
        order: ["range".into(), "doppler".into(), "azimuth".into()],
        shape: [num_range, num_doppler, cube.azimuth.len()],
        range_step_m: range_step,
        doppler_step_hz: doppler_step,
        azimuth_rad: cube.azimuth.clone(),
        windows: cube.windows,
        unit: "dB (power)".into(),
    };
    let sp = sidecar_path(path);
    std::fs::write(&sp, serde_json::to_vec_pretty(&side)?).map_err(|e| IsacError::io(&sp, e))
}

/// Writes a range–azimuth cut as CSV rows `range_m,azimuth_deg,power_db`.
pub fn write_cut_csv<T: Real>(path: &Path, cut: &RangeAzimuthCut<T>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| IsacError::Serialization(e.to_string()))?;
    w.write_record(["range_m", "azimuth_deg", "power_db"]).map_err(|e| IsacError::Serialization(e.to_string()))?;
    for r in 0..cut.axes.num_range {
        for (s, az) in cut.azimuth.iter().enumerate() {
            let p = power_db(cut.get(r, s).norm_sqr().to_f64().unwrap_or(0.0));
            w.write_record([
                format!("{}", cut.axes.range(r)),
                format!("{}", az.to_degrees()),
                format!("{p}"),
            ])
            .map_err(|e| IsacError::Serialization(e.to_string()))?;
        }
    }
    w.flush().map_err(|e| IsacError::io(path, e))
}
