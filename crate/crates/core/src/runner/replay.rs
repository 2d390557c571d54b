use std::fs;
use std::path::{Path, PathBuf};

use super::chain::{process, simulate, Prepared, SyncReport, TrialMetrics};
use super::config::ScenarioConfig;
use crate::dsp::power_db;
use crate::error::{IsacError, Result};
use crate::metrics::{evm, Evm};
use crate::radar::{write_cube, write_cut_csv, ImageAxes, RadarCube, RangeAzimuthCut};
use crate::rng::Seed;
use crate::waveform::FrameGrid;
use crate::C64;

/// Range–Doppler power at one azimuth of the cube, dB, range-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RangeDopplerCut {
    pub axes: ImageAxes,
    pub azimuth_rad: f64,
    pub power_db: Vec<f64>,
}

impl RangeDopplerCut {
    fn from_cube(cube: &RadarCube<f64>, s: usize) -> Self {
        let ImageAxes { num_range, num_doppler, .. } = cube.axes;
        let power_db = (0..num_range)
            .flat_map(|r| (0..num_doppler).map(move |q| (r, q)))
            .map(|(r, q)| power_db(cube.get(r, q, s).norm_sqr()))
            .collect();
        Self { axes: cube.axes, azimuth_rad: cube.azimuth[s], power_db }
    }
}

/// Products of one end-to-end run.
pub struct ReplayArtifacts {
    pub config_hash: String,
    pub sync: SyncReport,
    /// Data cells after zero-forcing on channel 0.
    pub zf_constellation: Vec<C64>,
    /// Data cells after combining all channels.
    pub mrc_constellation: Vec<C64>,
    pub zf_evm: Evm,
    pub metrics: TrialMetrics,
    pub cube: RadarCube<f64>,
    pub range_doppler: RangeDopplerCut,
    /// Zero-Doppler slice of the cube.
    pub range_azimuth: RangeAzimuthCut<f64>,
    /// Azimuth of the strongest return, degrees.
    pub los_azimuth_deg: f64,
}

fn data_cells(grid: &FrameGrid<f64>) -> Vec<C64> {
    grid.data_positions().map(|(k, m)| grid.get(k, m)).collect()
}

/// Local maxima of a circular profile no more than `floor_db` below the
/// largest value, strongest first.
pub fn profile_peaks(power_db: &[f64], floor_db: f64) -> Vec<usize> {
    let n = power_db.len();
    let top = power_db.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut peaks: Vec<usize> = (0..n)
        .filter(|&i| {
            let v = power_db[i];
            v >= top - floor_db && v > power_db[(i + n - 1) % n] && v >= power_db[(i + 1) % n]
        })
        .collect();
    peaks.sort_by(|&a, &b| power_db[b].total_cmp(&power_db[a]));
    peaks
}

impl ReplayArtifacts {
    /// Power over azimuth at one range bin of the zero-Doppler cut, dB.
    pub fn azimuth_profile(&self, range_bin: usize) -> Vec<f64> {
        (0..self.range_azimuth.azimuth.len()).map(|s| power_db(self.range_azimuth.get(range_bin, s).norm_sqr())).collect()
    }

    /// Strongest power over azimuth at every range bin of the zero-Doppler
    /// cut, dB.
    pub fn range_profile(&self) -> Vec<f64> {
        let cut = &self.range_azimuth;
        (0..cut.axes.num_range)
            .map(|r| power_db((0..cut.azimuth.len()).map(|s| cut.get(r, s).norm_sqr()).fold(0.0, f64::max)))
            .collect()
    }

    /// Azimuths of the peaks at `range_bin`, degrees, strongest first.
    pub fn azimuth_peaks_deg(&self, range_bin: usize, floor_db: f64) -> Vec<f64> {
        profile_peaks(&self.azimuth_profile(range_bin), floor_db)
            .into_iter()
            .map(|s| self.range_azimuth.azimuth[s].to_degrees())
            .collect()
    }

    /// Signed relative ranges of the range-profile peaks, metres, strongest
    /// first.
    pub fn range_peaks_m(&self, floor_db: f64) -> Vec<f64> {
        let axes = self.range_azimuth.axes;
        profile_peaks(&self.range_profile(), floor_db)
            .into_iter()
            .map(|r| {
                let signed = if r < axes.num_range / 2 { r as f64 } else { r as f64 - axes.num_range as f64 };
                signed * axes.range_step
            })
            .collect()
    }

    /// Writes the report, constellations and images into `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).map_err(|e| IsacError::io(dir, e))?;
        let mut files = Vec::new();
        let sync = dir.join("sync_report.json");
        fs::write(&sync, serde_json::to_vec_pretty(&self.sync)?).map_err(|e| IsacError::io(&sync, e))?;
        files.push(sync);
        for (name, cells) in [("constellation_zf.csv", &self.zf_constellation), ("constellation_mrc.csv", &self.mrc_constellation)] {
            let path = dir.join(name);
            let mut text = String::from("re,im\n");
            for z in cells {
                text.push_str(&format!("{},{}\n", z.re, z.im));
            }
            fs::write(&path, text).map_err(|e| IsacError::io(&path, e))?;
            files.push(path);
        }
        let rd = dir.join("range_doppler.csv");
        let mut text = format!("# azimuth_deg={}\nrange_m,doppler_hz,power_db\n", self.range_doppler.azimuth_rad.to_degrees());
        let axes = self.range_doppler.axes;
        for r in 0..axes.num_range {
            for q in 0..axes.num_doppler {
                text.push_str(&format!("{},{},{}\n", axes.range(r), axes.doppler(q), self.range_doppler.power_db[r * axes.num_doppler + q]));
            }
        }
        fs::write(&rd, text).map_err(|e| IsacError::io(&rd, e))?;
        files.push(rd);
        let ra = dir.join("range_azimuth.csv");
        write_cut_csv(&ra, &self.range_azimuth)?;
        files.push(ra);
        let cube = dir.join("cube.f32");
        write_cube(&cube, &self.cube)?;
        files.push(cube.with_extension("f32.json"));
        files.push(cube);
        let summary = dir.join("replay_summary.json");
        let body = serde_json::json!({
            "config_hash": self.config_hash,
            "los_azimuth_deg": self.los_azimuth_deg,
            "zf_evm_db": self.zf_evm.mean_db,
            "metrics": self.metrics,
        });
        fs::write(&summary, serde_json::to_vec_pretty(&body)?).map_err(|e| IsacError::io(&summary, e))?;
        files.push(summary);
        Ok(files)
    }
}

/// One end-to-end run of the configured scenario with the configured delay
/// mismatch.
pub fn run_scenario_replay(config: &ScenarioConfig) -> Result<ReplayArtifacts> {
    let p = Prepared::new(config)?;
    let sigma = config.impairments.sigma_tau_ts * p.ofdm.sampling_period();
    let sim = simulate(&p, sigma, Seed(config.seed).stream("replay"))?;
    let out = process(&p, &sim)?;
    let zf_evm = evm(&out.zf.grid, &sim.frame.grid)?;
    let (_, _, s0) = out.metrics.peak_cell;
    Ok(ReplayArtifacts {
        config_hash: p.config_hash.clone(),
        sync: out.sync,
        zf_constellation: data_cells(&out.zf.grid),
        mrc_constellation: data_cells(&out.mrc.grid),
        zf_evm,
        metrics: out.metrics,
        range_doppler: RangeDopplerCut::from_cube(&out.cube, s0),
        los_azimuth_deg: out.cube.azimuth[s0].to_degrees(),
        range_azimuth: out.cube.range_azimuth(0),
        cube: out.cube,
    })
}
