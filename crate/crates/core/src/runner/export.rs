use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::chain::{simulate, Prepared};
use super::config::ScenarioConfig;
use super::sweep::{summarize, PointSummary, RecordMetrics, RunRecord};
use crate::error::{IsacError, Result};
use crate::waveform::iq::{write_iq, IqSidecar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Csv,
    Json,
    Iqbin,
}

impl FromStr for ExportFormat {
    type Err = IsacError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "iqbin" => Ok(Self::Iqbin),
            other => Err(IsacError::Configuration(format!("unknown export format {other:?}"))),
        }
    }
}

const UNITS: &str = "# units: sigma_tau in sampling periods; evm, pplr, pslr, islr, sir in dB; ber as a fraction";

fn csv_error(e: csv::Error) -> IsacError {
    IsacError::Serialization(e.to_string())
}

fn log10_text(v: f64) -> String {
    if v == 0.0 { "-inf".into() } else { format!("{}", v.log10()) }
}

fn write_text(path: &Path, body: Vec<u8>) -> Result<()> {
    fs::write(path, body).map_err(|e| IsacError::io(path, e))
}

/// CSV bytes with one row per record. Failed trials leave the metric columns
/// empty and carry the error text.
pub fn records_csv(config_hash: &str, records: &[RunRecord]) -> Result<Vec<u8>> {
    let mut out = format!("# config_sha256={config_hash}\n{UNITS}\n").into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut out);
        let mut header = vec!["point", "trial", "seed", "sigma_tau_ts", "log10_sigma_tau_ts"];
        header.extend(RecordMetrics::NAMES);
        header.push("error");
        w.write_record(&header).map_err(csv_error)?;
        for r in records {
            let mut row =
                vec![r.point.to_string(), r.trial.to_string(), r.seed.0.to_string(), format!("{}", r.sigma_tau_ts), log10_text(r.sigma_tau_ts)];
            match &r.metrics {
                Some(m) => row.extend(m.values().iter().map(|v| format!("{v}"))),
                None => row.extend(RecordMetrics::NAMES.iter().map(|_| String::new())),
            }
            row.push(r.error.clone().unwrap_or_default());
            w.write_record(&row).map_err(csv_error)?;
        }
        w.flush().map_err(|e| IsacError::Serialization(e.to_string()))?;
    }
    Ok(out)
}

/// CSV bytes with mean and standard deviation per grid point.
pub fn summary_csv(config_hash: &str, summaries: &[PointSummary]) -> Result<Vec<u8>> {
    let mut out = format!("# config_sha256={config_hash}\n{UNITS}\n").into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut out);
        let mut header: Vec<String> =
            ["point", "sigma_tau_ts", "log10_sigma_tau_ts", "trials", "failures"].map(String::from).to_vec();
        for n in RecordMetrics::NAMES {
            header.push(format!("{n}_mean"));
            header.push(format!("{n}_std"));
        }
        w.write_record(&header).map_err(csv_error)?;
        for s in summaries {
            let mut row = vec![
                s.point.to_string(),
                format!("{}", s.sigma_tau_ts),
                log10_text(s.sigma_tau_ts),
                s.trials.to_string(),
                s.failures.to_string(),
            ];
            for m in &s.stats {
                row.push(format!("{}", m.mean));
                row.push(format!("{}", m.std));
            }
            w.write_record(&row).map_err(csv_error)?;
        }
        w.flush().map_err(|e| IsacError::Serialization(e.to_string()))?;
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordFile {
    config_hash: String,
    records: Vec<RunRecord>,
}

pub fn write_records_json(path: &Path, config_hash: &str, records: &[RunRecord]) -> Result<()> {
    let file = RecordFile { config_hash: config_hash.into(), records: records.to_vec() };
    write_text(path, serde_json::to_vec_pretty(&file)?)
}

/// Reads records written by [`write_records_json`], with their config hash.
pub fn read_records_json(path: &Path) -> Result<(String, Vec<RunRecord>)> {
    let bytes = fs::read(path).map_err(|e| IsacError::io(path, e))?;
    let file: RecordFile = serde_json::from_slice(&bytes)?;
    Ok((file.config_hash, file.records))
}

/// Writes `records` into `dir` in the chosen format and returns the files.
/// Raw samples are regenerated from each record's seed, so `config` must be
/// the configuration that produced the records.
pub fn export(config: &ScenarioConfig, records: &[RunRecord], format: ExportFormat, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| IsacError::io(dir, e))?;
    let hash = config.hash();
    if let Some(r) = records.iter().find(|r| r.config_hash != hash) {
        return Err(IsacError::Configuration(format!("record hash {} differs from configuration hash {hash}", r.config_hash)));
    }
    match format {
        ExportFormat::Csv => {
            let records_path = dir.join("records.csv");
            write_text(&records_path, records_csv(&hash, records)?)?;
            let summary_path = dir.join("summary.csv");
            write_text(&summary_path, summary_csv(&hash, &summarize(records))?)?;
            Ok(vec![records_path, summary_path])
        }
        ExportFormat::Json => {
            let path = dir.join("records.json");
            write_records_json(&path, &hash, records)?;
            Ok(vec![path])
        }
        ExportFormat::Iqbin => {
            let p = Prepared::new(config)?;
            let mut files = Vec::new();
            for r in records {
                let sim = simulate(&p, r.sigma_tau_ts * p.ofdm.sampling_period(), r.seed)?;
                for (channel, samples) in sim.rx.channels.iter().enumerate() {
                    let path = dir.join(format!("rx_p{}_t{}_ch{channel}.iq", r.point, r.trial));
                    let side = IqSidecar { sample_rate: p.ofdm.bandwidth, length: samples.len(), channel, config_hash: hash.clone() };
                    write_iq(&path, samples, &side)?;
                    files.push(path);
                }
            }
            Ok(files)
        }
    }
}

/// Run provenance kept apart from the deterministic exports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub config_hash: String,
    pub seed: u64,
    pub os: String,
    pub arch: String,
    pub worker_threads: usize,
    pub started_unix_s: f64,
    pub finished_unix_s: f64,
    pub files: Vec<PathBuf>,
    pub failure_rate: Option<f64>,
}

pub fn unix_now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64())
}

impl RunManifest {
    pub fn new(config: &ScenarioConfig, started_unix_s: f64) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").into(),
            config_hash: config.hash(),
            seed: config.seed,
            os: std::env::consts::OS.into(),
            arch: std::env::consts::ARCH.into(),
            worker_threads: rayon::current_num_threads(),
            started_unix_s,
            finished_unix_s: unix_now(),
            files: Vec::new(),
            failure_rate: None,
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_text(path, serde_json::to_vec_pretty(self)?)
    }
}
