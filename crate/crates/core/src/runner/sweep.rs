use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chain::{process, simulate, Prepared, TrialMetrics};
use super::config::ScenarioConfig;
use crate::error::Result;
use crate::metrics::pplr;
use crate::rng::Seed;

/// Figures of one successful trial, in reporting units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordMetrics {
    pub evm_db: f64,
    pub ber: f64,
    pub uncoded_ber: f64,
    pub pplr_db: f64,
    pub range_pslr_db: f64,
    pub range_islr_db: f64,
    pub azimuth_pslr_db: f64,
    pub azimuth_islr_db: f64,
    pub sir_db: f64,
}

impl RecordMetrics {
    pub const NAMES: [&'static str; 9] = [
        "evm_db",
        "ber",
        "uncoded_ber",
        "pplr_db",
        "range_pslr_db",
        "range_islr_db",
        "azimuth_pslr_db",
        "azimuth_islr_db",
        "sir_db",
    ];

    pub fn values(&self) -> [f64; 9] {
        [
            self.evm_db,
            self.ber,
            self.uncoded_ber,
            self.pplr_db,
            self.range_pslr_db,
            self.range_islr_db,
            self.azimuth_pslr_db,
            self.azimuth_islr_db,
            self.sir_db,
        ]
    }

    fn from_trial(m: &TrialMetrics, reference_peak: f64) -> Result<Self> {
        Ok(Self {
            evm_db: m.evm_db,
            ber: m.ber,
            uncoded_ber: m.uncoded_ber,
            pplr_db: pplr(m.peak_power, reference_peak)?,
            range_pslr_db: m.range_pslr_db,
            range_islr_db: m.range_islr_db,
            azimuth_pslr_db: m.azimuth_pslr_db,
            azimuth_islr_db: m.azimuth_islr_db,
            sir_db: m.sir_db,
        })
    }
}

/// Outcome of one (point, trial) pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecord {
    pub config_hash: String,
    pub point: usize,
    pub trial: usize,
    /// Seed the trial's random streams were derived from.
    pub seed: Seed,
    pub sigma_tau_ts: f64,
    pub metrics: Option<RecordMetrics>,
    pub error: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    /// Sample standard deviation; zero for a single trial.
    pub std: f64,
}

impl MeanStd {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self { mean: f64::NAN, std: f64::NAN };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = if n > 1 { values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64 } else { 0.0 };
        Self { mean, std: var.sqrt() }
    }
}

/// Statistics of one grid point over its successful trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub point: usize,
    pub sigma_tau_ts: f64,
    pub trials: usize,
    pub failures: usize,
    /// One entry per name in [`RecordMetrics::NAMES`].
    pub stats: Vec<MeanStd>,
}

impl PointSummary {
    pub fn metric(&self, name: &str) -> Option<MeanStd> {
        RecordMetrics::NAMES.iter().position(|n| *n == name).map(|i| self.stats[i])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config_hash: String,
    pub records: Vec<RunRecord>,
    pub summaries: Vec<PointSummary>,
}

impl SweepResult {
    pub fn failure_rate(&self) -> f64 {
        if self.records.is_empty() {
            return 0.0;
        }
        self.records.iter().filter(|r| r.error.is_some()).count() as f64 / self.records.len() as f64
    }
}

pub fn trial_seed(master: u64, point: usize, trial: usize) -> Seed {
    Seed(master).child(point as u64).child(trial as u64)
}

fn run_trial(p: &Prepared, sigma_tau_ts: f64, seed: Seed) -> Result<RecordMetrics> {
    let sigma = sigma_tau_ts * p.ofdm.sampling_period();
    let reference = process(p, &simulate(p, 0.0, seed)?)?.metrics;
    let trial = if sigma == 0.0 { reference } else { process(p, &simulate(p, sigma, seed)?)?.metrics };
    RecordMetrics::from_trial(&trial, reference.peak_power)
}

/// Monte-Carlo sweep over the standard deviation of the receive-chain delay
/// mismatch. Each trial's peak power is compared with a mismatch-free run that
/// shares its seed. Stage failures are recorded per trial and the run goes on.
pub fn run_sweep(config: &ScenarioConfig) -> Result<SweepResult> {
    let p = Prepared::new(config)?;
    let grid = &config.sweep.sigma_tau_ts;
    let trials = config.sweep.trials;
    let jobs: Vec<(usize, usize)> = (0..grid.len()).flat_map(|i| (0..trials).map(move |t| (i, t))).collect();
    let records: Vec<RunRecord> = jobs
        .par_iter()
        .map(|&(point, trial)| {
            let seed = trial_seed(config.seed, point, trial);
            let outcome = run_trial(&p, grid[point], seed);
            if let Err(e) = &outcome {
                log::warn!("point {point} trial {trial} failed: {e}");
            }
            RunRecord {
                config_hash: p.config_hash.clone(),
                point,
                trial,
                seed,
                sigma_tau_ts: grid[point],
                metrics: outcome.as_ref().ok().copied(),
                error: outcome.err().map(|e| e.to_string()),
            }
        })
        .collect();
    let summaries = summarize(&records);
    Ok(SweepResult { config_hash: p.config_hash, records, summaries })
}

/// Per-point mean and standard deviation, points in first-seen order.
pub fn summarize(records: &[RunRecord]) -> Vec<PointSummary> {
    let mut points: Vec<usize> = records.iter().map(|r| r.point).collect();
    points.dedup();
    points
        .into_iter()
        .map(|point| {
            let rows: Vec<&RunRecord> = records.iter().filter(|r| r.point == point).collect();
            let ok: Vec<[f64; 9]> = rows.iter().filter_map(|r| r.metrics.map(|m| m.values())).collect();
            let stats = (0..RecordMetrics::NAMES.len())
                .map(|i| MeanStd::of(&ok.iter().map(|v| v[i]).collect::<Vec<_>>()))
                .collect();
            PointSummary {
                point,
                sigma_tau_ts: rows[0].sigma_tau_ts,
                trials: rows.len(),
                failures: rows.len() - ok.len(),
                stats,
            }
        })
        .collect()
}
