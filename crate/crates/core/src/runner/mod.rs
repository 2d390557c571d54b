//! Scenario configuration, Monte-Carlo sweeps over the mismatch of the
//! receive chains, single-scenario replays and result export.

mod chain;
mod config;
mod export;
mod replay;
mod sweep;

pub use chain::{process, simulate, ChainOutput, Prepared, Simulated, SyncReport, SyncRow, TrialMetrics};
pub use config::*;
pub use sweep::{run_sweep, summarize, trial_seed, MeanStd, PointSummary, RecordMetrics, RunRecord, SweepResult};
pub use replay::{profile_peaks, run_scenario_replay, RangeDopplerCut, ReplayArtifacts};
pub use export::{export, read_records_json, records_csv, summary_csv, unix_now, write_records_json, ExportFormat, RunManifest};
