use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use isac_sim::runner::{
    export, read_records_json, run_scenario_replay, run_sweep, unix_now, ExportFormat, Profile, RunManifest,
    ScenarioConfig,
};
use isac_sim::IsacError;

#[derive(Parser)]
#[command(name = "isac", version, about = "Multi-channel OFDM sensing and communication simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte-Carlo sweep over the receive-chain delay mismatch.
    Sweep(Common),
    /// One end-to-end run with sync report, constellations and radar images.
    Replay(Common),
    /// Print the system parameters of the configured numerology.
    Params(Common),
    /// Re-export sweep records as CSV, JSON or raw received samples.
    Export {
        #[command(flatten)]
        common: Common,
        /// Records written by a previous sweep (records.json).
        #[arg(long)]
        records: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Args)]
struct Common {
    /// Scenario file (JSON). Without it the built-in defaults are used.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    profile: Option<ProfileArg>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Decode with the transmitted bits instead of the estimates.
    #[arg(long)]
    genie: bool,
    #[arg(long)]
    trials: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Desk,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Iqbin,
}

impl From<Format> for ExportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => ExportFormat::Csv,
            Format::Json => ExportFormat::Json,
            Format::Iqbin => ExportFormat::Iqbin,
        }
    }
}

/// Failure classes mapped to the process exit status.
#[derive(Debug)]
enum Failure {
    Config(anyhow::Error),
    TooManyFailures { rate: f64, limit: f64 },
    Runtime(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::TooManyFailures { .. } => 3,
            Failure::Runtime(_) => 1,
        }
    }
}

impl From<IsacError> for Failure {
    fn from(e: IsacError) -> Self {
        if e.is_configuration() { Failure::Config(e.into()) } else { Failure::Runtime(e.into()) }
    }
}

fn load_config(common: &Common, fallback: fn() -> ScenarioConfig) -> Result<ScenarioConfig, Failure> {
    let mut config = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))
                .map_err(Failure::Config)?;
            ScenarioConfig::from_json(&text)
                .with_context(|| format!("parsing {}", path.display()))
                .map_err(Failure::Config)?
        }
        None => fallback(),
    };
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(p) = common.profile {
        config.profile = match p {
            ProfileArg::Desk => Profile::Desk,
            ProfileArg::Full => Profile::Full,
        };
    }
    if common.genie {
        config.genie_decoding = true;
    }
    if let Some(t) = common.trials {
        config.sweep.trials = t;
    }
    config.validate()?;
    Ok(config)
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), Failure> {
    let bytes = serde_json::to_vec_pretty(value).map_err(|e| Failure::Runtime(e.into()))?;
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display())).map_err(Failure::Runtime)
}

fn sweep(common: &Common) -> Result<(), Failure> {
    let config = load_config(common, ScenarioConfig::default)?;
    let started = unix_now();
    log::info!(
        "sweep: {} points x {} trials, config {}",
        config.sweep.sigma_tau_ts.len(),
        config.sweep.trials,
        config.hash()
    );
    let result = run_sweep(&config)?;
    let mut files = export(&config, &result.records, ExportFormat::Csv, &common.out)?;
    files.extend(export(&config, &result.records, ExportFormat::Json, &common.out)?);
    let config_path = common.out.join("config.json");
    write_json(&config_path, &config)?;
    files.push(config_path);
    let rate = result.failure_rate();
    let mut manifest = RunManifest::new(&config, started);
    manifest.files = files;
    manifest.failure_rate = Some(rate);
    manifest.write(&common.out.join("manifest.json"))?;
    for s in &result.summaries {
        let get = |n| s.metric(n).map_or(f64::NAN, |m| m.mean);
        println!(
            "sigma/Ts {:>10.3e}  EVM {:>8.2} dB  BER {:.2e}  PPLR {:>7.2} dB  SIR {:>7.2} dB  failed {}/{}",
            s.sigma_tau_ts,
            get("evm_db"),
            get("ber"),
            get("pplr_db"),
            get("sir_db"),
            s.failures,
            s.trials
        );
    }
    if rate > config.max_failure_rate {
        return Err(Failure::TooManyFailures { rate, limit: config.max_failure_rate });
    }
    Ok(())
}

fn replay(common: &Common) -> Result<(), Failure> {
    let config = load_config(common, ScenarioConfig::measurement_like)?;
    let started = unix_now();
    let artifacts = run_scenario_replay(&config)?;
    let mut files = artifacts.write(&common.out)?;
    let config_path = common.out.join("config.json");
    write_json(&config_path, &config)?;
    files.push(config_path);
    let mut manifest = RunManifest::new(&config, started);
    manifest.files = files;
    manifest.write(&common.out.join("manifest.json"))?;

    let s = &artifacts.sync;
    println!("global: STO {:.2} ns  CFO {:.4} kHz  SFO {:.4} ppm", s.global_sto_ns, s.global_cfo_khz, s.global_sfo_ppm);
    println!("truth:  CFO {:.4} kHz  SFO {:.4} ppm", s.true_cfo_khz, s.true_sfo_ppm);
    println!("{:>3} {:>12} {:>10} {:>10} {:>14} {:>16}", "ch", "STO ns", "CFO kHz", "SFO ppm", "resid. STO ns", "resid. CFO Hz");
    for r in &s.channels {
        println!(
            "{:>3} {:>12.3} {:>10.4} {:>10.4} {:>14.3} {:>16.2}",
            r.channel, r.sto_ns, r.cfo_khz, r.sfo_ppm, r.residual_sto_ns, r.residual_cfo_hz
        );
    }
    println!(
        "EVM: single channel {:.2} dB, combined {:.2} dB; BER {:.2e}; strongest return at {:.2} deg",
        artifacts.zf_evm.mean_db, artifacts.metrics.evm_db, artifacts.metrics.ber, artifacts.los_azimuth_deg
    );
    Ok(())
}

fn params(common: &Common) -> Result<(), Failure> {
    let mut config = load_config(common, ScenarioConfig::default)?;
    if common.profile.is_none() && common.config.is_none() {
        config.profile = Profile::Full;
    }
    let p = config.isac_params()?;
    for row in p.rows() {
        println!("{:<32} {}", row.name, row.formatted());
    }
    println!("{:<32} {:.2} dB", "range-Doppler gain (no DoA)", p.range_doppler_gain_db);
    std::fs::create_dir_all(&common.out).with_context(|| format!("creating {}", common.out.display())).map_err(Failure::Runtime)?;
    write_json(&common.out.join("params.json"), &p)
}

fn export_records(common: &Common, records: &Path, format: Format) -> Result<(), Failure> {
    let config = load_config(common, ScenarioConfig::default)?;
    let (_, records) = read_records_json(records)?;
    for f in export(&config, &records, format.into(), &common.out)? {
        println!("{}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Sweep(c) => sweep(c),
        Command::Replay(c) => replay(c),
        Command::Params(c) => params(c),
        Command::Export { common, records, format } => export_records(common, records, *format),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Config(e) => eprintln!("{e:#}"),
                Failure::TooManyFailures { rate, limit } => {
                    eprintln!("{:.1}% of trials failed, limit {:.1}%", rate * 100.0, limit * 100.0)
                }
                Failure::Runtime(e) => eprintln!("error: {e:#}"),
            }
            ExitCode::from(f.code())
        }
    }
}
