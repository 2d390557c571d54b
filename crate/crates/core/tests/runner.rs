use isac_sim::runner::*;
use isac_sim::waveform::iq::read_iq;

fn small_sweep() -> ScenarioConfig {
    let mut c = ScenarioConfig::default();
    c.sweep.sigma_tau_ts = vec![0.0, 0.1];
    c.sweep.trials = 2;
    c
}

#[test]
fn noiseless_single_point_sweep_is_clean() {
    let mut c = ScenarioConfig::default();
    c.sweep.sigma_tau_ts = vec![0.0];
    c.sweep.trials = 1;
    let r = run_sweep(&c).unwrap();
    assert_eq!(r.records.len(), 1);
    let m = r.records[0].metrics.expect("trial succeeded");
    assert!(m.evm_db < -100.0, "{}", m.evm_db);
    assert_eq!(m.ber, 0.0);
    assert_eq!(m.pplr_db, 0.0);
    assert_eq!(r.failure_rate(), 0.0);
}

#[test]
fn repeated_sweeps_give_identical_bytes() {
    let c = small_sweep();
    let a = run_sweep(&c).unwrap();
    let b = run_sweep(&c).unwrap();
    assert_eq!(records_csv(&a.config_hash, &a.records).unwrap(), records_csv(&b.config_hash, &b.records).unwrap());
    assert_eq!(summary_csv(&a.config_hash, &a.summaries).unwrap(), summary_csv(&b.config_hash, &b.summaries).unwrap());
}

#[test]
fn summaries_ignore_record_order() {
    let r = run_sweep(&small_sweep()).unwrap();
    let mut shuffled = r.records.clone();
    shuffled.reverse();
    let mut again = summarize(&shuffled);
    again.sort_by_key(|s| s.point);
    for (x, y) in r.summaries.iter().zip(&again) {
        assert_eq!(x.trials, y.trials);
        for (a, b) in x.stats.iter().zip(&y.stats) {
            assert!((a.mean - b.mean).abs() <= 1e-9 * a.mean.abs().max(1.0));
            assert!((a.std - b.std).abs() <= 1e-9 * a.std.abs().max(1.0));
        }
    }
}

#[test]
fn empty_records_give_header_only_csv() {
    let text = String::from_utf8(records_csv("abc", &[]).unwrap()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "# config_sha256=abc");
    assert!(lines[2].starts_with("point,trial,seed,sigma_tau_ts"));
}

#[test]
fn one_record_gives_one_full_row() {
    let mut c = small_sweep();
    c.sweep.sigma_tau_ts = vec![1.0];
    c.sweep.trials = 1;
    let r = run_sweep(&c).unwrap();
    let text = String::from_utf8(records_csv(&r.config_hash, &r.records).unwrap()).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 2);
    let header: Vec<&str> = rows[0].split(',').collect();
    let cells: Vec<&str> = rows[1].split(',').collect();
    assert_eq!(header.len(), cells.len());
    for (h, v) in header.iter().zip(&cells) {
        if *h != "error" {
            assert!(!v.is_empty(), "{h} is empty");
        }
    }
    assert_eq!(cells[4], "0");
}

#[test]
fn json_export_round_trips() {
    let c = small_sweep();
    let r = run_sweep(&c).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let files = export(&c, &r.records, ExportFormat::Json, dir.path()).unwrap();
    let (hash, back) = read_records_json(&files[0]).unwrap();
    assert_eq!(hash, r.config_hash);
    assert_eq!(back, r.records);
}

#[test]
fn csv_export_embeds_the_hash() {
    let c = small_sweep();
    let r = run_sweep(&c).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let files = export(&c, &r.records, ExportFormat::Csv, dir.path()).unwrap();
    for f in files {
        let text = std::fs::read_to_string(f).unwrap();
        assert!(text.starts_with(&format!("# config_sha256={}", c.hash())));
    }
    let mut other = c.clone();
    other.seed += 1;
    assert!(export(&other, &r.records, ExportFormat::Csv, dir.path()).is_err());
}

#[test]
fn iq_export_reproduces_received_samples() {
    let mut c = small_sweep();
    c.sweep.sigma_tau_ts = vec![10.0];
    c.sweep.trials = 1;
    let r = run_sweep(&c).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let files = export(&c, &r.records, ExportFormat::Iqbin, dir.path()).unwrap();
    assert_eq!(files.len(), c.num_rx);
    let p = Prepared::new(&c).unwrap();
    let sim = simulate(&p, 10.0 * p.ofdm.sampling_period(), r.records[0].seed).unwrap();
    for (f, want) in files.iter().zip(&sim.rx.channels) {
        let (got, side) = read_iq::<f64>(f).unwrap();
        assert_eq!(side.config_hash, c.hash());
        assert_eq!(got.len(), want.len());
        let err = got.iter().zip(want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        let scale = want.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err <= 1e-6 * scale);
    }
}

#[test]
fn ideal_replay_finds_the_los_azimuth() {
    let mut c = ScenarioConfig::default();
    c.scene.los.doa_deg = 12.0;
    let a = run_scenario_replay(&c).unwrap();
    let grid_step = a.cube.azimuth.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max).to_degrees();
    assert!((a.los_azimuth_deg - 12.0).abs() <= grid_step, "{} vs 12 (cell {grid_step})", a.los_azimuth_deg);
    let (r, q, _) = a.metrics.peak_cell;
    assert_eq!((r, q), (0, 0));
    let dir = tempfile::tempdir().unwrap();
    for f in a.write(dir.path()).unwrap() {
        assert!(f.exists(), "{}", f.display());
    }
}

#[test]
fn measured_like_replay_reports_residual_delay_spread() {
    let c = ScenarioConfig::measurement_like();
    let a = run_scenario_replay(&c).unwrap();
    assert!(a.sync.estimated);
    let res: Vec<f64> = a.sync.channels.iter().map(|r| r.residual_sto_ns).collect();
    let mean = res.iter().sum::<f64>() / res.len() as f64;
    let spread = (res.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / res.len() as f64).sqrt();
    assert!(spread > 0.0, "{res:?}");
}

#[test]
fn close_reflector_merges_in_range_and_separates_in_azimuth() {
    let mut c = ScenarioConfig::default();
    c.scene.los.doa_deg = 3.0;
    c.scene.targets = vec![TargetSpec {
        tx_range_m: 0.35,
        rx_range_m: 0.35,
        doppler_hz: 0.0,
        dod_deg: 0.0,
        doa_deg: -20.0,
        relative_power_db: -3.0,
    }];
    let a = run_scenario_replay(&c).unwrap();
    let ranges = a.range_peaks_m(20.0);
    assert_eq!(ranges.len(), 1, "{ranges:?}");
    assert_eq!(ranges[0], 0.0);
    let mut az = a.azimuth_peaks_deg(0, 10.0);
    assert_eq!(az.len(), 2, "{az:?}");
    az.sort_by(f64::total_cmp);
    let step = a.range_azimuth.azimuth.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max).to_degrees();
    assert!((az[0] + 20.0).abs() <= step && (az[1] - 3.0).abs() <= step, "{az:?}");
}
