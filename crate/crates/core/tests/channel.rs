use std::f64::consts::PI;

use isac_sim::channel::{
    propagate, AbeResponse, ImpairmentSpec, NoiseSpec, Path, PathSet, TxStream,
};
use isac_sim::geometry::{Angle, UlaGeometry};
use isac_sim::waveform::{FrameCodec, OfdmConfig, SymbolLayout};
use isac_sim::{Seed, C64};
use proptest::prelude::*;
use rand::Rng;

const FC: f64 = 3.68e9;

fn small_config() -> OfdmConfig {
    OfdmConfig { num_subcarriers: 64, num_symbols: 4, cp_length: 16, ..OfdmConfig::full_scale() }
}

fn los(distance: f64, doa_deg: f64) -> PathSet {
    PathSet::new(vec![Path::line_of_sight(1.0, distance, Angle::ZERO, Angle::from_degrees(doa_deg))]).unwrap()
}

/// One OFDM frame placed after `lead` zeros, padded to `len`.
fn ofdm_stream(cfg: &OfdmConfig, num_tx: usize, lead: usize, len: usize, seed: u64) -> TxStream<f64> {
    let codec = FrameCodec::<f64>::new(cfg, Seed(seed)).unwrap();
    let frame = codec.build(&[]).unwrap();
    let body = frame.to_time_domain(cfg).unwrap();
    let mut s = vec![C64::new(0.0, 0.0); len];
    s[lead..lead + body.len()].copy_from_slice(&body);
    let layout = SymbolLayout { start: lead, ..SymbolLayout::frame(cfg) };
    TxStream { channels: vec![s; num_tx], sample_rate: cfg.bandwidth, layout: Some(layout) }
}

#[test]
fn identity_scenario_delays_and_beamforms() {
    let cfg = small_config();
    let g_tx = UlaGeometry::new(4, FC).unwrap();
    let g_rx = UlaGeometry::new(1, FC).unwrap();
    let tx = ofdm_stream(&cfg, 4, 8, 500, 1);
    // LoS exactly three samples long.
    let dist = 3.0 * isac_sim::consts::SPEED_OF_LIGHT / cfg.bandwidth;
    let out = propagate(&tx, &g_tx, &g_rx, &los(dist, 0.0), &ImpairmentSpec::ideal(1), Seed(0)).unwrap();
    let carrier = C64::from_polar(1.0, -2.0 * PI * FC * dist / isac_sim::consts::SPEED_OF_LIGHT);
    for j in 3..500 {
        let want = tx.channels[0][j - 3] * 4.0 * carrier;
        assert!((out.channels[0][j] - want).norm() < 1e-9, "sample {j}");
    }
    assert!((out.truth.frame_start(0) - 11.0).abs() < 1e-9);
}

#[test]
fn receive_phase_progression_at_thirty_degrees() {
    let cfg = small_config();
    let g_tx = UlaGeometry::new(1, FC).unwrap();
    let g_rx = UlaGeometry::new(2, FC).unwrap();
    let tx = ofdm_stream(&cfg, 1, 4, 420, 2);
    let out = propagate(&tx, &g_tx, &g_rx, &los(1.0, 30.0), &ImpairmentSpec::ideal(2), Seed(0)).unwrap();
    for j in 10..380 {
        let ratio = out.channels[1][j] / out.channels[0][j];
        assert!((ratio.arg() + PI / 2.0).abs() < 1e-6, "sample {j}: {}", ratio.arg());
    }
}

#[test]
fn cfo_shifts_a_tone() {
    let len = 8192;
    let fs = 491.52e6;
    let f0 = 5.0 * fs / len as f64;
    let cfo = 15.4772e3;
    let x: Vec<C64> = (0..len).map(|n| C64::from_polar(1.0, 2.0 * PI * f0 * n as f64 / fs)).collect();
    let tx = TxStream { channels: vec![x], sample_rate: fs, layout: None };
    let g = UlaGeometry::new(1, FC).unwrap();
    let imp = ImpairmentSpec { cfo, ..ImpairmentSpec::ideal(1) };
    let out = propagate(&tx, &g, &g, &los(0.0, 0.0), &imp, Seed(0)).unwrap();
    // Oracle: frequency of the dominant peak of a zero-padded DFT, refined by
    // golden-section search of the DTFT magnitude.
    let y = &out.channels[0];
    let dtft = |f: f64| -> f64 {
        y.iter().enumerate().map(|(n, v)| v * C64::from_polar(1.0, -2.0 * PI * f * n as f64 / fs)).sum::<C64>().norm()
    };
    let df = fs / len as f64;
    let (mut a, mut b) = (f0 + cfo - df / 2.0, f0 + cfo + df / 2.0);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..60 {
        let c = b - r * (b - a);
        let d = a + r * (b - a);
        if dtft(c) > dtft(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let measured = (a + b) / 2.0 - f0;
    let subcarrier_spacing = OfdmConfig::full_scale().subcarrier_spacing();
    assert!((measured - cfo).abs() < subcarrier_spacing / 1000.0, "measured {measured}");
}

#[test]
fn noise_power_calibration() {
    let len = 1_000_000;
    let fs = 491.52e6;
    let tx = TxStream { channels: vec![vec![C64::new(0.0, 0.0); len]], sample_rate: fs, layout: None };
    let g_tx = UlaGeometry::new(1, FC).unwrap();
    let g_rx = UlaGeometry::new(2, FC).unwrap();
    let noise = NoiseSpec { noise_figure_db: 10.0, temperature: 290.0 };
    let imp = ImpairmentSpec { noise: Some(noise), ..ImpairmentSpec::ideal(2) };
    let out = propagate(&tx, &g_tx, &g_rx, &los(0.0, 0.0), &imp, Seed(3)).unwrap();
    let want = 1.380649e-23 * fs * 290.0 * 10.0;
    for ch in &out.channels {
        let p = ch.iter().map(|z| z.norm_sqr()).sum::<f64>() / len as f64;
        assert!((p / want - 1.0).abs() < 0.02, "power ratio {}", p / want);
    }
    assert_ne!(out.channels[0][0], out.channels[1][0]);
}

#[test]
fn static_los_phase_is_constant_from_frame_to_frame() {
    let cfg = small_config();
    let g_tx = UlaGeometry::new(2, FC).unwrap();
    let g_rx = UlaGeometry::new(2, FC).unwrap();
    let tx = ofdm_stream(&cfg, 2, 0, 800, 4);
    let imp = ImpairmentSpec {
        sto: 1.3e-9,
        sfo: 0.0,
        common_phase: None,
        abe: vec![AbeResponse::delayed(0.7e-9), AbeResponse::delayed(1.9e-9)],
        ..ImpairmentSpec::ideal(2)
    };
    let paths = los(0.8, 10.0);
    let first = propagate(&tx, &g_tx, &g_rx, &paths, &ImpairmentSpec { common_phase: Some(0.3), ..imp.clone() }, Seed(7)).unwrap();
    let second = propagate(&tx, &g_tx, &g_rx, &paths, &ImpairmentSpec { common_phase: Some(0.3), ..imp }, Seed(8)).unwrap();
    for (a, b) in first.channels.iter().zip(&second.channels) {
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).norm() < 1e-12);
        }
    }
}

#[test]
fn rejects_bad_inputs() {
    let cfg = small_config();
    let g = UlaGeometry::new(1, FC).unwrap();
    let tx = ofdm_stream(&cfg, 1, 0, 400, 1);
    let far = los(500.0 / cfg.bandwidth * isac_sim::consts::SPEED_OF_LIGHT, 0.0);
    let err = propagate(&tx, &g, &g, &far, &ImpairmentSpec::ideal(1), Seed(0)).unwrap_err();
    assert!(err.is_configuration());
    let refl = Path::scatterer(1.0, 1.0, 1.0, 0.0, Angle::ZERO, Angle::ZERO);
    assert!(PathSet::new(vec![refl]).is_err());
}

fn random_stream(len: usize, rng: &mut impl Rng) -> Vec<C64> {
    (0..len).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn propagation_is_linear(seed in any::<u64>(), a_re in -2.0..2.0f64, b_im in -2.0..2.0f64, sto_ns in 0.0..20.0f64, cfo in -5e4..5e4f64, sfo_ppm in -20.0..20.0f64) {
        let mut rng = Seed(seed).rng();
        let len = 300;
        let x = random_stream(len, &mut rng);
        let y = random_stream(len, &mut rng);
        let (a, b) = (C64::new(a_re, 0.5), C64::new(0.25, b_im));
        let g_tx = UlaGeometry::new(1, FC).unwrap();
        let g_rx = UlaGeometry::new(3, FC).unwrap();
        let paths = PathSet::new(vec![
            Path::line_of_sight(1.0, 0.5, Angle::ZERO, Angle::from_degrees(12.0)),
            Path::scatterer(0.3, 1.5, 2.0, 900.0, Angle::from_degrees(-40.0), Angle::from_degrees(25.0)),
        ]).unwrap();
        let imp = ImpairmentSpec {
            sto: sto_ns * 1e-9,
            cfo,
            sfo: sfo_ppm * 1e-6,
            common_phase: Some(1.0),
            abe: vec![AbeResponse::delayed(0.0), AbeResponse::delayed(1e-9), AbeResponse::delayed(2.5e-9)],
            ..ImpairmentSpec::ideal(3)
        };
        let run = |s: Vec<C64>| {
            let tx = TxStream { channels: vec![s], sample_rate: 491.52e6, layout: None };
            propagate(&tx, &g_tx, &g_rx, &paths, &imp, Seed(seed)).unwrap().channels
        };
        let combo: Vec<C64> = x.iter().zip(&y).map(|(p, q)| a * p + b * q).collect();
        let (ox, oy, oc) = (run(x), run(y), run(combo));
        for n in 0..3 {
            let scale = oc[n].iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-30);
            for j in 0..len {
                let want = a * ox[n][j] + b * oy[n][j];
                prop_assert!((oc[n][j] - want).norm() / scale < 1e-10);
            }
        }
    }
}
