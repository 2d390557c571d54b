use std::f64::consts::PI;

use isac_sim::consts::{DB_CEIL, DB_FLOOR};
use isac_sim::dsp::Dft;
use isac_sim::metrics::{
    delay_to_phase_std, derive_isac_params, evm, image_snr, mean_image_sir, peak_sidelobe_metrics, pplr,
    reflection_attenuation, LinkBudget, DEFAULT_MAINLOBE_GUARD,
};
use isac_sim::waveform::OfdmConfig;
use isac_sim::{FrameGrid64, Seed, C64};
use num_rational::Ratio;
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

fn round_to(x: f64, decimals: i32) -> f64 {
    let s = 10f64.powi(decimals);
    (x * s).round() / s
}

#[test]
fn full_numerology_parameters() {
    let p = derive_isac_params(&OfdmConfig::full_scale(), 8, Ratio::new(2, 3), 2).unwrap();
    assert_eq!(round_to(p.comm_rate / 1e9, 2), 0.39);
    assert_eq!(round_to(p.range_resolution, 2), 0.61);
    assert_eq!(round_to(p.max_unambiguous_range, 2), 1249.14);
    assert_eq!(round_to(p.max_isi_free_range, 2), 312.28);
    assert_eq!(round_to(p.doppler_resolution, 2), 375.0);
    assert_eq!(round_to(p.max_unambiguous_doppler / 1e3, 2), 96.0);
    assert_eq!(round_to(p.max_ici_free_doppler / 1e3, 2), 24.0);
    assert_eq!(round_to(p.azimuth_resolution.to_degrees(), 2), 14.32);
    assert_eq!(round_to(p.max_unambiguous_azimuth.to_degrees(), 2), 90.0);
    // Gain including the eight-channel beamformer, and the NM part alone.
    assert_eq!(round_to(p.processing_gain_db, 2), 69.24);
    assert_eq!(round_to(p.range_doppler_gain_db, 2), 60.21);
}

fn budget() -> LinkBudget {
    LinkBudget {
        tx_power: 1.0,
        tx_gain: 1.0,
        rx_gain: 1.0,
        rcs: 1.0,
        tx_range: 100.0,
        rx_range: 100.0,
        wavelength: 299_792_458.0 / 27.5e9,
        bandwidth: 491.52e6,
        temperature: 290.0,
        noise_figure: 10.0,
    }
}

#[test]
fn image_snr_budget() {
    let b = budget();
    let gp = 2048.0 * 512.0;
    let single = image_snr(&b, 4, 8, gp, false).unwrap();
    let with = image_snr(&b, 4, 8, gp, true).unwrap();
    assert!((with - single - 10.0 * 8f64.log10()).abs() < 1e-12);
    let far = image_snr(&LinkBudget { tx_range: 200.0, ..b }, 4, 8, gp, false).unwrap();
    assert!((single - far - 20.0 * 2f64.log10()).abs() < 1e-12);

    // Independent evaluation, term by term in dB.
    let lambda_db = 20.0 * (299_792_458.0f64 / 27.5e9).log10();
    let spreading_db = 30.0 * (4.0 * PI).log10() + 80.0;
    let noise_db = 10.0 * (1.380_649e-23f64 * 491.52e6 * 290.0 * 10.0).log10();
    let expected = 10.0 * 4f64.log10() + lambda_db + 10.0 * gp.log10() - spreading_db - noise_db;
    assert!((single - expected).abs() < 1e-9, "{single} vs {expected}");
    assert!((single - 21.06).abs() < 0.01, "{single}");

    assert!(image_snr(&LinkBudget { rcs: 0.0, ..b }, 4, 8, gp, true).is_err());
    let a = reflection_attenuation(&b).unwrap();
    // Per-element received power over noise, times gains, is the same budget.
    let per_element = 10.0 * (a * a / b.noise_power()).log10();
    assert!((per_element + 10.0 * (4.0 * gp).log10() - single).abs() < 1e-9);
}

fn qpsk_grid(seed: u64) -> FrameGrid64 {
    let cfg = OfdmConfig { num_subcarriers: 64, num_symbols: 8, cp_length: 16, ..OfdmConfig::full_scale() };
    let mut rng = Seed(seed).stream("qpsk").rng();
    let cells = (0..64 * 8)
        .map(|_| {
            let re = if rng.random::<bool>() { 1.0 } else { -1.0 };
            let im = if rng.random::<bool>() { 1.0 } else { -1.0 };
            C64::new(re, im) / 2f64.sqrt()
        })
        .collect();
    FrameGrid64::from_cells(&cfg, cells).unwrap()
}

#[test]
fn evm_examples() {
    let x = qpsk_grid(1);
    let e = evm(&x, &x).unwrap();
    assert_eq!(e.mean_db, DB_FLOOR);

    let mut y = x.clone();
    let mut rng = Seed(2).stream("evm-noise").rng();
    let s = (0.01f64 / 2.0).sqrt();
    for v in y.cells_mut() {
        let (a, b): (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
        *v += C64::new(a, b) * s;
    }
    let e = evm(&y, &x).unwrap();
    // 384 data cells: the estimate's own spread is about 0.22 dB.
    assert!((e.mean_db + 20.0).abs() < 0.7, "{}", e.mean_db);
    assert!(e.spread_db > 0.0);

    let mut y = x.clone();
    for v in y.cells_mut() {
        *v *= 1.122;
    }
    let e = evm(&y, &x).unwrap();
    assert!((e.mean_db - 20.0 * 0.122f64.log10()).abs() < 1e-9);
    assert!((e.mean_db + 18.27).abs() < 0.01);
    assert!(e.spread_db < 1e-9);
}

#[test]
fn evm_over_many_noise_draws() {
    let x = qpsk_grid(3);
    let mut acc = 0.0;
    let trials = 200;
    for seed in 0..trials {
        let mut rng = Seed(seed).stream("evm-noise").rng();
        let mut y = x.clone();
        let s = (0.01f64 / 2.0).sqrt();
        for v in y.cells_mut() {
            let (a, b): (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
            *v += C64::new(a, b) * s;
        }
        acc += 10f64.powf(evm(&y, &x).unwrap().mean_db / 10.0);
    }
    let db = 10.0 * (acc / trials as f64).log10();
    assert!((db + 20.0).abs() < 0.1, "{db}");
}

/// Samples of `|Σ_n e^{iωn}|` for an `len`-point rectangular aperture,
/// oversampled `pad` times.
fn dirichlet(len: usize, pad: usize) -> Vec<f64> {
    let n = len * pad;
    let mut buf: Vec<C64> = (0..n).map(|i| C64::new(if i < len { 1.0 } else { 0.0 }, 0.0)).collect();
    Dft::<f64>::new(n).forward(&mut buf);
    buf.iter().map(|v| v.norm()).collect()
}

/// First sidelobe of the Dirichlet kernel, by dense search between its first
/// two nulls.
fn dirichlet_first_sidelobe_db(len: usize) -> f64 {
    let n = len as f64;
    let k = |x: f64| ((n * x / 2.0).sin() / (x / 2.0).sin()).abs();
    let (a, b) = (2.0 * PI / n, 4.0 * PI / n);
    let best = (0..=20_000).map(|i| k(a + (b - a) * i as f64 / 20_000.0)).fold(0.0, f64::max);
    20.0 * (best / n).log10()
}

#[test]
fn rectangular_eight_point_sidelobes() {
    let m = peak_sidelobe_metrics(&dirichlet(8, 64), DEFAULT_MAINLOBE_GUARD).unwrap();
    assert!((m.pslr_db + 12.8).abs() < 0.05, "{}", m.pslr_db);
    assert!(m.islr_db < 0.0 && m.islr_db > -20.0);
}

#[test]
fn sidelobe_edge_cases() {
    let mut delta = vec![0.0; 16];
    delta[5] = 1.0;
    let m = peak_sidelobe_metrics(&delta, 2).unwrap();
    assert_eq!((m.pslr_db, m.islr_db), (DB_FLOOR, DB_FLOOR));
    assert!(peak_sidelobe_metrics(&[1.0; 16], 2).is_err());
    assert!(peak_sidelobe_metrics(&[0.0; 16], 2).is_err());
    // Mainlobe wraps around the profile edge.
    let cut: Vec<f64> = dirichlet(8, 4).into_iter().collect();
    let m = peak_sidelobe_metrics(&cut, 2).unwrap();
    assert_eq!(m.mainlobe, (28, 4));
}

#[test]
fn pplr_examples() {
    assert_eq!(pplr(2.0, 2.0).unwrap(), 0.0);
    assert!((pplr(0.5, 1.0).unwrap() + 3.0103).abs() < 1e-4);
    assert!(pplr(1.0, 0.0).is_err());

    // Incoherent vs coherent eight-phasor sum.
    let mut rng = Seed(11).stream("phasors").rng();
    let trials = 20_000;
    let mean: f64 = (0..trials)
        .map(|_| (0..8).map(|_| C64::from_polar(1.0, rng.random_range(-PI..PI))).sum::<C64>().norm_sqr())
        .sum::<f64>()
        / trials as f64;
    let loss = pplr(mean, 64.0).unwrap();
    assert!((loss + 9.03).abs() < 0.1, "{loss}");
}

#[test]
fn sir_examples() {
    let mut img = vec![0.0; 32];
    img[9] = 3.0;
    assert_eq!(mean_image_sir(&img, 8, (1, 1)).unwrap(), DB_CEIL);
    assert!(mean_image_sir(&[2.0; 32], 8, (3, 7)).unwrap().abs() < 1e-12);
    assert!(mean_image_sir(&img, 8, (4, 0)).is_err());
    assert!(mean_image_sir(&[1.0], 1, (0, 0)).is_err());
    assert!(mean_image_sir(&img, 8, (0, 0)).is_err());
}

#[test]
fn phase_spread_anchor_points() {
    let ts = 1.0 / 491.52e6;
    let a = delay_to_phase_std(1e-3 * ts, 3.68e9).unwrap();
    // Printed to two decimals; allow one unit in the last digit.
    assert!((a.unwrapped.to_degrees() - 2.70).abs() <= 0.01);
    let b = delay_to_phase_std(1e-2 * ts, 3.68e9).unwrap();
    assert!((b.unwrapped.to_degrees() - 26.96).abs() <= 0.01);
    assert_eq!(delay_to_phase_std(0.0, 3.68e9).unwrap().unwrapped, 0.0);
    assert!((a.wrapped - a.unwrapped).abs() < 1e-9);
    // Wrapping bounds the spread by the uniform value.
    let c = delay_to_phase_std(1e-1 * ts, 3.68e9).unwrap();
    assert!(c.wrapped.to_degrees() < 103.93 && c.unwrapped.to_degrees() > 260.0);
    assert!(delay_to_phase_std(-1.0, 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn rectangular_pslr_tracks_dirichlet(len in 8usize..64) {
        let m = peak_sidelobe_metrics(&dirichlet(len, 32), DEFAULT_MAINLOBE_GUARD).unwrap();
        prop_assert!((m.pslr_db - dirichlet_first_sidelobe_db(len)).abs() < 0.2);
    }

    #[test]
    fn phase_spread_is_linear_below_a_hundredth(log_sigma in -6.0f64..-2.0) {
        let ts = 1.0 / 491.52e6;
        let s = 10f64.powf(log_sigma) * ts;
        let one = delay_to_phase_std(s, 3.68e9).unwrap();
        let two = delay_to_phase_std(2.0 * s, 3.68e9).unwrap();
        prop_assert!((two.unwrapped - 2.0 * one.unwrapped).abs() < 1e-12 * two.unwrapped.max(1e-300));
    }
}
