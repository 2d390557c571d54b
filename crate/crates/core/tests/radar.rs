mod common;

use std::f64::consts::PI;

use common::{small_config, FC};
use isac_sim::consts::SPEED_OF_LIGHT;
use isac_sim::dsp::{signed_bin, Dft};
use isac_sim::geometry::{Angle, AzimuthGrid, GridSpacing, UlaGeometry};
use isac_sim::radar::{
    build_radar_cfr, doa_cube, make_window, range_azimuth_cut, range_doppler_image, RangeDopplerImage, Window,
    WindowKind,
};
use isac_sim::waveform::OfdmConfig;
use isac_sim::{FrameGrid64, Seed, C64};
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

fn rect(n: usize) -> Window {
    make_window(WindowKind::Rectangular, n).unwrap()
}

/// Point target: delay `tau` seconds, Doppler `fd` Hz, constant `phase`.
fn target(cfg: &OfdmConfig, tau: f64, fd: f64, phase: f64) -> FrameGrid64 {
    let mut d = FrameGrid64::zeros(cfg);
    let (df, ts) = (cfg.subcarrier_spacing(), cfg.symbol_duration());
    for m in 0..cfg.num_symbols {
        for k in 0..cfg.num_subcarriers {
            let f = signed_bin(k, cfg.num_subcarriers) as f64 * df;
            d.set(k, m, C64::from_polar(1.0, phase - 2.0 * PI * f * tau + 2.0 * PI * fd * m as f64 * ts));
        }
    }
    d
}

fn array_phase(g: &UlaGeometry, ch: usize, doa: Angle) -> f64 {
    -2.0 * PI * g.element_x_positions()[ch] / g.wavelength() * doa.sin()
}

fn images_for(cfg: &OfdmConfig, g: &UlaGeometry, tau: f64, doa: Angle) -> Vec<RangeDopplerImage<f64>> {
    (0..g.num_elements())
        .map(|ch| {
            let d = target(cfg, tau, 0.0, array_phase(g, ch, doa));
            range_doppler_image(&d, &rect(cfg.num_subcarriers), &rect(cfg.num_symbols)).unwrap()
        })
        .collect()
}

#[test]
fn static_target_lands_in_its_range_bin() {
    let cfg = small_config();
    let d = target(&cfg, 3.0 / cfg.bandwidth, 0.0, 0.4);
    let img = range_doppler_image(&d, &rect(256), &rect(8)).unwrap();
    assert_eq!(img.peak(), (3, 0));
    let nm = (256 * 8) as f64;
    assert!((img.get(3, 0).norm() - nm).abs() < 1e-9 * nm);
}

#[test]
fn doppler_target_lands_in_its_doppler_bin() {
    let cfg = small_config();
    let step = 1.0 / (cfg.num_symbols as f64 * cfg.symbol_duration());
    let img = range_doppler_image(&target(&cfg, 0.0, 5.0 * step, 0.0), &rect(256), &rect(8)).unwrap();
    assert_eq!(img.peak(), (0, 5));
    assert!((img.axes.doppler_step - step).abs() < 1e-9);
    // Bin 5 of 8 is a negative shift.
    assert!((img.axes.doppler(5) + 3.0 * step).abs() < 1e-9);
    let img = range_doppler_image(&target(&cfg, 0.0, -2.0 * step, 0.0), &rect(256), &rect(8)).unwrap();
    assert_eq!(img.peak(), (0, 6));
}

#[test]
fn constant_cfr_peaks_at_window_products() {
    let cfg = small_config();
    let ones = FrameGrid64::from_cells(&cfg, vec![C64::new(1.0, 0.0); 256 * 8]).unwrap();
    let wr = make_window(WindowKind::Chebyshev { sidelobe_db: 60.0 }, 256).unwrap();
    let wd = make_window(WindowKind::Chebyshev { sidelobe_db: 40.0 }, 8).unwrap();
    let img = range_doppler_image(&ones, &wr, &wd).unwrap();
    assert_eq!(img.peak(), (0, 0));
    let expected = wr.sum() * wd.sum();
    assert!((img.get(0, 0) - C64::new(expected, 0.0)).norm() < 1e-9 * expected);
}

#[test]
fn range_axis_matches_bistatic_range() {
    let cfg = small_config();
    let dr = SPEED_OF_LIGHT / cfg.bandwidth;
    let r_isi = cfg.cp_length as f64 * dr;
    for &r in &[0.0, 0.3 * dr, 7.6 * dr, 0.5 * r_isi, 0.97 * r_isi] {
        let img = range_doppler_image(&target(&cfg, r / SPEED_OF_LIGHT, 0.0, 0.0), &rect(256), &rect(8)).unwrap();
        assert!((img.axes.range_step - dr).abs() < 1e-12);
        let (bin, _) = img.peak();
        assert!((img.axes.range(bin) - r).abs() <= 0.5 * dr + 1e-9, "R = {r}: bin {bin}");
    }
}

#[test]
fn zero_range_notch_removes_los_row() {
    let cfg = small_config();
    let mut d = target(&cfg, 0.0, 0.0, 0.0);
    let echo = target(&cfg, 12.0 / cfg.bandwidth, 0.0, 1.0);
    for (a, b) in d.cells_mut().iter_mut().zip(echo.cells()) {
        *a += b * 0.1;
    }
    let mut img = range_doppler_image(&d, &rect(256), &rect(8)).unwrap();
    assert_eq!(img.peak(), (0, 0));
    img.notch_zero_range();
    assert_eq!(img.peak(), (12, 0));
}

#[test]
fn calibration_removes_magnitude_ripple_only() {
    let cfg = small_config();
    let n = cfg.num_subcarriers;
    let x = target(&cfg, 0.0, 0.0, 0.0);
    // 3 dB peak-to-peak ripple with an arbitrary back-end phase.
    let abe: Vec<C64> = (0..n)
        .map(|k| {
            let mag_db = 1.5 * (2.0 * PI * k as f64 / 37.0).sin();
            C64::from_polar(10f64.powf(mag_db / 20.0), 0.01 * k as f64)
        })
        .collect();
    let mut y = FrameGrid64::zeros(&cfg);
    for m in 0..cfg.num_symbols {
        for (k, a) in abe.iter().enumerate() {
            y.set(k, m, x.get(k, m) * a.norm());
        }
    }
    let raw: Vec<f64> = y.cells().iter().map(|v| 20.0 * v.norm().log10()).collect();
    let spread = |v: &[f64]| v.iter().copied().fold(f64::MIN, f64::max) - v.iter().copied().fold(f64::MAX, f64::min);
    assert!(spread(&raw) > 2.9);
    let d = build_radar_cfr(&[y], &x, &[abe]).unwrap();
    let cal: Vec<f64> = d.channels[0].cells().iter().map(|v| 20.0 * v.norm().log10()).collect();
    assert!(spread(&cal) < 0.1);
    assert_eq!(d.masked_cells, 0);
}

#[test]
fn zero_transmit_cells_are_masked_and_counted() {
    let cfg = small_config();
    let mut x = target(&cfg, 0.0, 0.0, 0.0);
    for i in [0, 5, 77, 300] {
        x.cells_mut()[i] = C64::new(0.0, 0.0);
    }
    let y = x.clone();
    let d = build_radar_cfr(&[y.clone(), y], &x, &[vec![C64::new(1.0, 0.0); 256], vec![C64::new(0.0, 2.0); 256]]).unwrap();
    assert_eq!(d.masked_cells, 4);
    for (ch, scale) in d.channels.iter().zip([1.0, 0.5]) {
        assert!(ch.cells().iter().all(|v| v.re.is_finite() && v.im.is_finite()));
        assert_eq!(ch.cells()[77], C64::new(0.0, 0.0));
        assert!((ch.cells()[78] - C64::new(scale, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn weak_back_end_is_a_calibration_error() {
    let cfg = small_config();
    let x = target(&cfg, 0.0, 0.0, 0.0);
    let mut abe = vec![C64::new(1.0, 0.0); 256];
    abe[40] = C64::new(1e-6, 0.0);
    let err = build_radar_cfr(std::slice::from_ref(&x), &x, &[abe]).unwrap_err();
    assert!(err.to_string().contains("40"), "{err}");
    assert!(build_radar_cfr(&[x.clone(), x.clone()], &x, &[vec![C64::new(1.0, 0.0); 256]]).is_err());
}

#[test]
fn single_channel_cube_is_flat_in_azimuth() {
    let cfg = small_config();
    let g = UlaGeometry::new(1, FC).unwrap();
    let grid = AzimuthGrid::for_array(1, 4).unwrap();
    let cube = doa_cube(&images_for(&cfg, &g, 0.0, Angle::ZERO), &g, &grid, &rect(1)).unwrap();
    let row: Vec<f64> = (0..4).map(|s| cube.get(0, 0, s).norm()).collect();
    assert!(row.iter().all(|v| (v - row[0]).abs() < 1e-9));
}

#[test]
fn eight_channels_peak_at_minus_twenty_degrees() {
    let cfg = small_config();
    let g = UlaGeometry::new(8, FC).unwrap();
    let doa = Angle::from_degrees(-20.0);
    let images = images_for(&cfg, &g, 0.0, doa);
    let single = images[0].get(0, 0).norm();

    let grid = AzimuthGrid::for_array(8, 4).unwrap();
    let cube = doa_cube(&images, &g, &grid, &rect(8)).unwrap();
    let (r, q, s) = cube.peak();
    assert_eq!((r, q), (0, 0));
    assert!(grid.cells_between(grid.angles()[s], doa) <= 1.0);

    // A grid point exactly on the arrival angle sees the full coherent sum.
    let exact = AzimuthGrid::new(36, GridSpacing::AngleUniform).unwrap();
    let cube = doa_cube(&images, &g, &exact, &rect(8)).unwrap();
    let (_, _, s) = cube.peak();
    assert!((exact.angles()[s].degrees() + 20.0).abs() < 1e-9);
    assert!((cube.get(0, 0, s).norm() / single - 8.0).abs() < 1e-9);
}

#[test]
fn broadside_cut_is_symmetric_in_sine() {
    let cfg = small_config();
    let g = UlaGeometry::new(8, FC).unwrap();
    let images = images_for(&cfg, &g, 0.0, Angle::ZERO);
    let grid = AzimuthGrid::for_array(8, 4).unwrap();
    let cut = range_azimuth_cut(&images, 0, &g, &grid, &rect(8)).unwrap();
    let (r, s) = cut.peak();
    assert_eq!(r, 0);
    assert!(grid.angles()[s].degrees().abs() < 1e-9);
    // Grid point s and 2·s0 − s have opposite sines.
    for d in 1..16 {
        let a = cut.get(0, 16 + d).norm();
        let b = cut.get(0, 16 - d).norm();
        assert!((a - b).abs() < 1e-9 * (1.0 + a), "offset {d}");
    }
    assert!(range_azimuth_cut(&images, 8, &g, &grid, &rect(8)).is_err());
    assert!(doa_cube(&images[..7], &g, &grid, &rect(7)).is_err());
}

#[test]
fn chebyshev_sidelobes_sit_at_design_level() {
    let w = make_window(WindowKind::Chebyshev { sidelobe_db: 100.0 }, 64).unwrap();
    let pad = 64 * 64;
    let mut buf: Vec<C64> = (0..pad).map(|i| C64::new(if i < 64 { w.coefficients[i] } else { 0.0 }, 0.0)).collect();
    Dft::<f64>::new(pad).forward(&mut buf);
    let p: Vec<f64> = buf.iter().map(|v| v.norm_sqr()).collect();
    let peak = p[0];
    // Mainlobe ends at the first local minimum.
    let edge = (1..pad / 2).find(|&i| p[i] < p[i + 1]).unwrap();
    let side = p[edge..pad / 2].iter().copied().fold(0.0, f64::max);
    let db = 10.0 * (side / peak).log10();
    assert!((db + 100.0).abs() <= 1.0, "{db}");
}

fn complex_noise(rng: &mut impl Rng, sigma: f64) -> C64 {
    let (a, b): (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
    C64::new(a, b) * (sigma / 2f64.sqrt())
}

#[test]
fn beamforming_adds_array_gain_to_image_snr() {
    let cfg = OfdmConfig { num_subcarriers: 64, num_symbols: 8, cp_length: 16, ..OfdmConfig::full_scale() };
    let g = UlaGeometry::new(8, FC).unwrap();
    let doa = Angle::from_degrees(-20.0);
    let grid = AzimuthGrid::new(36, GridSpacing::AngleUniform).unwrap();
    let s0 = grid.nearest_index(doa);
    let tau = 5.0 / cfg.bandwidth;
    let amp = 0.5;
    let (mut single, mut cube_snr) = (0.0, 0.0);
    let seeds = 60;
    for seed in 0..seeds {
        let mut rng = Seed(seed).stream("radar-noise").rng();
        let images: Vec<_> = (0..8)
            .map(|ch| {
                let mut d = target(&cfg, tau, 0.0, array_phase(&g, ch, doa));
                for v in d.cells_mut() {
                    *v = *v * amp + complex_noise(&mut rng, 1.0);
                }
                range_doppler_image(&d, &rect(64), &rect(8)).unwrap()
            })
            .collect();
        let cube = doa_cube(&images, &g, &grid, &rect(8)).unwrap();
        // Signal power in the target cell over the mean power of target-free
        // cells; the noise share of the peak cell is removed.
        let snr = |peak: f64, rest: &mut dyn Iterator<Item = f64>| {
            let (s, n) = rest.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
            let noise = s / n as f64;
            (peak - noise) / noise
        };
        let img0 = &images[0];
        single += snr(
            img0.get(5, 0).norm_sqr(),
            &mut (0..64 * 8).filter(|&i| i != 5 * 8).map(|i| img0.values[i].norm_sqr()),
        );
        cube_snr += snr(
            cube.get(5, 0, s0).norm_sqr(),
            &mut (0..64 * 8).filter(|&i| i != 5 * 8).map(|i| cube.values[i * 36 + s0].norm_sqr()),
        );
    }
    let gain_db = 10.0 * (cube_snr / single).log10();
    assert!((gain_db - 10.0 * 8f64.log10()).abs() <= 0.5, "{gain_db}");
}

#[test]
fn magnitude_ripple_leaves_azimuth_estimate_unchanged() {
    let cfg = small_config();
    let g = UlaGeometry::new(8, FC).unwrap();
    let doa = Angle::from_degrees(23.0);
    let grid = AzimuthGrid::for_array(8, 4).unwrap();
    let x = target(&cfg, 0.0, 0.0, 0.0);
    let estimate = |ripple: f64| {
        let (frames, abe): (Vec<_>, Vec<_>) = (0..8)
            .map(|ch| {
                let h: Vec<C64> = (0..256)
                    .map(|k| {
                        let m = 1.0 + ripple * (0.3 * k as f64 + ch as f64).cos();
                        C64::from_polar(m, -0.02 * k as f64)
                    })
                    .collect();
                let mut y = target(&cfg, 0.0, 0.0, array_phase(&g, ch, doa));
                for m in 0..8 {
                    for (k, hk) in h.iter().enumerate() {
                        y.set(k, m, y.get(k, m) * hk.norm());
                    }
                }
                (y, h)
            })
            .unzip();
        let d = build_radar_cfr(&frames, &x, &abe).unwrap();
        let images: Vec<_> =
            d.channels.iter().map(|c| range_doppler_image(c, &rect(256), &rect(8)).unwrap()).collect();
        doa_cube(&images, &g, &grid, &rect(8)).unwrap().peak()
    };
    let reference = estimate(0.0);
    for ripple in [0.1, 0.5, 0.9] {
        assert_eq!(estimate(ripple), reference);
    }
}

#[test]
fn cube_axes_follow_numerology() {
    let cfg = small_config();
    let g = UlaGeometry::new(2, FC).unwrap();
    let grid = AzimuthGrid::for_array(2, 4).unwrap();
    let cube = doa_cube(&images_for(&cfg, &g, 0.0, Angle::ZERO), &g, &grid, &rect(2)).unwrap();
    assert_eq!(cube.values.len(), 256 * 8 * 8);
    assert_eq!(cube.azimuth.len(), 8);
    assert!((cube.axes.range_step - SPEED_OF_LIGHT / cfg.bandwidth).abs() < 1e-12);
    assert!((cube.axes.doppler_step - 1.0 / (8.0 * cfg.symbol_duration())).abs() < 1e-9);
}

#[test]
fn cube_and_cut_export() {
    let cfg = small_config();
    let g = UlaGeometry::new(2, FC).unwrap();
    let grid = AzimuthGrid::for_array(2, 2).unwrap();
    let images = images_for(&cfg, &g, 0.0, Angle::ZERO);
    let cube = doa_cube(&images, &g, &grid, &rect(2)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cube.f32");
    isac_sim::radar::write_cube(&path, &cube).unwrap();
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(bytes.len(), 4 * cube.values.len());
    let (r, q, s) = cube.peak();
    let i = 4 * ((r * 8 + q) * 4 + s);
    let stored = f32::from_le_bytes(bytes[i..i + 4].try_into().unwrap()) as f64;
    assert!((stored - 10.0 * cube.get(r, q, s).norm_sqr().log10()).abs() < 1e-3);
    let side: isac_sim::radar::CubeSidecar =
        serde_json::from_slice(&std::fs::read(dir.path().join("cube.f32.json")).unwrap()).unwrap();
    assert_eq!(side.shape, [256, 8, 4]);

    let cut = range_azimuth_cut(&images, 0, &g, &grid, &rect(2)).unwrap();
    let csv_path = dir.path().join("cut.csv");
    isac_sim::radar::write_cut_csv(&csv_path, &cut).unwrap();
    let text = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(text.lines().count(), 1 + 256 * 4);
    assert!(text.starts_with("range_m,azimuth_deg,power_db"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn unit_target_processing_gain_is_nm(delay in 0usize..64, doppler in 0usize..8, phase in -3.0f64..3.0) {
        let cfg = small_config();
        let step = 1.0 / (8.0 * cfg.symbol_duration());
        let fd = signed_bin(doppler, 8) as f64 * step;
        let d = target(&cfg, delay as f64 / cfg.bandwidth, fd, phase);
        let img = range_doppler_image(&d, &rect(256), &rect(8)).unwrap();
        prop_assert_eq!(img.peak(), (delay, doppler));
        prop_assert!((img.get(delay, doppler).norm() - 2048.0).abs() < 1e-7);
    }
}

#[test]
fn cube_slice_matches_direct_cut() {
    let cfg = small_config();
    let g = UlaGeometry::new(4, FC).unwrap();
    let images = images_for(&cfg, &g, 2.0 * cfg.sampling_period(), Angle::from_degrees(15.0));
    let grid = AzimuthGrid::for_array(4, 2).unwrap();
    let w = rect(4);
    let cube = doa_cube(&images, &g, &grid, &w).unwrap();
    let direct = range_azimuth_cut(&images, 0, &g, &grid, &w).unwrap();
    assert_eq!(cube.range_azimuth(0), direct);
}
