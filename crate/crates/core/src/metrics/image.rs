use serde::{Deserialize, Serialize};

use crate::consts::DB_CEIL;
use crate::dsp::power_db;
use crate::error::{IsacError, Result};

/// Bins on each side of the peak used as mainlobe when no local minimum
/// bounds it.
pub const DEFAULT_MAINLOBE_GUARD: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SidelobeMetrics {
    pub pslr_db: f64,
    pub islr_db: f64,
    /// Mainlobe extent in bins, both ends inclusive (may wrap).
    pub mainlobe: (usize, usize),
}

/// Peak and integrated sidelobe ratios of a magnitude profile.
///
/// The profile is treated as periodic, which holds for range profiles and for
/// azimuth cuts on a sine-uniform grid. The mainlobe runs from the peak down
/// to the first local minimum on each side; if the walk does not stop within
/// half the profile, `guard` bins on each side are used instead.
pub fn peak_sidelobe_metrics(cut: &[f64], guard: usize) -> Result<SidelobeMetrics> {
    let n = cut.len();
    let p: Vec<f64> = cut.iter().map(|v| v * v).collect();
    let peak = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if n < 2 || !(peak > 0.0) || !peak.is_finite() || p.iter().filter(|&&v| v == peak).count() != 1 {
        return Err(IsacError::NoPeak);
    }
    let i0 = p.iter().position(|&v| v == peak).unwrap_or(0);
    let walk = |dir: isize| -> Option<usize> {
        let step = |i: usize| (i as isize + dir).rem_euclid(n as isize) as usize;
        let mut i = i0;
        for _ in 0..n / 2 {
            let j = step(i);
            if p[j] >= p[i] {
                return Some(if dir > 0 { (i + n - i0) % n } else { (i0 + n - i) % n });
            }
            i = j;
        }
        None
    };
    let (left, right) = match (walk(-1), walk(1)) {
        (Some(l), Some(r)) => (l, r),
        _ => (guard.min(n / 2), guard.min(n / 2)),
    };
    let lo = (i0 + n - left) % n;
    let hi = (i0 + right) % n;
    let in_main = |i: usize| (i + n - lo) % n <= left + right;
    let (mut main, mut side, mut side_peak) = (0.0, 0.0, 0.0f64);
    for (i, &v) in p.iter().enumerate() {
        if in_main(i) {
            main += v;
        } else {
            side += v;
            side_peak = side_peak.max(v);
        }
    }
    Ok(SidelobeMetrics { pslr_db: power_db(side_peak / peak), islr_db: power_db(side / main), mainlobe: (lo, hi) })
}

/// Peak power loss relative to a reference peak, dB.
pub fn pplr(image_peak: f64, reference_peak: f64) -> Result<f64> {
    if !(reference_peak > 0.0) {
        return Err(IsacError::ZeroReference);
    }
    Ok(power_db(image_peak / reference_peak))
}

/// Power at `target` over the mean power of every other cell of a
/// row-major magnitude image with `width` columns, dB. A target with nothing
/// around it saturates at the ceiling.
pub fn mean_image_sir(image: &[f64], width: usize, target: (usize, usize)) -> Result<f64> {
    if width == 0 || image.len() < 2 || !image.len().is_multiple_of(width) {
        return Err(IsacError::DegenerateImage(format!("{} cells with width {width}", image.len())));
    }
    let (r, c) = target;
    if c >= width || r >= image.len() / width {
        return Err(IsacError::DegenerateImage(format!("target {target:?} outside the image")));
    }
    let t = r * width + c;
    let peak = image[t] * image[t];
    let rest = image.iter().enumerate().filter(|&(i, _)| i != t).map(|(_, v)| v * v).sum::<f64>()
        / (image.len() - 1) as f64;
    match (peak > 0.0, rest > 0.0) {
        (false, _) => Err(IsacError::DegenerateImage("zero power at the target cell".into())),
        (true, false) => Ok(DB_CEIL),
        (true, true) => Ok((10.0 * (peak / rest).log10()).min(DB_CEIL)),
    }
}
