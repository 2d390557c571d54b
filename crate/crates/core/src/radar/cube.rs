use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::image::{ImageAxes, RangeDopplerImage};
use super::window::{Window, WindowKind};
use crate::error::{IsacError, Result};
use crate::geometry::{AzimuthGrid, UlaGeometry};
use crate::scalar::{lit, Real};

/// Largest cube materialised in memory, in cells.
pub const MAX_CUBE_CELLS: usize = 1 << 26;

/// Windows used to form a cube or cut.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSet {
    pub range: WindowKind,
    pub doppler: WindowKind,
    pub azimuth: WindowKind,
}

/// Range × Doppler × azimuth image, index `(r·M + q)·S + s`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadarCube<T: Real> {
    pub values: Vec<Complex<T>>,
    pub axes: ImageAxes,
    /// Radians.
    pub azimuth: Vec<f64>,
    pub windows: WindowSet,
}

impl<T: Real> RadarCube<T> {
    pub fn get(&self, range: usize, doppler: usize, azimuth: usize) -> Complex<T> {
        self.values[(range * self.axes.num_doppler + doppler) * self.azimuth.len() + azimuth]
    }

    /// `(range, doppler, azimuth)` of the strongest cell.
    pub fn peak(&self) -> (usize, usize, usize) {
        let i = argmax(&self.values);
        let s = self.azimuth.len();
        let m = self.axes.num_doppler;
        (i / (s * m), (i / s) % m, i % s)
    }

    /// The range × azimuth slice at `doppler_bin`.
    pub fn range_azimuth(&self, doppler_bin: usize) -> RangeAzimuthCut<T> {
        let values = (0..self.axes.num_range)
            .flat_map(|r| (0..self.azimuth.len()).map(move |s| (r, s)))
            .map(|(r, s)| self.get(r, doppler_bin, s))
            .collect();
        RangeAzimuthCut { values, axes: self.axes, doppler_bin, azimuth: self.azimuth.clone() }
    }
}

/// Range × azimuth slice at one Doppler bin, index `r·S + s`.
#[derive(Clone, Debug, PartialEq)]
pub struct RangeAzimuthCut<T: Real> {
    pub values: Vec<Complex<T>>,
    pub axes: ImageAxes,
    pub doppler_bin: usize,
    pub azimuth: Vec<f64>,
}

impl<T: Real> RangeAzimuthCut<T> {
    pub fn get(&self, range: usize, azimuth: usize) -> Complex<T> {
        self.values[range * self.azimuth.len() + azimuth]
    }

    pub fn peak(&self) -> (usize, usize) {
        let i = argmax(&self.values);
        (i / self.azimuth.len(), i % self.azimuth.len())
    }
}

fn argmax<T: Real>(v: &[Complex<T>]) -> usize {
    v.iter()
        .enumerate()
        .max_by(|a, b| a.1.norm_sqr().partial_cmp(&b.1.norm_sqr()).unwrap_or(std::cmp::Ordering::Equal))
        .map_or(0, |(i, _)| i)
}

/// Beamforming weights `w_az[ch]·exp(+i·2π·(x_ch/λ)·sin φ_s)` for every grid
/// angle, angle-major.
fn steering<T: Real>(
    images: &[RangeDopplerImage<T>],
    geometry: &UlaGeometry,
    grid: &AzimuthGrid,
    window_az: &Window,
) -> Result<Vec<Vec<Complex<T>>>> {
    let channels = images.len();
    if channels == 0 {
        return Err(IsacError::Argument("no channel images".into()));
    }
    if channels != geometry.num_elements() || window_az.len() != channels {
        return Err(IsacError::Dimension(format!(
            "{channels} images, {}-element array, {}-point azimuth window",
            geometry.num_elements(),
            window_az.len()
        )));
    }
    if images.iter().any(|i| i.axes != images[0].axes) {
        return Err(IsacError::Dimension("channel images differ in shape".into()));
    }
    grid.angles()
        .iter()
        .map(|&a| {
            let sv = geometry.receive_steering_vector::<T>(a)?;
            Ok(sv.weights.iter().zip(&window_az.coefficients).map(|(w, &c)| *w * lit::<T>(c)).collect())
        })
        .collect()
}

/// Fourier beamforming across receive channels for every range–Doppler cell.
pub fn doa_cube<T: Real>(
    images: &[RangeDopplerImage<T>],
    geometry: &UlaGeometry,
    grid: &AzimuthGrid,
    window_az: &Window,
) -> Result<RadarCube<T>> {
    let weights = steering(images, geometry, grid, window_az)?;
    let axes = images[0].axes;
    let cells = axes.num_range * axes.num_doppler;
    let s = grid.len();
    if cells.saturating_mul(s) > MAX_CUBE_CELLS {
        return Err(IsacError::Argument(format!("cube of {} cells exceeds {MAX_CUBE_CELLS}", cells * s)));
    }
    let mut values = vec![Complex::new(T::zero(), T::zero()); cells * s];
    for c in 0..cells {
        for (a, w) in weights.iter().enumerate() {
            values[c * s + a] = images.iter().zip(w).map(|(img, w)| img.values[c] * *w).sum();
        }
    }
    Ok(RadarCube {
        values,
        axes,
        azimuth: grid.angles().iter().map(|a| a.radians()).collect(),
        windows: WindowSet { azimuth: window_az.kind, ..WindowSet::default() },
    })
}

/// One Doppler slice of the cube without forming the rest of it.
pub fn range_azimuth_cut<T: Real>(
    images: &[RangeDopplerImage<T>],
    doppler_bin: usize,
    geometry: &UlaGeometry,
    grid: &AzimuthGrid,
    window_az: &Window,
) -> Result<RangeAzimuthCut<T>> {
    let weights = steering(images, geometry, grid, window_az)?;
    let axes = images[0].axes;
    if doppler_bin >= axes.num_doppler {
        return Err(IsacError::Argument(format!("Doppler bin {doppler_bin} of {}", axes.num_doppler)));
    }
    let s = grid.len();
    let mut values = vec![Complex::new(T::zero(), T::zero()); axes.num_range * s];
    for r in 0..axes.num_range {
        for (a, w) in weights.iter().enumerate() {
            values[r * s + a] = images.iter().zip(w).map(|(img, w)| img.get(r, doppler_bin) * *w).sum();
        }
    }
    Ok(RangeAzimuthCut { values, axes, doppler_bin, azimuth: grid.angles().iter().map(|a| a.radians()).collect() })
}
