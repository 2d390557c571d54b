//! Uniform linear arrays: element positions, path-length differences and
//! steering vectors.
//!
//! Elements lie on the x axis, centred on the origin, spaced half a wavelength
//! apart. Angles are measured from the array broadside (the y axis) towards +x.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::consts::SPEED_OF_LIGHT;
use crate::error::{IsacError, Result};
use crate::scalar::{cis, Real};

/// Azimuth angle in radians.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    pub const fn from_radians(rad: f64) -> Self {
        Angle(rad)
    }

    pub fn from_degrees(deg: f64) -> Self {
        Angle(deg.to_radians())
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }

    pub fn sin(self) -> f64 {
        self.0.sin()
    }

    /// Checks that the angle lies in the visible half-plane `[-π/2, π/2]`.
    pub fn validated(self) -> Result<Self> {
        if self.0.is_finite() && (-FRAC_PI_2..=FRAC_PI_2).contains(&self.0) {
            Ok(self)
        } else {
            Err(IsacError::Argument(format!("angle {} rad outside [-π/2, π/2]", self.0)))
        }
    }
}

/// Geometry of a half-wavelength uniform linear array.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UlaGeometry {
    num_elements: usize,
    carrier_frequency: f64,
    wavelength: f64,
    element_x_positions: Vec<f64>,
}

impl UlaGeometry {
    pub fn new(num_elements: usize, carrier_frequency: f64) -> Result<Self> {
        if !(carrier_frequency.is_finite() && carrier_frequency > 0.0) {
            return Err(IsacError::Argument(format!("carrier frequency {carrier_frequency} Hz")));
        }
        Self::build(num_elements, carrier_frequency, SPEED_OF_LIGHT / carrier_frequency)
    }

    pub fn with_wavelength(num_elements: usize, wavelength: f64) -> Result<Self> {
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(IsacError::Argument(format!("wavelength {wavelength} m")));
        }
        Self::build(num_elements, SPEED_OF_LIGHT / wavelength, wavelength)
    }

    fn build(num_elements: usize, carrier_frequency: f64, wavelength: f64) -> Result<Self> {
        if num_elements == 0 {
            return Err(IsacError::Argument("array needs at least one element".into()));
        }
        let centre = (num_elements as f64 - 1.0) / 2.0;
        let element_x_positions =
            (0..num_elements).map(|n| 0.5 * wavelength * (n as f64 - centre)).collect();
        Ok(Self { num_elements, carrier_frequency, wavelength, element_x_positions })
    }

    pub fn num_elements(&self) -> usize {
        self.num_elements
    }

    pub fn carrier_frequency(&self) -> f64 {
        self.carrier_frequency
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn element_x_positions(&self) -> &[f64] {
        &self.element_x_positions
    }

    fn check_element(&self, element: usize) -> Result<()> {
        if element < self.num_elements {
            Ok(())
        } else {
            Err(IsacError::Argument(format!(
                "element {element} out of range for {}-element array",
                self.num_elements
            )))
        }
    }

    /// Extra path length travelled by `element` relative to the array centre
    /// for a plane wave leaving (or arriving) at `angle`. Negative values mean
    /// the element is closer to the far-field point.
    pub fn path_length_difference(&self, element: usize, angle: Angle) -> Result<f64> {
        self.check_element(element)?;
        let angle = angle.validated()?;
        Ok(-self.element_x_positions[element] * angle.sin())
    }

    /// Path-length difference converted to a delay in seconds.
    pub fn element_delay(&self, element: usize, angle: Angle) -> Result<f64> {
        Ok(self.path_length_difference(element, angle)? / SPEED_OF_LIGHT)
    }

    /// Per-element phase `exp(sign·i·2π·(x/λ)·sin(angle))`.
    fn phasors<T: Real>(&self, angle: Angle, sign: f64) -> Result<SteeringVector<T>> {
        let angle = angle.validated()?;
        let s = angle.sin();
        let weights = self
            .element_x_positions
            .iter()
            .map(|&x| if s == 0.0 { Complex::new(T::one(), T::zero()) } else { cis(sign * 2.0 * PI * x / self.wavelength * s) })
            .collect();
        Ok(SteeringVector { angle, weights })
    }

    /// Transmit weights that steer the beam towards `dod`.
    pub fn transmit_steering_vector<T: Real>(&self, dod: Angle) -> Result<SteeringVector<T>> {
        self.phasors(dod, -1.0)
    }

    /// Receive beamforming weights for direction `doa`.
    pub fn receive_steering_vector<T: Real>(&self, doa: Angle) -> Result<SteeringVector<T>> {
        self.phasors(doa, 1.0)
    }

    /// Far-field response of transmit `weights` towards `angle`: each element
    /// contributes its weight times the propagation phase of its path-length
    /// difference, `exp(-i·2π·ΔL/λ) = exp(+i·2π·(x/λ)·sin(angle))`.
    pub fn array_factor<T: Real>(&self, weights: &[Complex<T>], angle: Angle) -> Result<Complex<f64>> {
        if weights.len() != self.num_elements {
            return Err(IsacError::Dimension(format!(
                "{} weights for {}-element array",
                weights.len(),
                self.num_elements
            )));
        }
        let s = angle.validated()?.sin();
        Ok(self
            .element_x_positions
            .iter()
            .zip(weights)
            .map(|(&x, w)| crate::scalar::widen(*w) * cis::<f64>(2.0 * PI * x / self.wavelength * s))
            .sum())
    }
}

/// Unit-magnitude per-element weights for one steering direction.
#[derive(Clone, Debug, PartialEq)]
pub struct SteeringVector<T: Real> {
    pub angle: Angle,
    pub weights: Vec<Complex<T>>,
}

/// How azimuth grid points are distributed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridSpacing {
    /// Uniform in `sin(φ)` over `[-1, 1)`; matches the Fourier beamformer.
    #[default]
    SinUniform,
    /// Uniform in `φ` over `[-π/2, π/2)`.
    AngleUniform,
}

/// Azimuth evaluation grid for Fourier beamforming.
#[derive(Clone, Debug, PartialEq)]
pub struct AzimuthGrid {
    spacing: GridSpacing,
    angles: Vec<Angle>,
}

impl AzimuthGrid {
    pub fn new(points: usize, spacing: GridSpacing) -> Result<Self> {
        if points == 0 {
            return Err(IsacError::Argument("azimuth grid needs at least one point".into()));
        }
        let angles = (0..points)
            .map(|b| {
                let t = b as f64 / points as f64;
                match spacing {
                    GridSpacing::SinUniform => Angle::from_radians((-1.0 + 2.0 * t).asin()),
                    GridSpacing::AngleUniform => Angle::from_radians(-FRAC_PI_2 + PI * t),
                }
            })
            .collect();
        Ok(Self { spacing, angles })
    }

    /// Default grid for an `elements`-channel array with the given zero-padding
    /// factor.
    pub fn for_array(elements: usize, zero_padding: usize) -> Result<Self> {
        Self::new(elements * zero_padding.max(1), GridSpacing::SinUniform)
    }

    pub fn spacing(&self) -> GridSpacing {
        self.spacing
    }

    pub fn angles(&self) -> &[Angle] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// Index of the grid point closest to `angle` in the grid's own metric.
    pub fn nearest_index(&self, angle: Angle) -> usize {
        let key = |a: Angle| match self.spacing {
            GridSpacing::SinUniform => a.sin(),
            GridSpacing::AngleUniform => a.radians(),
        };
        let target = key(angle);
        self.angles
            .iter()
            .enumerate()
            .min_by(|a, b| (key(*a.1) - target).abs().total_cmp(&(key(*b.1) - target).abs()))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }

    /// Distance between `a` and `b` in grid cells.
    pub fn cells_between(&self, a: Angle, b: Angle) -> f64 {
        let n = self.angles.len() as f64;
        match self.spacing {
            GridSpacing::SinUniform => (a.sin() - b.sin()).abs() * n / 2.0,
            GridSpacing::AngleUniform => (a.radians() - b.radians()).abs() * n / PI,
        }
    }
}
