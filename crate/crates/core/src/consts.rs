//! Physical constants.

/// Speed of light in vacuum, m/s (exact by SI definition).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Boltzmann constant, J/K (exact by SI definition).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Lower clamp used whenever a logarithmic metric would otherwise be `-inf`.
pub const DB_FLOOR: f64 = -150.0;

/// Upper clamp for ratios whose denominator vanishes.
pub const DB_CEIL: f64 = 300.0;
