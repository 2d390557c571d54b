//! Radar receiver: calibrated radar CFR, range–Doppler periodograms and
//! Fourier beamforming into a range–Doppler–azimuth cube.

mod cfr;
mod cube;
mod export;
mod image;
mod window;

pub use cfr::{build_radar_cfr, RadarCfr, CALIBRATION_FLOOR};
pub use cube::{doa_cube, range_azimuth_cut, RadarCube, RangeAzimuthCut, WindowSet, MAX_CUBE_CELLS};
pub use export::{write_cube, write_cut_csv, CubeSidecar};
pub use image::{range_doppler_image, ImageAxes, RangeDopplerImage};
pub use window::{make_window, Window, WindowKind};
