//! Scalar performance figures: link quality, radar image quality, link
//! budgets and derived system parameters.

mod budget;
mod image;
mod params;
mod phase;
mod quality;

pub use budget::{image_snr, reflection_attenuation, LinkBudget};
pub use image::{mean_image_sir, peak_sidelobe_metrics, pplr, SidelobeMetrics, DEFAULT_MAINLOBE_GUARD};
pub use params::{derive_isac_params, IsacParams, ParamRow};
pub use phase::{delay_to_phase_std, PhaseStd};
pub use quality::{evm, Evm};
