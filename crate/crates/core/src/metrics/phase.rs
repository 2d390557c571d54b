use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{IsacError, Result};

/// Phase spread caused by a delay spread at the digital IF, radians.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseStd {
    /// `2π·f_IF·σ_τ`.
    pub unwrapped: f64,
    /// Standard deviation of a zero-mean Gaussian phase with the unwrapped
    /// spread after wrapping to `(-π, π]`. Tends to `π/√3` for large spreads.
    pub wrapped: f64,
}

pub fn delay_to_phase_std(sigma_tau: f64, f_if: f64) -> Result<PhaseStd> {
    if !(sigma_tau >= 0.0 && f_if >= 0.0 && sigma_tau.is_finite() && f_if.is_finite()) {
        return Err(IsacError::Argument(format!("delay spread {sigma_tau} s at {f_if} Hz")));
    }
    let s = 2.0 * PI * f_if * sigma_tau;
    Ok(PhaseStd { unwrapped: s, wrapped: wrapped_gaussian_std(s) })
}

/// Standard deviation of `wrap(θ)` for `θ ~ N(0, σ²)`.
fn wrapped_gaussian_std(sigma: f64) -> f64 {
    if sigma == 0.0 {
        return 0.0;
    }
    if sigma < 2.0 {
        // Simpson integration of θ² against the folded density.
        let steps = 4000;
        let h = 2.0 * PI / steps as f64;
        let density = |t: f64| -> f64 {
            (-4..=4).map(|j| (-(t + 2.0 * PI * j as f64).powi(2) / (2.0 * sigma * sigma)).exp()).sum::<f64>()
                / (sigma * (2.0 * PI).sqrt())
        };
        let var: f64 = (0..=steps)
            .map(|i| {
                let t = -PI + i as f64 * h;
                let w = if i == 0 || i == steps { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                w * t * t * density(t)
            })
            .sum::<f64>()
            * h
            / 3.0;
        return var.sqrt();
    }
    // Fourier series π²/3 + 4·Σ (−1)^k·exp(−k²σ²/2)/k², fast for wide spreads.
    let mut var = PI * PI / 3.0;
    for k in 1..20 {
        let kf = k as f64;
        let term = (-kf * kf * sigma * sigma / 2.0).exp() / (kf * kf);
        var += if k % 2 == 1 { -4.0 * term } else { 4.0 * term };
    }
    var.sqrt()
}
