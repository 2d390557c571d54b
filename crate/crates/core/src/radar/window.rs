use std::f64::consts::PI;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::dsp::Dft;
use crate::error::{IsacError, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WindowKind {
    #[default]
    Rectangular,
    /// Dolph–Chebyshev window with equiripple sidelobes at `-sidelobe_db`.
    Chebyshev { sidelobe_db: f64 },
}

/// Unit-peak taper coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Window {
    pub kind: WindowKind,
    pub coefficients: Vec<f64>,
}

impl Window {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.coefficients.iter().sum()
    }
}

pub fn make_window(kind: WindowKind, length: usize) -> Result<Window> {
    if length == 0 {
        return Err(IsacError::Argument("window length must be at least 1".into()));
    }
    let coefficients = match kind {
        WindowKind::Rectangular => vec![1.0; length],
        WindowKind::Chebyshev { sidelobe_db } => {
            if !(sidelobe_db > 0.0 && sidelobe_db.is_finite()) {
                return Err(IsacError::Argument(format!("Chebyshev sidelobe level {sidelobe_db} dB must be positive")));
            }
            chebyshev(length, sidelobe_db)
        }
    };
    Ok(Window { kind, coefficients })
}

/// Dolph–Chebyshev coefficients: samples of the Chebyshev polynomial response
/// on the unit circle, transformed to time and normalised to unit peak.
fn chebyshev(m: usize, attenuation_db: f64) -> Vec<f64> {
    if m == 1 {
        return vec![1.0];
    }
    let order = (m - 1) as f64;
    let beta = ((10f64.powf(attenuation_db / 20.0)).acosh() / order).cosh();
    let p: Vec<f64> = (0..m)
        .map(|k| {
            let x = beta * (PI * k as f64 / m as f64).cos();
            if x > 1.0 {
                (order * x.acosh()).cosh()
            } else if x < -1.0 {
                let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
                sign * (order * (-x).acosh()).cosh()
            } else {
                (order * x.acos()).cos()
            }
        })
        .collect();
    let dft = Dft::<f64>::new(m);
    let w: Vec<f64> = if m % 2 == 1 {
        let mut buf: Vec<Complex<f64>> = p.iter().map(|&v| Complex::new(v, 0.0)).collect();
        dft.forward(&mut buf);
        let n = m.div_ceil(2);
        let half: Vec<f64> = buf[..n].iter().map(|z| z.re).collect();
        half[1..].iter().rev().chain(half.iter()).copied().collect()
    } else {
        let mut buf: Vec<Complex<f64>> =
            p.iter().enumerate().map(|(k, &v)| Complex::from_polar(v, PI * k as f64 / m as f64)).collect();
        dft.forward(&mut buf);
        let n = m / 2 + 1;
        let re: Vec<f64> = buf.iter().map(|z| z.re).collect();
        re[1..n].iter().rev().chain(re[1..n].iter()).copied().collect()
    };
    let peak = w.iter().cloned().fold(f64::MIN, f64::max);
    w.into_iter().map(|v| v / peak).collect()
}
