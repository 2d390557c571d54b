//! Continuous-time evaluation of transmitted waveforms at delayed,
//! SFO-stretched receive instants.

use std::f64::consts::PI;

use num_complex::Complex;

use super::resample::SincInterpolator;
use crate::dsp::{signed_bin, Dft};
use crate::waveform::SymbolLayout;

/// Largest intra-chunk timing drift (in samples) covered by the second-order
/// expansion before the chunk is re-anchored.
const MAX_CHUNK_DRIFT: f64 = 0.02;

/// A transmit waveform that can be read at arbitrary times.
pub(crate) enum Waveform {
    /// Rectangular-pulse CP-OFDM: the exact continuous signal is the
    /// per-symbol trigonometric polynomial through its samples.
    Ofdm { layout: SymbolLayout, spectra: Vec<Vec<Complex<f64>>>, dft: Dft<f64> },
    /// Any sampled sequence, band-limited interpolation.
    Samples { samples: Vec<Complex<f64>>, interp: SincInterpolator },
}

impl Waveform {
    pub fn ofdm(samples: &[Complex<f64>], layout: SymbolLayout) -> Self {
        let dft = Dft::new(layout.fft_len);
        let spectra = (0..layout.num_symbols)
            .map(|i| crate::waveform::demodulate_symbol(samples, &layout, i, &dft))
            .collect();
        Waveform::Ofdm { layout, spectra, dft }
    }

    pub fn samples(samples: Vec<Complex<f64>>) -> Self {
        Waveform::Samples { samples, interp: SincInterpolator::default() }
    }

    /// `out[j] = x(j·(1+sfo) - delay)` for `j < len`, positions in samples.
    pub fn delayed(&self, len: usize, delay: f64, sfo: f64) -> Vec<Complex<f64>> {
        let stretch = 1.0 + sfo;
        match self {
            Waveform::Samples { samples, interp } => {
                (0..len).map(|j| interp.at(samples, j as f64 * stretch - delay)).collect()
            }
            Waveform::Ofdm { layout, spectra, dft } => {
                let mut out = vec![Complex::new(0.0, 0.0); len];
                let n = layout.fft_len;
                let chunk = if sfo == 0.0 { usize::MAX } else { ((MAX_CHUNK_DRIFT / sfo.abs()) as usize).max(16) };
                for (s, spec) in spectra.iter().enumerate() {
                    let first = layout.symbol_start(s) as f64;
                    let last = first + layout.symbol_length() as f64;
                    // Receive indices whose read position falls inside the symbol.
                    let lo = (((first + delay) / stretch).ceil().max(0.0) as usize).min(len);
                    let hi = (((last + delay) / stretch).ceil().max(0.0) as usize).min(len);
                    let body = layout.body_start(s) as f64;
                    let mut j0 = lo;
                    while j0 < hi {
                        let j1 = hi.min(j0.saturating_add(chunk));
                        let base = j0 as f64 * stretch - delay - body;
                        let anchor = base.floor();
                        let mu = base - anchor;
                        let terms = self_terms(spec, mu, sfo != 0.0, dft);
                        for (r, j) in (j0..j1).enumerate() {
                            // Round-off can put the read position a hair outside.
                            let idx = (anchor as i64 + r as i64).rem_euclid(n as i64) as usize;
                            let e = r as f64 * sfo;
                            let mut v = terms[0][idx];
                            if terms.len() == 3 {
                                v += terms[1][idx] * e + terms[2][idx] * (0.5 * e * e);
                            }
                            out[j] = v;
                        }
                        j0 = j1;
                    }
                }
                out
            }
        }
    }
}

/// Inverse DFTs of the spectrum shifted by `mu` samples and, when needed, its
/// first two time derivatives (per sample).
fn self_terms(spec: &[Complex<f64>], mu: f64, derivatives: bool, dft: &Dft<f64>) -> Vec<Vec<Complex<f64>>> {
    let n = spec.len();
    let orders = if derivatives { 3 } else { 1 };
    (0..orders)
        .map(|q| {
            let mut buf: Vec<Complex<f64>> = spec
                .iter()
                .enumerate()
                .map(|(k, x)| {
                    let w = 2.0 * PI * signed_bin(k, n) as f64 / n as f64;
                    x * Complex::from_polar(1.0, w * mu) * Complex::new(0.0, w).powi(q)
                })
                .collect();
            dft.inverse(&mut buf);
            buf
        })
        .collect()
}
