use num_complex::Complex;

use super::config::OfdmConfig;
use crate::dsp::Dft;
use crate::error::{IsacError, Result};
use crate::scalar::Real;

/// Position of consecutive CP-OFDM symbols inside a sample stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymbolLayout {
    pub fft_len: usize,
    pub cp_len: usize,
    pub num_symbols: usize,
    /// Index of the first CP sample of symbol 0.
    pub start: usize,
}

impl SymbolLayout {
    /// Preamble followed by the `M` payload symbols, starting at sample 0.
    pub fn frame(config: &OfdmConfig) -> Self {
        Self {
            fft_len: config.num_subcarriers,
            cp_len: config.cp_length,
            num_symbols: config.num_symbols + 1,
            start: 0,
        }
    }

    pub fn symbol_length(&self) -> usize {
        self.fft_len + self.cp_len
    }

    pub fn symbol_start(&self, i: usize) -> usize {
        self.start + i * self.symbol_length()
    }

    /// First sample after the cyclic prefix of symbol `i`.
    pub fn body_start(&self, i: usize) -> usize {
        self.symbol_start(i) + self.cp_len
    }

    /// One past the last sample of the last symbol.
    pub fn end(&self) -> usize {
        self.symbol_start(self.num_symbols)
    }
}

/// Inverse DFT of `spectrum` with the cyclic prefix prepended.
pub fn modulate_symbol<T: Real>(spectrum: &[Complex<T>], cp_len: usize, dft: &Dft<T>) -> Vec<Complex<T>> {
    let n = spectrum.len();
    let mut body = spectrum.to_vec();
    dft.inverse(&mut body);
    let mut out = Vec::with_capacity(n + cp_len);
    out.extend_from_slice(&body[n - cp_len..]);
    out.extend_from_slice(&body);
    out
}

/// Converts a payload grid to samples: the preamble derived from `preamble`
/// followed by every payload symbol, each with its cyclic prefix.
pub fn to_time_domain<T: Real>(
    frame: &super::FrameGrid<T>,
    config: &OfdmConfig,
    preamble: &[Complex<T>],
) -> Result<Vec<Complex<T>>> {
    if frame.num_subcarriers() != config.num_subcarriers || frame.num_symbols() != config.num_symbols {
        return Err(IsacError::Dimension(format!(
            "{}×{} grid for a {}×{} configuration",
            frame.num_subcarriers(),
            frame.num_symbols(),
            config.num_subcarriers,
            config.num_symbols
        )));
    }
    if preamble.len() != config.symbol_length() {
        return Err(IsacError::Dimension(format!("preamble of {} samples", preamble.len())));
    }
    let dft = Dft::new(config.num_subcarriers);
    let mut out = Vec::with_capacity(config.frame_length());
    out.extend_from_slice(preamble);
    for m in 0..config.num_symbols {
        out.extend(modulate_symbol(frame.symbol(m), config.cp_length, &dft));
    }
    Ok(out)
}

/// Forward DFT of the body of symbol `i` of `layout` in `stream`; samples
/// beyond the stream are read as zero.
pub fn demodulate_symbol<T: Real>(
    stream: &[Complex<T>],
    layout: &SymbolLayout,
    i: usize,
    dft: &Dft<T>,
) -> Vec<Complex<T>> {
    let start = layout.body_start(i);
    let zero = Complex::new(T::zero(), T::zero());
    let mut body: Vec<Complex<T>> = (start..start + layout.fft_len).map(|j| stream.get(j).copied().unwrap_or(zero)).collect();
    dft.forward(&mut body);
    body
}

/// Applies a per-bin frequency response to every symbol of `layout` as a
/// cyclic filter, regenerating each cyclic prefix from the filtered body.
pub fn filter_symbols<T: Real>(
    stream: &mut [Complex<T>],
    layout: &SymbolLayout,
    response: &[Complex<T>],
    dft: &Dft<T>,
) -> Result<()> {
    if response.len() != layout.fft_len {
        return Err(IsacError::Dimension(format!("{}-bin response for {}-point symbols", response.len(), layout.fft_len)));
    }
    if layout.end() > stream.len() {
        return Err(IsacError::Dimension("symbol layout exceeds stream".into()));
    }
    for i in 0..layout.num_symbols {
        let mut spec = demodulate_symbol(stream, layout, i, dft);
        for (z, h) in spec.iter_mut().zip(response) {
            *z = *z * *h;
        }
        let sym = modulate_symbol(&spec, layout.cp_len, dft);
        let s = layout.symbol_start(i);
        stream[s..s + sym.len()].copy_from_slice(&sym);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waveform::{build_frame, build_preamble};

    fn small() -> OfdmConfig {
        OfdmConfig { num_subcarriers: 64, num_symbols: 8, cp_length: 16, ..OfdmConfig::full_scale() }
    }

    #[test]
    fn single_subcarrier_is_complex_exponential() {
        let dft = Dft::<f64>::new(16);
        let mut spec = vec![Complex::new(0.0, 0.0); 16];
        spec[3] = Complex::new(1.0, 0.0);
        let sym = modulate_symbol(&spec, 4, &dft);
        for (j, z) in sym[4..].iter().enumerate() {
            let expect = Complex::from_polar(1.0 / 16.0, 2.0 * std::f64::consts::PI * 3.0 * j as f64 / 16.0);
            assert!((z - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn round_trip_and_cyclic_prefix() {
        let cfg = small();
        let frame = build_frame::<f64>(&cfg, &[], crate::Seed(3)).unwrap();
        let pre = build_preamble::<f64>(&cfg, crate::Seed(3));
        let x = to_time_domain(&frame.grid, &cfg, &pre).unwrap();
        assert_eq!(x.len(), cfg.frame_length());
        let layout = SymbolLayout::frame(&cfg);
        let dft = Dft::new(cfg.num_subcarriers);
        for i in 0..layout.num_symbols {
            let s = layout.symbol_start(i);
            assert_eq!(&x[s..s + cfg.cp_length], &x[s + cfg.num_subcarriers..s + cfg.symbol_length()]);
        }
        for m in 0..cfg.num_symbols {
            let y = demodulate_symbol(&x, &layout, m + 1, &dft);
            for (a, b) in y.iter().zip(frame.grid.symbol(m)) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn dimension_checked() {
        let cfg = small();
        let frame = build_frame::<f64>(&cfg, &[], crate::Seed(3)).unwrap();
        let other = OfdmConfig { num_symbols: 4, ..small() };
        let pre = build_preamble::<f64>(&other, crate::Seed(3));
        assert!(to_time_domain(&frame.grid, &other, &pre).is_err());
    }
}
