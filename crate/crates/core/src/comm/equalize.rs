use num_complex::Complex;

use super::cfr::CommCfr;
use crate::error::{IsacError, Result};
use crate::scalar::{wide, Real};
use crate::waveform::FrameGrid;

/// Channel power below which a cell counts as erased.
pub const ERASURE_POWER: f64 = 1e-30;

/// Equalised symbols with the per-cell channel power gain that scales the
/// noise of each cell, and the erasure mask (symbol-major like the cells).
#[derive(Clone, Debug, PartialEq)]
pub struct Equalized<T: Real> {
    pub grid: FrameGrid<T>,
    /// Post-equalisation noise at a cell is the per-channel noise divided by
    /// this gain.
    pub gain: Vec<f64>,
    pub erased: Vec<bool>,
}

impl<T: Real> Equalized<T> {
    pub fn num_erased(&self) -> usize {
        self.erased.iter().filter(|&&e| e).count()
    }
}

/// Maximum-ratio combining over receive channels,
/// `Σ Y·conj(H) / Σ |H|²` per cell.
pub fn mrc_combine<T: Real>(frames: &[FrameGrid<T>], cfrs: &[CommCfr<T>]) -> Result<Equalized<T>> {
    let first = frames.first().ok_or_else(|| IsacError::Argument("no channels to combine".into()))?;
    if frames.len() != cfrs.len() {
        return Err(IsacError::Dimension(format!("{} frames with {} channel estimates", frames.len(), cfrs.len())));
    }
    for (f, h) in frames.iter().zip(cfrs) {
        first.check_shape(f)?;
        first.check_shape(&h.grid)?;
    }
    let cells = first.cells().len();
    let mut grid = first.zeros_like();
    let mut gain = vec![0.0; cells];
    let mut erased = vec![false; cells];
    for (i, out) in grid.cells_mut().iter_mut().enumerate() {
        let mut num = Complex::new(T::zero(), T::zero());
        let mut den = T::zero();
        for (f, h) in frames.iter().zip(cfrs) {
            let hv = h.grid.cells()[i];
            num = num + f.cells()[i] * hv.conj();
            den = den + hv.norm_sqr();
        }
        let power = wide(den);
        if power <= ERASURE_POWER || !power.is_finite() {
            erased[i] = true;
        } else {
            *out = num / den;
            gain[i] = power;
        }
    }
    Ok(Equalized { grid, gain, erased })
}

/// Zero-forcing equalisation of one channel, `Y / H` per cell.
pub fn zf_equalize<T: Real>(frame: &FrameGrid<T>, cfr: &CommCfr<T>) -> Result<Equalized<T>> {
    frame.check_shape(&cfr.grid)?;
    let cells = frame.cells().len();
    let mut grid = frame.zeros_like();
    let mut gain = vec![0.0; cells];
    let mut erased = vec![false; cells];
    for (i, out) in grid.cells_mut().iter_mut().enumerate() {
        let h = cfr.grid.cells()[i];
        let power = wide(h.norm_sqr());
        if power <= ERASURE_POWER || !power.is_finite() {
            erased[i] = true;
        } else {
            *out = frame.cells()[i] / h;
            gain[i] = power;
        }
    }
    Ok(Equalized { grid, gain, erased })
}
