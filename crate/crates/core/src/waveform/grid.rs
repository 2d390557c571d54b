use num_complex::Complex;

use super::config::OfdmConfig;
use crate::error::{IsacError, Result};
use crate::scalar::Real;

/// Regular pilot lattice: every `subcarrier_spacing`-th subcarrier of every
/// `symbol_spacing`-th symbol, starting at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PilotPattern {
    pub subcarrier_spacing: usize,
    pub symbol_spacing: usize,
}

impl PilotPattern {
    pub fn of(config: &OfdmConfig) -> Self {
        Self {
            subcarrier_spacing: config.pilot_subcarrier_spacing,
            symbol_spacing: config.pilot_symbol_spacing,
        }
    }

    #[inline]
    pub fn is_pilot(&self, subcarrier: usize, symbol: usize) -> bool {
        subcarrier.is_multiple_of(self.subcarrier_spacing) && symbol.is_multiple_of(self.symbol_spacing)
    }
}

/// Subcarrier × symbol grid of complex cells with its pilot layout and axes.
///
/// Cells are stored symbol by symbol so each OFDM symbol is a contiguous slice.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameGrid<T: Real> {
    num_subcarriers: usize,
    num_symbols: usize,
    pilots: PilotPattern,
    subcarrier_spacing: f64,
    symbol_duration: f64,
    cells: Vec<Complex<T>>,
}

impl<T: Real> FrameGrid<T> {
    pub fn zeros(config: &OfdmConfig) -> Self {
        Self {
            num_subcarriers: config.num_subcarriers,
            num_symbols: config.num_symbols,
            pilots: PilotPattern::of(config),
            subcarrier_spacing: config.subcarrier_spacing(),
            symbol_duration: config.symbol_duration(),
            cells: vec![Complex::new(T::zero(), T::zero()); config.num_subcarriers * config.num_symbols],
        }
    }

    /// Wraps symbol-major `cells` into a grid shaped by `config`.
    pub fn from_cells(config: &OfdmConfig, cells: Vec<Complex<T>>) -> Result<Self> {
        let mut grid = Self::zeros(config);
        if cells.len() != grid.cells.len() {
            return Err(IsacError::Dimension(format!(
                "{} cells for a {}×{} grid",
                cells.len(),
                grid.num_subcarriers,
                grid.num_symbols
            )));
        }
        grid.cells = cells;
        Ok(grid)
    }

    /// A grid of the same shape and axes with every cell set to zero.
    pub fn zeros_like(&self) -> Self {
        Self { cells: vec![Complex::new(T::zero(), T::zero()); self.cells.len()], ..self.clone() }
    }

    pub fn num_subcarriers(&self) -> usize {
        self.num_subcarriers
    }

    pub fn num_symbols(&self) -> usize {
        self.num_symbols
    }

    pub fn pilots(&self) -> PilotPattern {
        self.pilots
    }

    pub fn is_pilot(&self, subcarrier: usize, symbol: usize) -> bool {
        self.pilots.is_pilot(subcarrier, symbol)
    }

    /// Boolean pilot mask in the same symbol-major order as the cells.
    pub fn pilot_mask(&self) -> Vec<bool> {
        (0..self.num_symbols)
            .flat_map(|m| (0..self.num_subcarriers).map(move |k| (k, m)))
            .map(|(k, m)| self.is_pilot(k, m))
            .collect()
    }

    #[inline]
    fn index(&self, subcarrier: usize, symbol: usize) -> usize {
        debug_assert!(subcarrier < self.num_subcarriers && symbol < self.num_symbols);
        symbol * self.num_subcarriers + subcarrier
    }

    #[inline]
    pub fn get(&self, subcarrier: usize, symbol: usize) -> Complex<T> {
        self.cells[self.index(subcarrier, symbol)]
    }

    #[inline]
    pub fn set(&mut self, subcarrier: usize, symbol: usize, value: Complex<T>) {
        let i = self.index(subcarrier, symbol);
        self.cells[i] = value;
    }

    pub fn symbol(&self, symbol: usize) -> &[Complex<T>] {
        let n = self.num_subcarriers;
        &self.cells[symbol * n..(symbol + 1) * n]
    }

    pub fn symbol_mut(&mut self, symbol: usize) -> &mut [Complex<T>] {
        let n = self.num_subcarriers;
        &mut self.cells[symbol * n..(symbol + 1) * n]
    }

    pub fn cells(&self) -> &[Complex<T>] {
        &self.cells
    }

    pub fn cells_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.cells
    }

    pub fn into_cells(self) -> Vec<Complex<T>> {
        self.cells
    }

    /// `(subcarrier, symbol)` of every data (non-pilot) cell in mapping order.
    pub fn data_positions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.num_symbols)
            .flat_map(move |m| (0..self.num_subcarriers).map(move |k| (k, m)))
            .filter(move |&(k, m)| !self.is_pilot(k, m))
    }

    /// `(subcarrier, symbol)` of every pilot cell.
    pub fn pilot_positions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let p = self.pilots;
        (0..self.num_symbols)
            .step_by(p.symbol_spacing)
            .flat_map(move |m| (0..self.num_subcarriers).step_by(p.subcarrier_spacing).map(move |k| (k, m)))
    }

    /// Baseband frequency of subcarrier `k`.
    pub fn frequency(&self, subcarrier: usize) -> f64 {
        crate::dsp::signed_bin(subcarrier, self.num_subcarriers) as f64 * self.subcarrier_spacing
    }

    /// Start time of symbol `m` relative to the first payload symbol.
    pub fn time(&self, symbol: usize) -> f64 {
        symbol as f64 * self.symbol_duration
    }

    pub fn subcarrier_spacing(&self) -> f64 {
        self.subcarrier_spacing
    }

    pub fn symbol_duration(&self) -> f64 {
        self.symbol_duration
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.num_subcarriers == other.num_subcarriers && self.num_symbols == other.num_symbols
    }

    pub(crate) fn check_shape(&self, other: &Self) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(IsacError::Dimension(format!(
                "{}×{} grid against {}×{}",
                self.num_subcarriers, self.num_symbols, other.num_subcarriers, other.num_symbols
            )))
        }
    }
}
