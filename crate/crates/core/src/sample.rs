//! A sample of `n` curves on a shared grid.

use alloc::vec::Vec;

use crate::grid::{Curve, Grid};
use crate::{Error, Result};

/// `n` curves observed on a common grid of `m` points, stored row-major
/// (row `i` is curve `i` in temporal order).
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalSample {
    values: Vec<f64>, // n * m, row major
    n: usize,
    grid: Grid,
}

impl FunctionalSample {
    pub fn new(values: Vec<f64>, n: usize, grid: Grid) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSample("need at least 2 curves"));
        }
        if values.len() != n * grid.len() {
            return Err(Error::DimensionMismatch { expected: n * grid.len(), got: values.len() });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSample("sample contains non-finite values"));
        }
        Ok(FunctionalSample { values, n, grid })
    }

    /// Build from per-curve rows, all on `grid`.
    pub fn from_rows(rows: &[Vec<f64>], grid: Grid) -> Result<Self> {
        let m = grid.len();
        let mut values = Vec::with_capacity(rows.len() * m);
        for row in rows {
            if row.len() != m {
                return Err(Error::DimensionMismatch { expected: m, got: row.len() });
            }
            values.extend_from_slice(row);
        }
        Self::new(values, rows.len(), grid)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.grid.len()
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Curve `i` (0-based) as a slice.
    pub fn row(&self, i: usize) -> &[f64] {
        let m = self.m();
        &self.values[i * m..(i + 1) * m]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.m())
    }

    /// Mean curve over rows `lo..hi` (0-based, half-open).
    pub fn segment_mean(&self, lo: usize, hi: usize) -> Curve {
        let m = self.m();
        let mut acc = alloc::vec![0.0; m];
        for i in lo..hi {
            for (a, v) in acc.iter_mut().zip(self.row(i)) {
                *a += v;
            }
        }
        let len = (hi - lo) as f64;
        for a in &mut acc {
            *a /= len;
        }
        Curve::new(acc, self.grid.clone()).expect("segment mean stays finite")
    }

    /// Cross-sectional mean over all curves.
    pub fn mean_curve(&self) -> Curve {
        self.segment_mean(0, self.n)
    }

    pub(crate) fn values(&self) -> &[f64] {
        &self.values
    }
}
