//! Discretised curves on a shared grid over `[0,1]` and the three norms.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Which norm to aggregate a curve with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormKind {
    /// Integral of the absolute value.
    L1,
    /// Root integral of the square.
    L2,
    /// Maximum absolute value.
    Sup,
}

/// An ordered grid `0 = t_1 < ... < t_m = 1` with quadrature weights that
/// form a probability measure on `[0,1]`.
///
/// Grids are shared behind an `Arc` because every curve and sample in a run
/// lives on the same discretisation.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Arc<Vec<f64>>,
    weights: Arc<Vec<f64>>,
}

impl Grid {
    /// Uniform grid of `m` points with trapezoid weights
    /// `w_1 = w_m = 1/(2(m-1))`, `w_j = 1/(m-1)` otherwise.
    ///
    /// Trapezoid weights are second order accurate and exact for piecewise
    /// linear curves, which matches the linear interpolation conventions
    /// used elsewhere in the crate.
    pub fn uniform(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidGrid("need at least 2 grid points"));
        }
        let h = 1.0 / (m - 1) as f64;
        let points: Vec<f64> = (0..m).map(|j| j as f64 * h).collect();
        Self::with_trapezoid_weights(points)
    }

    /// Grid on arbitrary strictly increasing points spanning `[0,1]`, with
    /// trapezoid weights `w_j = (t_{j+1} - t_{j-1}) / 2` (one-sided at the
    /// endpoints).
    pub fn with_trapezoid_weights(points: Vec<f64>) -> Result<Self> {
        let m = points.len();
        if m < 2 {
            return Err(Error::InvalidGrid("need at least 2 grid points"));
        }
        if points[0] != 0.0 || points[m - 1] != 1.0 {
            return Err(Error::InvalidGrid("grid must span [0, 1] exactly"));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid("grid points must be strictly increasing"));
        }
        let mut weights = alloc::vec![0.0; m];
        for j in 0..m - 1 {
            let half = (points[j + 1] - points[j]) / 2.0;
            weights[j] += half;
            weights[j + 1] += half;
        }
        Ok(Grid { points: Arc::new(points), weights: Arc::new(weights) })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Quadrature of pointwise values against the grid weights.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// Evaluate a function on every grid point.
    pub fn evaluate(&self, f: impl Fn(f64) -> f64) -> Curve {
        Curve { values: self.points.iter().map(|&t| f(t)).collect(), grid: self.clone() }
    }

    /// Zero curve on this grid.
    pub fn zero_curve(&self) -> Curve {
        Curve { values: alloc::vec![0.0; self.len()], grid: self.clone() }
    }
}

/// A single curve: `m` values on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    values: Vec<f64>,
    grid: Grid,
}

impl Curve {
    pub fn new(values: Vec<f64>, grid: Grid) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), got: values.len() });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSample("curve contains non-finite values"));
        }
        Ok(Curve { values, grid })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Norm of the curve under the grid's quadrature measure:
    /// `L1 = Σ w_j |c_j|`, `L2 = (Σ w_j c_j²)^{1/2}`, `Sup = max_j |c_j|`.
    pub fn norm(&self, kind: NormKind) -> f64 {
        norm_of(&self.values, &self.grid, kind)
    }
}

/// Norm of raw pointwise values on a grid; shared by [`Curve::norm`] and the
/// row-wise norms of the CUSUM process.
pub(crate) fn norm_of(values: &[f64], grid: &Grid, kind: NormKind) -> f64 {
    debug_assert_eq!(values.len(), grid.len());
    match kind {
        NormKind::L1 => grid
            .weights()
            .iter()
            .zip(values)
            .map(|(w, v)| w * libm::fabs(*v))
            .sum(),
        NormKind::L2 => {
            let s: f64 = grid.weights().iter().zip(values).map(|(w, v)| w * v * v).sum();
            libm::sqrt(s)
        }
        NormKind::Sup => values.iter().fold(0.0, |acc, v| {
            let a = libm::fabs(*v);
            if a > acc {
                a
            } else {
                acc
            }
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn uniform_grid_weights_sum_to_one() {
        for m in [2, 3, 101, 1000] {
            let g = Grid::uniform(m).unwrap();
            let total: f64 = g.weights().iter().sum();
            assert!((total - 1.0).abs() < 1e-12, "m = {m}: {total}");
            assert_eq!(g.points()[0], 0.0);
            assert_eq!(g.points()[m - 1], 1.0);
        }
    }

    #[test]
    fn constant_curve_has_unit_norms() {
        let g = Grid::uniform(101).unwrap();
        let c = g.evaluate(|_| 1.0);
        assert!((c.norm(NormKind::L1) - 1.0).abs() < 1e-12);
        assert!((c.norm(NormKind::L2) - 1.0).abs() < 1e-12);
        assert_eq!(c.norm(NormKind::Sup), 1.0);
    }

    // Independent oracle: fine-grid midpoint quadrature of |f|.
    fn midpoint_l1(f: impl Fn(f64) -> f64, cells: usize) -> f64 {
        let h = 1.0 / cells as f64;
        (0..cells).map(|i| h * f((i as f64 + 0.5) * h).abs()).sum()
    }

    #[test]
    fn l1_of_sin_4pi_matches_closed_form() {
        let g = Grid::uniform(1001).unwrap();
        let c = g.evaluate(|t| libm::sin(4.0 * core::f64::consts::PI * t));
        let closed_form = 2.0 / core::f64::consts::PI;
        let oracle = midpoint_l1(|t| libm::sin(4.0 * core::f64::consts::PI * t), 200_000);
        assert!((oracle - closed_form).abs() < 1e-6);
        assert!((c.norm(NormKind::L1) - closed_form).abs() < 1e-3);
    }

    #[test]
    fn sup_of_gaussian_bump_attained_at_center() {
        let g = Grid::uniform(101).unwrap();
        let c = g.evaluate(|t| 2.0 * libm::exp(-100.0 * (t - 0.5) * (t - 0.5)));
        assert_eq!(c.norm(NormKind::Sup), 2.0);
    }

    #[test]
    fn mismatched_lengths_rejected() {
        let g = Grid::uniform(10).unwrap();
        assert!(matches!(
            Curve::new(vec![0.0; 9], g),
            Err(Error::DimensionMismatch { expected: 10, got: 9 })
        ));
    }

    #[test]
    fn quadrature_error_shrinks_quadratically() {
        // Smooth analytic curve: doubling resolution must shrink the
        // quadrature error by roughly 4.
        let f = |t: f64| libm::exp(t) * libm::sin(3.0 * t);
        let exact = midpoint_l1(f, 400_000);
        let err = |m: usize| {
            let g = Grid::uniform(m).unwrap();
            (g.evaluate(f).norm(NormKind::L1) - exact).abs()
        };
        let (e1, e2) = (err(101), err(201));
        assert!(e2 < e1 / 3.0, "e1 = {e1}, e2 = {e2}");
    }
}
