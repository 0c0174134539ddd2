//! The CUSUM process of a functional sample and norm-argmax extraction.

use alloc::vec::Vec;

use crate::grid::{norm_of, Grid, NormKind};
use crate::sample::FunctionalSample;

/// The CUSUM field `U_n(k/n, t_j)` on the (time x grid) lattice.
///
/// Row `k` (of `n + 1`) holds `U_n(k/n, .) = (1/n)(Σ_{i<=k} X_i - (k/n) Σ_{i<=n} X_i)`
/// evaluated on the grid. Rows 0 and `n` are identically zero. Between
/// knots the process is linear in `s`, so norms are maximised at the knots
/// (norms are convex and the restriction to a segment is affine); argmax
/// extraction therefore never needs to search between rows.
#[derive(Debug, Clone, PartialEq)]
pub struct CusumProcess {
    u: Vec<f64>, // (n + 1) * m, row major
    n: usize,
    grid: Grid,
}

impl CusumProcess {
    /// Compute the CUSUM process of a sample.
    pub fn from_sample(sample: &FunctionalSample) -> Self {
        let n = sample.n();
        let m = sample.m();
        let mut partial = alloc::vec![0.0; (n + 1) * m];
        // partial sums: row k = Σ_{i<=k} X_i
        for k in 1..=n {
            let (prev, rest) = partial.split_at_mut(k * m);
            let prev = &prev[(k - 1) * m..];
            let cur = &mut rest[..m];
            for ((c, p), x) in cur.iter_mut().zip(prev).zip(sample.row(k - 1)) {
                *c = p + x;
            }
        }
        let total: Vec<f64> = partial[n * m..].to_vec();
        let inv_n = 1.0 / n as f64;
        for k in 0..=n {
            let frac = k as f64 * inv_n;
            for j in 0..m {
                partial[k * m + j] = inv_n * (partial[k * m + j] - frac * total[j]);
            }
        }
        CusumProcess { u: partial, n, grid: sample.grid().clone() }
    }

    /// Build directly from rows (used by the bootstrap).
    pub(crate) fn from_raw(u: Vec<f64>, n: usize, grid: Grid) -> Self {
        debug_assert_eq!(u.len(), (n + 1) * grid.len());
        CusumProcess { u, n, grid }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Row `k`: the curve `U_n(k/n, .)`.
    pub fn row(&self, k: usize) -> &[f64] {
        let m = self.grid.len();
        &self.u[k * m..(k + 1) * m]
    }

    /// `U_n(s, .)` for any `s` in `[0,1]`, linearly interpolated between rows.
    pub fn eval(&self, s: f64) -> Vec<f64> {
        let s = s.clamp(0.0, 1.0);
        let x = s * self.n as f64;
        let k = (x as usize).min(self.n - 1);
        let frac = x - k as f64;
        self.row(k)
            .iter()
            .zip(self.row(k + 1))
            .map(|(a, b)| a + frac * (b - a))
            .collect()
    }

    /// Norm of row `k` under `kind`.
    pub fn row_norm(&self, k: usize, kind: NormKind) -> f64 {
        norm_of(self.row(k), &self.grid, kind)
    }

    /// Maximise `√n ||U_n(k/n, .)||` over the knots `k = 0..=n`.
    ///
    /// Returns `(s_hat, stat)` with `s_hat = k*/n` for the smallest
    /// maximising `k` and `stat = √n * max_k ||U_n(k/n, .)||`.
    pub fn argmax_norm(&self, kind: NormKind) -> (f64, f64) {
        let mut best_k = 0;
        let mut best = 0.0;
        for k in 0..=self.n {
            let v = self.row_norm(k, kind);
            if v > best {
                best = v;
                best_k = k;
            }
        }
        let sqrt_n = libm::sqrt(self.n as f64);
        (best_k as f64 / self.n as f64, sqrt_n * best)
    }
}
