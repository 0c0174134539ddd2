//! Seeded generators for the synthetic error processes and mean alternatives
//! of the simulation study: Brownian motion curves, heavy-tailed B-spline
//! expansions, first order functional autoregressions, and the mean change
//! family (constant, bump, bumps, spike, Gaussian sparsity family).

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};

use crate::grid::{Curve, Grid};
use crate::rng::{derive_seed, namespace, substream};
use crate::sample::FunctionalSample;
use crate::{Error, Result};

/// Error process family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    /// iid standard Brownian motion paths.
    LightIid,
    /// iid curves with t(3) coefficients over a 10-function cubic B-spline
    /// basis (infinite fourth moment).
    HeavyIid,
    /// FAR(1) with Gaussian innovation coefficients.
    LightFar,
    /// FAR(1) with t(3) innovation coefficients.
    HeavyFar,
}

/// Post-change mean `mu2`; the pre-change mean is always zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeanKind {
    /// No change.
    Null,
    /// `kappa`.
    Const,
    /// `kappa sin(pi t)`.
    Bump,
    /// `kappa sin(4 pi t)`.
    Bumps,
    /// `kappa 2 exp(-100 (t - 0.5)^2)`.
    Spike,
    /// `kappa exp(-c (t - 0.5)^2)`; `c >= 0` controls sparsity, `c = 0` is
    /// the constant curve.
    PhiC(f64),
}

/// Full description of a synthetic sample; identical specs generate
/// bitwise-identical samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioSpec {
    pub n: usize,
    pub m: usize,
    pub error_kind: ErrorKind,
    pub mean_kind: MeanKind,
    pub kappa: f64,
    /// Rescaled change location in `(0, 1)`; the change happens after
    /// observation `floor(n s_star)`.
    pub s_star: f64,
    pub seed: u64,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidConfig("scenario needs n >= 2"));
        }
        if self.m < 2 {
            return Err(Error::InvalidConfig("scenario needs m >= 2"));
        }
        if !(self.s_star > 0.0 && self.s_star < 1.0) {
            return Err(Error::InvalidConfig("s_star must lie in (0, 1)"));
        }
        Ok(())
    }
}

/// The post-change mean curve `kappa * shape` on `grid`.
pub fn gen_mean(kind: MeanKind, kappa: f64, grid: &Grid) -> Curve {
    use core::f64::consts::PI;
    match kind {
        MeanKind::Null => grid.evaluate(|_| 0.0),
        MeanKind::Const => grid.evaluate(|_| kappa),
        MeanKind::Bump => grid.evaluate(|t| kappa * libm::sin(PI * t)),
        MeanKind::Bumps => grid.evaluate(|t| kappa * libm::sin(4.0 * PI * t)),
        MeanKind::Spike => {
            grid.evaluate(|t| kappa * 2.0 * libm::exp(-100.0 * (t - 0.5) * (t - 0.5)))
        }
        MeanKind::PhiC(c) => grid.evaluate(|t| kappa * libm::exp(-c * (t - 0.5) * (t - 0.5))),
    }
}

/// iid standard Brownian motion paths on the grid: cumulative sums of
/// `N(0, t_{j+1} - t_j)` increments with `path(0) = 0`.
pub fn gen_errors_light_iid(n: usize, grid: &Grid, seed: u64) -> FunctionalSample {
    let m = grid.len();
    let mut rng = substream(seed, namespace::SCENARIO);
    let mut values = Vec::with_capacity(n * m);
    for _ in 0..n {
        let mut level = 0.0;
        values.push(0.0);
        for j in 1..m {
            let dt = grid.points()[j] - grid.points()[j - 1];
            let z: f64 = StandardNormal.sample(&mut rng);
            level += z * libm::sqrt(dt);
            values.push(level);
        }
    }
    FunctionalSample::new(values, n, grid.clone()).expect("generated paths are finite")
}

/// Cubic B-spline basis with `nbasis` functions on equispaced breakpoints
/// spanning `[0,1]` (clamped knots), evaluated on the grid. Row `k` holds
/// basis function `k`; the rows form a partition of unity.
pub fn bspline_basis(nbasis: usize, grid: &Grid) -> Vec<Vec<f64>> {
    const ORDER: usize = 4; // cubic
    assert!(nbasis >= ORDER, "need at least {ORDER} basis functions");
    let nbreaks = nbasis - ORDER + 2;
    // clamped knot vector: ORDER copies of each endpoint
    let mut knots = Vec::with_capacity(nbasis + ORDER);
    for _ in 0..ORDER {
        knots.push(0.0);
    }
    for b in 1..nbreaks - 1 {
        knots.push(b as f64 / (nbreaks - 1) as f64);
    }
    for _ in 0..ORDER {
        knots.push(1.0);
    }
    let mut basis = alloc::vec![alloc::vec![0.0; grid.len()]; nbasis];
    for (j, &t) in grid.points().iter().enumerate() {
        // Cox - de Boor recursion at t
        let mut b = alloc::vec![0.0; nbasis + ORDER - 1];
        // order 1: indicator of the knot span (right-closed at t = 1)
        for i in 0..nbasis + ORDER - 1 {
            let inside = if t < 1.0 {
                knots[i] <= t && t < knots[i + 1]
            } else {
                knots[i] < knots[i + 1] && knots[i + 1] == 1.0
            };
            b[i] = if inside { 1.0 } else { 0.0 };
        }
        for ord in 2..=ORDER {
            for i in 0..nbasis + ORDER - ord {
                let left_den = knots[i + ord - 1] - knots[i];
                let right_den = knots[i + ord] - knots[i + 1];
                let left = if left_den > 0.0 { (t - knots[i]) / left_den * b[i] } else { 0.0 };
                let right = if right_den > 0.0 {
                    (knots[i + ord] - t) / right_den * b[i + 1]
                } else {
                    0.0
                };
                b[i] = left + right;
            }
        }
        for k in 0..nbasis {
            basis[k][j] = b[k];
        }
    }
    basis
}

/// iid heavy-tailed curves: `eps_i = Σ_{k=1}^{10} f_k t_{ik}` with `f_k` the
/// cubic B-spline partition of unity and `t_{ik}` iid Student t(3)
/// coefficients (used raw, not variance-standardised).
pub fn gen_errors_heavy_iid(n: usize, grid: &Grid, seed: u64) -> FunctionalSample {
    let basis = bspline_basis(10, grid);
    let mut rng = substream(seed, namespace::SCENARIO);
    let t3 = StudentT::new(3.0).expect("valid dof");
    let coeffs = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..10).map(|_| t3.sample(rng)).collect()
    };
    expand_in_basis(n, grid, &basis, &mut rng, coeffs)
}

fn expand_in_basis(
    n: usize,
    grid: &Grid,
    basis: &[Vec<f64>],
    rng: &mut ChaCha8Rng,
    mut coeffs: impl FnMut(&mut ChaCha8Rng) -> Vec<f64>,
) -> FunctionalSample {
    let m = grid.len();
    let mut values = alloc::vec![0.0; n * m];
    for i in 0..n {
        let a = coeffs(rng);
        for (k, fk) in basis.iter().enumerate() {
            let ak = a[k];
            if ak == 0.0 {
                continue;
            }
            for j in 0..m {
                values[i * m + j] += ak * fk[j];
            }
        }
    }
    FunctionalSample::new(values, n, grid.clone()).expect("generated curves are finite")
}

/// Orthonormal Fourier basis on `[0,1]`: `v_1 = 1`,
/// `v_{2k} = sqrt(2) sin(2 pi k t)`, `v_{2k+1} = sqrt(2) cos(2 pi k t)`.
pub fn fourier_basis(nbasis: usize, grid: &Grid) -> Vec<Vec<f64>> {
    use core::f64::consts::PI;
    let sqrt2 = libm::sqrt(2.0);
    (1..=nbasis)
        .map(|k| {
            grid.points()
                .iter()
                .map(|&t| {
                    if k == 1 {
                        1.0
                    } else if k % 2 == 0 {
                        sqrt2 * libm::sin(2.0 * PI * (k / 2) as f64 * t)
                    } else {
                        sqrt2 * libm::cos(2.0 * PI * (k / 2) as f64 * t)
                    }
                })
                .collect()
        })
        .collect()
}

/// Tail choice for the FAR(1) innovations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tails {
    Light,
    Heavy,
}

const FAR_DIM: usize = 21;
const FAR_BURN_IN: usize = 100;

/// The FAR(1) operator as a `21 x 21` coefficient matrix: entries drawn once
/// per seed as `N(0, (ij)^{-1})`, then scaled so the Frobenius norm equals
/// `1/sqrt(2)` (a contraction, so 100 burn-in steps reduce the transient by
/// a factor of at least `2^{-50}`).
fn far_operator(seed: u64) -> Vec<f64> {
    let mut rng = substream(seed, namespace::SCENARIO_PARAMS);
    let mut psi = alloc::vec![0.0; FAR_DIM * FAR_DIM];
    for i in 0..FAR_DIM {
        for j in 0..FAR_DIM {
            let z: f64 = StandardNormal.sample(&mut rng);
            psi[i * FAR_DIM + j] = z / libm::sqrt(((i + 1) * (j + 1)) as f64);
        }
    }
    let frob = libm::sqrt(psi.iter().map(|v| v * v).sum());
    let target = 1.0 / libm::sqrt(2.0);
    for v in &mut psi {
        *v *= target / frob;
    }
    psi
}

/// First order functional autoregression: coefficient-space recursion
/// `a_i = Psi a_{i-1} + z_i` in 21 Fourier dimensions with innovation
/// coefficients `z_{i,k} = N_{i,k} / k` (or `T_{i,k} / k` for heavy tails),
/// 100 burn-in steps discarded, curves reconstructed on the grid.
pub fn gen_errors_far1(n: usize, grid: &Grid, seed: u64, tails: Tails) -> FunctionalSample {
    gen_errors_far1_with_operator(n, grid, seed, tails, &far_operator(seed))
}

/// FAR(1) with an explicit `21 x 21` operator (row-major); a zero operator
/// degenerates the recursion to iid innovations.
pub fn gen_errors_far1_with_operator(
    n: usize,
    grid: &Grid,
    seed: u64,
    tails: Tails,
    psi: &[f64],
) -> FunctionalSample {
    assert_eq!(psi.len(), FAR_DIM * FAR_DIM);
    let basis = fourier_basis(FAR_DIM, grid);
    let mut rng = substream(seed, namespace::SCENARIO);
    let t3 = StudentT::new(3.0).expect("valid dof");
    let draw = |rng: &mut ChaCha8Rng| -> f64 {
        match tails {
            Tails::Light => StandardNormal.sample(rng),
            Tails::Heavy => t3.sample(rng),
        }
    };
    let m = grid.len();
    let mut state = alloc::vec![0.0; FAR_DIM];
    let mut next = alloc::vec![0.0; FAR_DIM];
    let mut values = alloc::vec![0.0; n * m];
    for step in 0..FAR_BURN_IN + n {
        for (i, slot) in next.iter_mut().enumerate() {
            let row = &psi[i * FAR_DIM..(i + 1) * FAR_DIM];
            *slot = row.iter().zip(&state).map(|(p, a)| p * a).sum();
        }
        for (k, slot) in next.iter_mut().enumerate() {
            *slot += draw(&mut rng) / (k + 1) as f64;
        }
        core::mem::swap(&mut state, &mut next);
        if step >= FAR_BURN_IN {
            let i = step - FAR_BURN_IN;
            for (k, vk) in basis.iter().enumerate() {
                let ak = state[k];
                for j in 0..m {
                    values[i * m + j] += ak * vk[j];
                }
            }
        }
    }
    FunctionalSample::new(values, n, grid.clone()).expect("generated curves are finite")
}

/// Errors only, dispatched on the scenario's error family.
pub fn gen_errors(spec: &ScenarioSpec, grid: &Grid) -> FunctionalSample {
    match spec.error_kind {
        ErrorKind::LightIid => gen_errors_light_iid(spec.n, grid, spec.seed),
        ErrorKind::HeavyIid => gen_errors_heavy_iid(spec.n, grid, spec.seed),
        ErrorKind::LightFar => gen_errors_far1(spec.n, grid, spec.seed, Tails::Light),
        ErrorKind::HeavyFar => gen_errors_far1(spec.n, grid, spec.seed, Tails::Heavy),
    }
}

/// Full sample `X_i = eps_i + mu2 1{i > floor(n s_star)}` (the pre-change
/// mean is zero).
pub fn assemble(spec: &ScenarioSpec) -> Result<FunctionalSample> {
    spec.validate()?;
    let grid = Grid::uniform(spec.m)?;
    let errors = gen_errors(spec, &grid);
    Ok(add_mean_shift(&errors, spec))
}

/// Add the post-change mean to given errors; exposed so tests can inject a
/// noiseless error sample.
pub fn add_mean_shift(errors: &FunctionalSample, spec: &ScenarioSpec) -> FunctionalSample {
    let n = errors.n();
    let m = errors.m();
    let mu2 = gen_mean(spec.mean_kind, spec.kappa, errors.grid());
    let k_star = (n as f64 * spec.s_star) as usize;
    let mut values = errors.values().to_vec();
    for i in k_star..n {
        for j in 0..m {
            values[i * m + j] += mu2.values()[j];
        }
    }
    FunctionalSample::new(values, n, errors.grid().clone()).expect("finite")
}

/// Child spec for Monte Carlo repetition `rep`, identical except for the
/// derived seed.
pub fn spec_for_rep(spec: &ScenarioSpec, rep: u64) -> ScenarioSpec {
    ScenarioSpec { seed: derive_seed(spec.seed, rep), ..*spec }
}
