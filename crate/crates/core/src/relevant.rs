//! Tests of the relevant hypothesis `H_0(Delta): ||mu1 - mu2||_1 <= Delta`.
//!
//! The statistic is `T_{n,Delta} = sqrt(n)(sup_s ||U_n(s)||_1 - s_hat(1 - s_hat) Delta)`,
//! affine and strictly decreasing in `Delta`. Its limit on the boundary
//! depends on the set where the two mean curves coincide, which motivates
//! three bootstrap calibrations:
//!
//! - P1 estimates that set and integrates `U*_n(s_hat, .)` signed off it and
//!   in absolute value on it;
//! - P2 uses the signed integral everywhere (valid when the coincidence set
//!   is null, anti-conservative otherwise);
//! - P3 uses the plain L1 norm, an upper bound for P1, hence conservative.

use alloc::vec::Vec;

use crate::classical::{
    bootstrap_p_value, bootstrap_quantile, check_alpha, clamp_k_hat, demean_by_segments,
    resolve_block_length, BootstrapConfig, BootstrapEngine,
};
use crate::cusum::CusumProcess;
use crate::grid::{Curve, NormKind};
use crate::rng::namespace;
use crate::sample::FunctionalSample;
use crate::{Error, Result};

/// Which bootstrap calibration to use for the relevant test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Procedure {
    /// Estimated-null-set statistic.
    P1,
    /// Signed integral everywhere.
    P2,
    /// Plain L1 norm (always conservative).
    P3,
}

/// Segment mean estimates around a split.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanDiffEstimate {
    pub mu1_hat: Curve,
    pub mu2_hat: Curve,
    /// `mu1_hat - mu2_hat` pointwise.
    pub d_hat: Curve,
    /// Pointwise sample standard deviation of all `n` curves.
    pub sigma_hat: Curve,
    pub n: usize,
    pub k_hat: usize,
}

/// Estimated set where the two mean curves coincide.
#[derive(Debug, Clone, PartialEq)]
pub struct NullSetEstimate {
    /// `mask_j = |d_hat(t_j)| <= sigma_hat(t_j) log(n)/sqrt(n)`.
    pub mask: Vec<bool>,
    /// Quadrature weight of the masked points.
    pub measure: f64,
}

/// Outcome of a relevant test.
#[derive(Debug, Clone, PartialEq)]
pub struct RelevantTestResult {
    /// `T_{n,Delta}`.
    pub statistic: f64,
    pub quantile: f64,
    pub p_value: f64,
    /// `statistic > quantile`.
    pub reject: bool,
    pub procedure: Procedure,
    pub delta: f64,
    pub s_hat: f64,
    pub k_hat: usize,
    /// Minimal threshold at which the test stops rejecting, obtained by
    /// inverting the affine statistic at the realised quantile.
    pub delta_hat_alpha: f64,
    /// Only populated for [`Procedure::P1`].
    pub null_set: Option<NullSetEstimate>,
    pub bootstrap_draws: Vec<f64>,
}

/// Segment means before/from `k_hat` plus the pointwise standard deviation.
pub fn estimate_mean_diff(sample: &FunctionalSample, k_hat: usize) -> Result<MeanDiffEstimate> {
    let n = sample.n();
    if k_hat < 1 || k_hat > n - 1 {
        return Err(Error::SplitOutOfRange { k: k_hat, n });
    }
    let m = sample.m();
    let mu1 = sample.segment_mean(0, k_hat);
    let mu2 = sample.segment_mean(k_hat, n);
    let d: Vec<f64> = mu1.values().iter().zip(mu2.values()).map(|(a, b)| a - b).collect();
    let grand = sample.mean_curve();
    let mut var = alloc::vec![0.0; m];
    for row in sample.rows() {
        for j in 0..m {
            let dev = row[j] - grand.values()[j];
            var[j] += dev * dev;
        }
    }
    let sigma: Vec<f64> =
        var.into_iter().map(|v| libm::sqrt(v / (n - 1) as f64)).collect();
    let grid = sample.grid().clone();
    Ok(MeanDiffEstimate {
        mu1_hat: mu1,
        mu2_hat: mu2,
        d_hat: Curve::new(d, grid.clone())?,
        sigma_hat: Curve::new(sigma, grid)?,
        n,
        k_hat,
    })
}

/// Grid points where `|d_hat| <= sigma_hat log(n)/sqrt(n)`, with the noise
/// scaling adjusting for a spatially varying error level.
pub fn estimate_null_set(est: &MeanDiffEstimate) -> NullSetEstimate {
    let n = est.n as f64;
    let threshold_scale = libm::log(n) / libm::sqrt(n);
    let grid = est.d_hat.grid();
    let mask: Vec<bool> = est
        .d_hat
        .values()
        .iter()
        .zip(est.sigma_hat.values())
        .map(|(d, s)| libm::fabs(*d) <= s * threshold_scale)
        .collect();
    let measure = grid
        .weights()
        .iter()
        .zip(&mask)
        .filter(|(_, &keep)| keep)
        .map(|(w, _)| w)
        .sum();
    NullSetEstimate { mask, measure }
}

/// `T_{n,Delta}` and the L1 change point estimate.
pub fn relevant_statistic(sample: &FunctionalSample, delta: f64) -> Result<(f64, f64)> {
    if delta < 0.0 {
        return Err(Error::InvalidConfig("delta must be nonnegative"));
    }
    let u = CusumProcess::from_sample(sample);
    let (s_hat, classical) = u.argmax_norm(NormKind::L1);
    let sqrt_n = libm::sqrt(sample.n() as f64);
    Ok((classical - sqrt_n * s_hat * (1.0 - s_hat) * delta, s_hat))
}

fn sgn(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn replicate_row<'a>(replicate: &'a CusumProcess, s_hat: f64) -> &'a [f64] {
    let k = clamp_k_hat(s_hat, replicate.n());
    replicate.row(k)
}

/// P1 bootstrap draw: signed integral of `U*_n(s_hat, .)` off the estimated
/// null set plus the absolute integral on it, scaled by `sqrt(n)`.
pub fn boot_p1(
    replicate: &CusumProcess,
    s_hat: f64,
    est: &MeanDiffEstimate,
    nset: &NullSetEstimate,
) -> Result<f64> {
    let grid = replicate.grid();
    if est.d_hat.values().len() != grid.len() || nset.mask.len() != grid.len() {
        return Err(Error::DimensionMismatch { expected: grid.len(), got: est.d_hat.values().len() });
    }
    let row = replicate_row(replicate, s_hat);
    let mut acc = 0.0;
    for j in 0..grid.len() {
        let w = grid.weights()[j];
        acc += if nset.mask[j] {
            w * libm::fabs(row[j])
        } else {
            w * sgn(est.d_hat.values()[j]) * row[j]
        };
    }
    Ok(libm::sqrt(replicate.n() as f64) * acc)
}

/// P2 bootstrap draw: signed integral of `U*_n(s_hat, .)` against
/// `sgn(d_hat)` over all of `[0,1]`, scaled by `sqrt(n)`.
pub fn boot_p2(replicate: &CusumProcess, s_hat: f64, est: &MeanDiffEstimate) -> Result<f64> {
    let grid = replicate.grid();
    if est.d_hat.values().len() != grid.len() {
        return Err(Error::DimensionMismatch { expected: grid.len(), got: est.d_hat.values().len() });
    }
    let row = replicate_row(replicate, s_hat);
    let acc: f64 = grid
        .weights()
        .iter()
        .zip(row)
        .zip(est.d_hat.values())
        .map(|((w, u), d)| w * sgn(*d) * u)
        .sum();
    Ok(libm::sqrt(replicate.n() as f64) * acc)
}

/// P3 bootstrap draw: `sqrt(n) ||U*_n(s_hat, .)||_1`.
pub fn boot_p3(replicate: &CusumProcess, s_hat: f64) -> f64 {
    let grid = replicate.grid();
    let row = replicate_row(replicate, s_hat);
    let acc: f64 =
        grid.weights().iter().zip(row).map(|(w, u)| w * libm::fabs(*u)).sum();
    libm::sqrt(replicate.n() as f64) * acc
}

/// Relevant test of `H_0(Delta)` with the chosen bootstrap calibration.
///
/// The bootstrap replicates reuse the classical segment-demeaned sample and
/// multiplier streams; only the functional applied to `U*_n` differs between
/// procedures, so draws share seeds across procedures.
pub fn relevant_test(
    sample: &FunctionalSample,
    delta: f64,
    procedure: Procedure,
    alpha: f64,
    cfg: &BootstrapConfig,
) -> Result<RelevantTestResult> {
    check_alpha(alpha)?;
    if delta < 0.0 {
        return Err(Error::InvalidConfig("delta must be nonnegative"));
    }
    if cfg.replicates == 0 {
        return Err(Error::InvalidConfig("need at least one bootstrap replicate"));
    }
    let n = sample.n();
    let u = CusumProcess::from_sample(sample);
    let (s_hat, classical) = u.argmax_norm(NormKind::L1);
    let sqrt_n = libm::sqrt(n as f64);
    let statistic = classical - sqrt_n * s_hat * (1.0 - s_hat) * delta;
    let k_hat = clamp_k_hat(s_hat, n);
    let est = estimate_mean_diff(sample, k_hat)?;
    let null_set = match procedure {
        Procedure::P1 => Some(estimate_null_set(&est)),
        _ => None,
    };
    let l = resolve_block_length(sample, cfg)?;
    let demeaned = demean_by_segments(sample, k_hat)?;
    let engine = BootstrapEngine::new(&demeaned, l)?;
    let mut failure = None;
    let draws = engine.draws(cfg.replicates, cfg.seed, namespace::BOOTSTRAP, |rep| {
        let draw = match procedure {
            Procedure::P1 => boot_p1(rep, s_hat, &est, null_set.as_ref().expect("P1 set")),
            Procedure::P2 => boot_p2(rep, s_hat, &est),
            Procedure::P3 => Ok(boot_p3(rep, s_hat)),
        };
        match draw {
            Ok(v) => v,
            Err(e) => {
                failure = Some(e);
                0.0
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let quantile = bootstrap_quantile(&draws, alpha);
    let delta_hat_alpha = minimal_delta_from(classical, quantile, s_hat, n);
    Ok(RelevantTestResult {
        statistic,
        quantile,
        p_value: bootstrap_p_value(&draws, statistic),
        reject: statistic > quantile,
        procedure,
        delta,
        s_hat,
        k_hat,
        delta_hat_alpha,
        null_set,
        bootstrap_draws: draws,
    })
}

/// Invert the affine statistic at the quantile:
/// `Delta_hat = max(0, (sup_s ||U_n(s)||_1 - q*/sqrt(n)) / (s_hat (1 - s_hat)))`.
///
/// Equals `min { Delta >= 0 : T_{n,Delta} <= q* }` because `T_{n,Delta}` is
/// affine in `Delta` with slope `-sqrt(n) s_hat (1 - s_hat)`. Returns 0 when
/// `s_hat` is degenerate (0 or 1).
fn minimal_delta_from(classical_stat: f64, quantile: f64, s_hat: f64, n: usize) -> f64 {
    let denom = s_hat * (1.0 - s_hat);
    if denom <= 0.0 {
        return 0.0;
    }
    let sqrt_n = libm::sqrt(n as f64);
    ((classical_stat - quantile) / (sqrt_n * denom)).max(0.0)
}

/// Minimal relevance threshold `Delta_hat_alpha` for which `H_0(Delta)` is
/// no longer rejected (the sequential-rejection evidence measure).
pub fn minimal_delta(
    sample: &FunctionalSample,
    alpha: f64,
    procedure: Procedure,
    cfg: &BootstrapConfig,
) -> Result<f64> {
    Ok(relevant_test(sample, 0.0, procedure, alpha, cfg)?.delta_hat_alpha)
}
