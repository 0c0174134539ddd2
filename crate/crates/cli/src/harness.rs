//! Monte Carlo harness: run one of the tests on many independently seeded
//! synthetic samples and tally rejection rates.

use anyhow::Result;
use funcpd_core::enhance::{enhanced_test, EnhancementConfig};
use funcpd_core::scenarios::{assemble, spec_for_rep};
use funcpd_core::{classical::classical_test, relevant::relevant_test};
use funcpd_core::{BootstrapConfig, NormKind, Procedure, ScenarioSpec};
use rayon::prelude::*;
use std::time::Instant;

/// Which test each repetition runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestKind {
    Classical(NormKind),
    Relevant { delta: f64, procedure: Procedure },
    Enhanced { alpha_n: f64, b_eta: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub scenario: ScenarioSpec,
    pub reps: usize,
    pub alpha: f64,
    pub cfg: BootstrapConfig,
    pub test: TestKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub plan: ExperimentPlan,
    pub rejections: usize,
    pub rejection_rate: f64,
    pub mean_s_hat: f64,
    /// Wall-clock time; excluded from the canonical JSON so identical plans
    /// serialize identically.
    pub runtime_seconds: f64,
}

/// Run `plan.reps` repetitions. Repetition `r` uses the derived scenario
/// seed for both the sample and the bootstrap multipliers (the two read
/// disjoint stream namespaces), so the report is deterministic and
/// independent of the parallel schedule.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<ExperimentReport> {
    if plan.reps == 0 {
        anyhow::bail!("plan needs reps >= 1");
    }
    let start = Instant::now();
    let outcomes: Vec<(bool, f64)> = (0..plan.reps as u64)
        .into_par_iter()
        .map(|r| -> funcpd_core::Result<(bool, f64)> {
            let spec = spec_for_rep(&plan.scenario, r);
            let sample = assemble(&spec)?;
            let cfg = BootstrapConfig { seed: spec.seed, ..plan.cfg };
            match plan.test {
                TestKind::Classical(norm) => {
                    let cfg = BootstrapConfig { norm, ..cfg };
                    let res = classical_test(&sample, plan.alpha, &cfg)?;
                    Ok((res.reject, res.s_hat))
                }
                TestKind::Relevant { delta, procedure } => {
                    let res = relevant_test(&sample, delta, procedure, plan.alpha, &cfg)?;
                    Ok((res.reject, res.s_hat))
                }
                TestKind::Enhanced { alpha_n, b_eta } => {
                    let e_cfg = EnhancementConfig { alpha_n, b_eta };
                    let res = enhanced_test(&sample, plan.alpha, &cfg, &e_cfg)?;
                    Ok((res.reject, res.s_hat))
                }
            }
        })
        .collect::<funcpd_core::Result<_>>()?;
    let rejections = outcomes.iter().filter(|(reject, _)| *reject).count();
    let mean_s_hat =
        outcomes.iter().map(|(_, s)| s).sum::<f64>() / plan.reps as f64;
    Ok(ExperimentReport {
        plan: plan.clone(),
        rejections,
        rejection_rate: rejections as f64 / plan.reps as f64,
        mean_s_hat,
        runtime_seconds: start.elapsed().as_secs_f64(),
    })
}
