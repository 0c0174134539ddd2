//! Serializable report structures and their plain-text rendering.
//!
//! JSON is the canonical machine-readable output: field order is fixed by
//! the struct definitions, and nothing run-dependent (wall-clock time,
//! bootstrap draw vectors) is serialized, so identical inputs produce
//! byte-identical documents.

use crate::harness::{ExperimentPlan, ExperimentReport, TestKind};
use funcpd_core::{
    ErrorKind, MeanKind, NormKind, Procedure, RelevantTestResult, ScenarioSpec, TestResult,
};
use serde::Serialize;
use std::fmt::Write;

pub fn norm_name(norm: NormKind) -> &'static str {
    match norm {
        NormKind::L1 => "l1",
        NormKind::L2 => "l2",
        NormKind::Sup => "sup",
    }
}

pub fn procedure_name(p: Procedure) -> &'static str {
    match p {
        Procedure::P1 => "p1",
        Procedure::P2 => "p2",
        Procedure::P3 => "p3",
    }
}

fn error_kind_name(kind: ErrorKind) -> &'static str {
    match kind {
        ErrorKind::LightIid => "light_iid",
        ErrorKind::HeavyIid => "heavy_iid",
        ErrorKind::LightFar => "light_far",
        ErrorKind::HeavyFar => "heavy_far",
    }
}

fn mean_kind_name(kind: MeanKind) -> String {
    match kind {
        MeanKind::Null => "null".into(),
        MeanKind::Const => "const".into(),
        MeanKind::Bump => "bump".into(),
        MeanKind::Bumps => "bumps".into(),
        MeanKind::Spike => "spike".into(),
        MeanKind::PhiC(c) => format!("phi_c({c})"),
    }
}

#[derive(Serialize)]
pub struct DetectReport {
    pub test: &'static str,
    pub norm: &'static str,
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
    pub block_length: usize,
    pub replicates: usize,
    pub seed: u64,
    pub statistic: f64,
    pub quantile: f64,
    pub p_value: f64,
    pub reject: bool,
    pub s_hat: f64,
    pub k_hat: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_hat_alpha: Option<f64>,
}

#[derive(Serialize)]
pub struct RelevantReport {
    pub test: &'static str,
    pub procedure: &'static str,
    pub delta: f64,
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
    pub block_length: usize,
    pub replicates: usize,
    pub seed: u64,
    pub statistic: f64,
    pub quantile: f64,
    pub p_value: f64,
    pub reject: bool,
    pub s_hat: f64,
    pub k_hat: usize,
    pub delta_hat_alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub null_set_measure: Option<f64>,
}

#[derive(Serialize)]
pub struct EnhancedReport {
    pub test: &'static str,
    pub alpha_n: f64,
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
    pub block_length: usize,
    pub replicates: usize,
    pub seed: u64,
    pub statistic: f64,
    pub eta: f64,
    pub enhancement_term: f64,
    pub quantile: f64,
    pub p_value: f64,
    pub reject: bool,
    pub s_hat: f64,
    pub k_hat: usize,
}

#[derive(Serialize)]
pub struct ScenarioJson {
    pub n: usize,
    pub m: usize,
    pub error_kind: &'static str,
    pub mean_kind: String,
    pub kappa: f64,
    pub s_star: f64,
    pub seed: u64,
}

impl From<&ScenarioSpec> for ScenarioJson {
    fn from(spec: &ScenarioSpec) -> Self {
        ScenarioJson {
            n: spec.n,
            m: spec.m,
            error_kind: error_kind_name(spec.error_kind),
            mean_kind: mean_kind_name(spec.mean_kind),
            kappa: spec.kappa,
            s_star: spec.s_star,
            seed: spec.seed,
        }
    }
}

#[derive(Serialize)]
pub struct PlanJson {
    pub scenario: ScenarioJson,
    pub reps: usize,
    pub alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block_length: Option<usize>,
    pub replicates: usize,
    pub test: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub procedure: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_n: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_eta: Option<usize>,
}

impl From<&ExperimentPlan> for PlanJson {
    fn from(plan: &ExperimentPlan) -> Self {
        let (test, norm, delta, procedure, alpha_n, b_eta) = match plan.test {
            TestKind::Classical(n) => {
                ("classical", Some(norm_name(n)), None, None, None, None)
            }
            TestKind::Relevant { delta, procedure } => {
                ("relevant", None, Some(delta), Some(procedure_name(procedure)), None, None)
            }
            TestKind::Enhanced { alpha_n, b_eta } => {
                ("enhanced", None, None, None, Some(alpha_n), Some(b_eta))
            }
        };
        PlanJson {
            scenario: (&plan.scenario).into(),
            reps: plan.reps,
            alpha: plan.alpha,
            block_length: plan.cfg.block_length,
            replicates: plan.cfg.replicates,
            test,
            norm,
            delta,
            procedure,
            alpha_n,
            b_eta,
        }
    }
}

#[derive(Serialize)]
pub struct ExperimentJson {
    pub plan: PlanJson,
    pub rejections: usize,
    pub rejection_rate: f64,
    pub mean_s_hat: f64,
}

impl From<&ExperimentReport> for ExperimentJson {
    fn from(r: &ExperimentReport) -> Self {
        ExperimentJson {
            plan: (&r.plan).into(),
            rejections: r.rejections,
            rejection_rate: r.rejection_rate,
            mean_s_hat: r.mean_s_hat,
        }
    }
}

#[derive(Serialize)]
pub struct BandwidthReport {
    pub n: usize,
    pub m: usize,
    pub block_length: usize,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

fn push_rows(out: &mut String, rows: &[(&str, String)]) {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (key, value) in rows {
        let _ = writeln!(out, "  {key:width$}  {value}");
    }
}

fn decision(reject: bool) -> String {
    if reject { "reject".into() } else { "fail to reject".into() }
}

pub fn render_detect(r: &DetectReport) -> String {
    let mut out = format!("classical test ({} norm)\n", r.norm);
    let mut rows = vec![
        ("curves (n)", r.n.to_string()),
        ("grid points (m)", r.m.to_string()),
        ("block length", r.block_length.to_string()),
        ("bootstrap replicates", r.replicates.to_string()),
        ("statistic", format!("{:.6}", r.statistic)),
        (
            "quantile",
            format!("{:.6}  (level {})", r.quantile, r.alpha),
        ),
        ("p value", format!("{:.4}", r.p_value)),
        ("decision", decision(r.reject)),
        (
            "change point",
            format!("index {} (s_hat = {:.4})", r.k_hat, r.s_hat),
        ),
    ];
    if let Some(d) = r.delta_hat_alpha {
        rows.push(("minimal delta", format!("{d:.6}")));
    }
    push_rows(&mut out, &rows);
    out
}

pub fn render_relevant(r: &RelevantReport) -> String {
    let mut out = format!(
        "relevant test ({}, H0: ||mu1 - mu2||_1 <= {})\n",
        r.procedure, r.delta
    );
    let mut rows = vec![
        ("curves (n)", r.n.to_string()),
        ("grid points (m)", r.m.to_string()),
        ("block length", r.block_length.to_string()),
        ("bootstrap replicates", r.replicates.to_string()),
        ("statistic", format!("{:.6}", r.statistic)),
        (
            "quantile",
            format!("{:.6}  (level {})", r.quantile, r.alpha),
        ),
        ("p value", format!("{:.4}", r.p_value)),
        ("decision", decision(r.reject)),
        (
            "change point",
            format!("index {} (s_hat = {:.4})", r.k_hat, r.s_hat),
        ),
        ("minimal delta", format!("{:.6}", r.delta_hat_alpha)),
    ];
    if let Some(measure) = r.null_set_measure {
        rows.push(("null set measure", format!("{measure:.4}")));
    }
    push_rows(&mut out, &rows);
    out
}

pub fn render_enhanced(r: &EnhancedReport) -> String {
    let mut out = format!("enhanced l1 test (alpha_n = {})\n", r.alpha_n);
    push_rows(
        &mut out,
        &[
            ("curves (n)", r.n.to_string()),
            ("grid points (m)", r.m.to_string()),
            ("block length", r.block_length.to_string()),
            ("bootstrap replicates", r.replicates.to_string()),
            ("statistic", format!("{:.6}", r.statistic)),
            ("threshold eta", format!("{:.6}", r.eta)),
            ("enhancement term", format!("{:.6}", r.enhancement_term)),
            (
                "quantile",
                format!("{:.6}  (level {})", r.quantile, r.alpha),
            ),
            ("p value", format!("{:.4}", r.p_value)),
            ("decision", decision(r.reject)),
            (
                "change point",
                format!("index {} (s_hat = {:.4})", r.k_hat, r.s_hat),
            ),
        ],
    );
    out
}

pub fn render_experiment(r: &ExperimentReport) -> String {
    let plan = PlanJson::from(&r.plan);
    let mut out = format!("experiment ({} test)\n", plan.test);
    let mut rows = vec![
        (
            "scenario",
            format!(
                "{} / {}, n = {}, m = {}, kappa = {}, s* = {}",
                plan.scenario.error_kind,
                plan.scenario.mean_kind,
                plan.scenario.n,
                plan.scenario.m,
                plan.scenario.kappa,
                plan.scenario.s_star
            ),
        ),
        ("repetitions", r.plan.reps.to_string()),
        ("bootstrap replicates", r.plan.cfg.replicates.to_string()),
        ("level", r.plan.alpha.to_string()),
        (
            "rejection rate",
            format!("{:.4}  ({}/{})", r.rejection_rate, r.rejections, r.plan.reps),
        ),
        ("mean s_hat", format!("{:.4}", r.mean_s_hat)),
        ("runtime", format!("{:.2}s", r.runtime_seconds)),
    ];
    if let Some(d) = plan.delta {
        rows.insert(1, ("delta", d.to_string()));
    }
    push_rows(&mut out, &rows);
    out
}

/// Full result context for the single-file subcommands.
pub fn detect_report(
    res: &TestResult,
    norm: NormKind,
    n: usize,
    m: usize,
    alpha: f64,
    block_length: usize,
    replicates: usize,
    seed: u64,
    delta_hat_alpha: Option<f64>,
) -> DetectReport {
    DetectReport {
        test: "classical",
        norm: norm_name(norm),
        n,
        m,
        alpha,
        block_length,
        replicates,
        seed,
        statistic: res.statistic,
        quantile: res.quantile,
        p_value: res.p_value,
        reject: res.reject,
        s_hat: res.s_hat,
        k_hat: res.k_hat,
        delta_hat_alpha,
    }
}

pub fn relevant_report(
    res: &RelevantTestResult,
    n: usize,
    m: usize,
    alpha: f64,
    block_length: usize,
    replicates: usize,
    seed: u64,
) -> RelevantReport {
    RelevantReport {
        test: "relevant",
        procedure: procedure_name(res.procedure),
        delta: res.delta,
        n,
        m,
        alpha,
        block_length,
        replicates,
        seed,
        statistic: res.statistic,
        quantile: res.quantile,
        p_value: res.p_value,
        reject: res.reject,
        s_hat: res.s_hat,
        k_hat: res.k_hat,
        delta_hat_alpha: res.delta_hat_alpha,
        null_set_measure: res.null_set.as_ref().map(|s| s.measure),
    }
}
