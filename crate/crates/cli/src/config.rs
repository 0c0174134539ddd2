//! Plain-text `key = value` configs for scenarios and experiment plans.
//!
//! One assignment per line; blank lines and `#` comments are skipped.
//! Scenario keys: `n`, `m`, `error_kind`, `mean_kind`, `kappa`, `s_star`,
//! `seed`. Plan files accept the scenario keys plus `reps`, `alpha`,
//! `replicates`, `block_length`, `norm`, `test`, `delta`, `procedure`,
//! `alpha_n`, `b_eta`.

use crate::harness::{ExperimentPlan, TestKind};
use anyhow::{anyhow, bail, Result};
use funcpd_core::{
    BootstrapConfig, ErrorKind, MeanKind, NormKind, Procedure, ScenarioSpec,
};
use std::collections::BTreeMap;

fn parse_assignments(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {lineno}: expected 'key = value'"))?;
        let key = key.trim().to_ascii_lowercase();
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            bail!("line {lineno}: duplicate key '{key}'");
        }
    }
    Ok(map)
}

fn parse<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    match map.get(key) {
        None => Ok(None),
        Some(v) => v
            .parse()
            .map(Some)
            .map_err(|_| anyhow!("invalid value '{v}' for key '{key}'")),
    }
}

fn require<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<T> {
    parse(map, key)?.ok_or_else(|| anyhow!("missing required key '{key}'"))
}

pub fn parse_error_kind(s: &str) -> Result<ErrorKind> {
    Ok(match s.to_ascii_lowercase().as_str() {
        "light_iid" => ErrorKind::LightIid,
        "heavy_iid" => ErrorKind::HeavyIid,
        "light_far" => ErrorKind::LightFar,
        "heavy_far" => ErrorKind::HeavyFar,
        other => bail!(
            "unknown error_kind '{other}' (expected light_iid, heavy_iid, light_far, heavy_far)"
        ),
    })
}

pub fn parse_mean_kind(s: &str) -> Result<MeanKind> {
    let s = s.to_ascii_lowercase();
    Ok(match s.as_str() {
        "null" => MeanKind::Null,
        "const" => MeanKind::Const,
        "bump" => MeanKind::Bump,
        "bumps" => MeanKind::Bumps,
        "spike" => MeanKind::Spike,
        _ => {
            let inner = s
                .strip_prefix("phi_c(")
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| {
                    anyhow!(
                        "unknown mean_kind '{s}' (expected null, const, bump, bumps, spike, phi_c(c))"
                    )
                })?;
            let c: f64 =
                inner.trim().parse().map_err(|_| anyhow!("invalid phi_c parameter '{inner}'"))?;
            MeanKind::PhiC(c)
        }
    })
}

pub fn parse_norm(s: &str) -> Result<NormKind> {
    Ok(match s.to_ascii_lowercase().as_str() {
        "l1" => NormKind::L1,
        "l2" => NormKind::L2,
        "sup" => NormKind::Sup,
        other => bail!("unknown norm '{other}' (expected l1, l2, sup)"),
    })
}

pub fn parse_procedure(s: &str) -> Result<Procedure> {
    Ok(match s.to_ascii_lowercase().as_str() {
        "p1" => Procedure::P1,
        "p2" => Procedure::P2,
        "p3" => Procedure::P3,
        other => bail!("unknown procedure '{other}' (expected p1, p2, p3)"),
    })
}

const SCENARIO_KEYS: &[&str] = &["n", "m", "error_kind", "mean_kind", "kappa", "s_star", "seed"];
const PLAN_KEYS: &[&str] = &[
    "reps", "alpha", "replicates", "block_length", "norm", "test", "delta", "procedure",
    "alpha_n", "b_eta",
];

fn scenario_from_map(map: &BTreeMap<String, String>) -> Result<ScenarioSpec> {
    let spec = ScenarioSpec {
        n: require(map, "n")?,
        m: require(map, "m")?,
        error_kind: parse_error_kind(&require::<String>(map, "error_kind")?)?,
        mean_kind: match map.get("mean_kind") {
            Some(v) => parse_mean_kind(v)?,
            None => MeanKind::Null,
        },
        kappa: parse(map, "kappa")?.unwrap_or(0.0),
        s_star: parse(map, "s_star")?.unwrap_or(0.5),
        seed: parse(map, "seed")?.unwrap_or(0),
    };
    spec.validate()?;
    Ok(spec)
}

/// Parse a scenario config; rejects keys outside the scenario set.
pub fn parse_scenario(text: &str) -> Result<ScenarioSpec> {
    let map = parse_assignments(text)?;
    for key in map.keys() {
        if !SCENARIO_KEYS.contains(&key.as_str()) {
            bail!("unknown key '{key}' in scenario config");
        }
    }
    scenario_from_map(&map)
}

/// Parse an experiment plan: a scenario plus test and harness settings.
pub fn parse_plan(text: &str) -> Result<ExperimentPlan> {
    let map = parse_assignments(text)?;
    for key in map.keys() {
        if !SCENARIO_KEYS.contains(&key.as_str()) && !PLAN_KEYS.contains(&key.as_str()) {
            bail!("unknown key '{key}' in plan config");
        }
    }
    let scenario = scenario_from_map(&map)?;
    let norm = match map.get("norm") {
        Some(v) => parse_norm(v)?,
        None => NormKind::L1,
    };
    let test = match map.get("test").map(|s| s.to_ascii_lowercase()) {
        None => TestKind::Classical(norm),
        Some(t) => match t.as_str() {
            "classical" => TestKind::Classical(norm),
            "relevant" => TestKind::Relevant {
                delta: require(&map, "delta")?,
                procedure: match map.get("procedure") {
                    Some(v) => parse_procedure(v)?,
                    None => Procedure::P3,
                },
            },
            "enhanced" => TestKind::Enhanced {
                alpha_n: parse(&map, "alpha_n")?.unwrap_or(0.01),
                b_eta: parse(&map, "b_eta")?.unwrap_or(1000),
            },
            other => bail!("unknown test '{other}' (expected classical, relevant, enhanced)"),
        },
    };
    Ok(ExperimentPlan {
        scenario,
        reps: parse(&map, "reps")?.unwrap_or(500),
        alpha: parse(&map, "alpha")?.unwrap_or(0.05),
        cfg: BootstrapConfig {
            block_length: parse(&map, "block_length")?,
            replicates: parse(&map, "replicates")?.unwrap_or(200),
            seed: scenario.seed,
            norm,
        },
        test,
    })
}
