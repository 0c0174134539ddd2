//! CSV ingestion and export of curve samples.
//!
//! Format: one curve per row, comma separated, '.' decimal, UTF-8. An
//! optional first line holds the grid points; it is recognised when the
//! values increase strictly from 0 to 1. Without a header the curves are
//! placed on the uniform grid over `[0,1]`.

use anyhow::{anyhow, bail, Context, Result};
use funcpd_core::{FunctionalSample, Grid};
use std::fs;
use std::io::Write;
use std::path::Path;

pub fn ingest_curves(path: &Path) -> Result<FunctionalSample> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_curves(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn parse_curves(text: &str) -> Result<FunctionalSample> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut grid_points: Option<Vec<f64>> = None;
    let mut width: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let mut values = Vec::new();
        for cell in line.split(',') {
            let cell = cell.trim();
            let v: f64 = cell
                .parse()
                .map_err(|_| anyhow!("line {lineno}: non-numeric cell '{cell}'"))?;
            values.push(v);
        }
        if let Some(w) = width {
            if values.len() != w {
                bail!("line {lineno}: expected {w} values, found {}", values.len());
            }
        } else {
            width = Some(values.len());
        }
        if rows.is_empty() && grid_points.is_none() && looks_like_grid(&values) {
            grid_points = Some(values);
            continue;
        }
        rows.push(values);
    }
    if rows.len() < 2 {
        bail!("need at least 2 curves");
    }
    let m = rows[0].len();
    let grid = match grid_points {
        Some(points) => Grid::with_trapezoid_weights(points)?,
        None => Grid::uniform(m)?,
    };
    Ok(FunctionalSample::from_rows(&rows, grid)?)
}

fn looks_like_grid(values: &[f64]) -> bool {
    values.len() >= 2
        && values[0] == 0.0
        && *values.last().unwrap() == 1.0
        && values.windows(2).all(|w| w[0] < w[1])
}

/// Write a sample in the ingestible format: grid header plus one row per
/// curve, shortest round-trip decimal representation.
pub fn write_curves(sample: &FunctionalSample, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "{}", join(sample.grid().points()))?;
    for row in sample.rows() {
        writeln!(out, "{}", join(row))?;
    }
    Ok(())
}

/// Tidy CSV of the CUSUM norm trajectories for external plotting.
pub fn write_cusum_norms(sample: &FunctionalSample, out: &mut dyn Write) -> Result<()> {
    use funcpd_core::{CusumProcess, NormKind};
    let u = CusumProcess::from_sample(sample);
    let n = sample.n();
    writeln!(out, "k,s,l1,l2,sup")?;
    for k in 0..=n {
        let s = k as f64 / n as f64;
        writeln!(
            out,
            "{k},{s},{},{},{}",
            u.row_norm(k, NormKind::L1),
            u.row_norm(k, NormKind::L2),
            u.row_norm(k, NormKind::Sup)
        )?;
    }
    Ok(())
}

fn join(values: &[f64]) -> String {
    let cells: Vec<String> = values.iter().map(|v| format!("{v}")).collect();
    cells.join(",")
}
