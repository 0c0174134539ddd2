use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use funcpd_cli::{config, harness, ingest, report};
use funcpd_core::classical::{classical_test, select_block_length};
use funcpd_core::enhance::{enhanced_test, enhancement_term, eta_threshold, EnhancementConfig};
use funcpd_core::relevant::{minimal_delta, relevant_test};
use funcpd_core::{BootstrapConfig, NormKind, Procedure};
use std::fs;
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "funcpd",
    version,
    about = "Change point detection in the mean of functional time series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    L1,
    L2,
    Sup,
}

impl From<NormArg> for NormKind {
    fn from(norm: NormArg) -> Self {
        match norm {
            NormArg::L1 => NormKind::L1,
            NormArg::L2 => NormKind::L2,
            NormArg::Sup => NormKind::Sup,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProcedureArg {
    P1,
    P2,
    P3,
}

impl From<ProcedureArg> for Procedure {
    fn from(p: ProcedureArg) -> Self {
        match p {
            ProcedureArg::P1 => Procedure::P1,
            ProcedureArg::P2 => Procedure::P2,
            ProcedureArg::P3 => Procedure::P3,
        }
    }
}

#[derive(Args)]
struct TestFlags {
    /// Norm of the CUSUM process.
    #[arg(long, value_enum, default_value_t = NormArg::L1)]
    norm: NormArg,
    /// Nominal level of the test.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Override the data-driven block length.
    #[arg(long)]
    block_length: Option<usize>,
    /// Bootstrap replicates.
    #[arg(long, default_value_t = 200)]
    replicates: usize,
    /// Root RNG seed for the bootstrap multipliers.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit the canonical JSON report instead of text.
    #[arg(long)]
    json: bool,
}

impl TestFlags {
    fn bootstrap_config(&self) -> BootstrapConfig {
        BootstrapConfig {
            block_length: self.block_length,
            replicates: self.replicates,
            seed: self.seed,
            norm: self.norm.into(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Test H0: no change in the mean curve.
    Detect {
        /// CSV file of curves, one per row.
        file: PathBuf,
        #[command(flatten)]
        flags: TestFlags,
        /// Also report the minimal relevance threshold delta_hat (always
        /// computed under the L1 norm).
        #[arg(long)]
        delta_scan: bool,
        /// Write a tidy CSV of the CUSUM norm trajectories to this path.
        #[arg(long)]
        cusum_out: Option<PathBuf>,
    },
    /// Test H0: the L1 distance between the mean curves is at most delta.
    Relevant {
        file: PathBuf,
        /// Relevance threshold (nonnegative).
        #[arg(long)]
        delta: f64,
        /// Bootstrap calibration.
        #[arg(long, value_enum, default_value_t = ProcedureArg::P3)]
        procedure: ProcedureArg,
        #[command(flatten)]
        flags: TestFlags,
    },
    /// L1 test with the thresholded sup-norm power enhancement.
    Enhanced {
        file: PathBuf,
        /// Tolerated size distortion of the enhancement threshold.
        #[arg(long, default_value_t = 0.01)]
        alpha_n: f64,
        /// Replicates for the threshold quantile.
        #[arg(long, default_value_t = 1000)]
        b_eta: usize,
        #[command(flatten)]
        flags: TestFlags,
    },
    /// Run a Monte Carlo experiment described by a plan file.
    Simulate {
        /// key = value plan config.
        #[arg(long)]
        plan: PathBuf,
        /// Run 1000 repetitions regardless of the plan's reps setting.
        #[arg(long)]
        paper_scale: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print the data-driven block length for a file of curves.
    Bandwidth {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Generate a synthetic sample and write it as ingestible CSV.
    ExportScenario {
        /// key = value scenario config.
        #[arg(long)]
        spec: PathBuf,
        /// Output path; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn require_l1(norm: NormArg, what: &str) -> Result<()> {
    if !matches!(norm, NormArg::L1) {
        bail!("{what} is defined under the L1 norm only; drop --norm or pass --norm l1");
    }
    Ok(())
}

fn emit(json: bool, json_doc: String, text: String) {
    if json {
        print!("{json_doc}");
    } else {
        print!("{text}");
    }
}

fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Detect { file, flags, delta_scan, cusum_out } => {
            let sample = ingest::ingest_curves(&file)?;
            let cfg = flags.bootstrap_config();
            let l = cfg.block_length.unwrap_or_else(|| select_block_length(&sample));
            let res = classical_test(&sample, flags.alpha, &cfg)?;
            let delta_hat = if delta_scan {
                Some(minimal_delta(&sample, flags.alpha, Procedure::P3, &cfg)?)
            } else {
                None
            };
            if let Some(path) = cusum_out {
                let mut out = fs::File::create(&path)
                    .with_context(|| format!("creating {}", path.display()))?;
                ingest::write_cusum_norms(&sample, &mut out)?;
            }
            let rep = report::detect_report(
                &res,
                cfg.norm,
                sample.n(),
                sample.m(),
                flags.alpha,
                l,
                cfg.replicates,
                cfg.seed,
                delta_hat,
            );
            emit(flags.json, report::to_json(&rep), report::render_detect(&rep));
        }
        Command::Relevant { file, delta, procedure, flags } => {
            require_l1(flags.norm, "the relevant test")?;
            let sample = ingest::ingest_curves(&file)?;
            let cfg = flags.bootstrap_config();
            let l = cfg.block_length.unwrap_or_else(|| select_block_length(&sample));
            let res = relevant_test(&sample, delta, procedure.into(), flags.alpha, &cfg)?;
            let rep = report::relevant_report(
                &res,
                sample.n(),
                sample.m(),
                flags.alpha,
                l,
                cfg.replicates,
                cfg.seed,
            );
            emit(flags.json, report::to_json(&rep), report::render_relevant(&rep));
        }
        Command::Enhanced { file, alpha_n, b_eta, flags } => {
            require_l1(flags.norm, "the enhanced test")?;
            let sample = ingest::ingest_curves(&file)?;
            let cfg = flags.bootstrap_config();
            let l = cfg.block_length.unwrap_or_else(|| select_block_length(&sample));
            let e_cfg = EnhancementConfig { alpha_n, b_eta };
            let res = enhanced_test(&sample, flags.alpha, &cfg, &e_cfg)?;
            let eta = eta_threshold(&sample, res.k_hat, &cfg, &e_cfg)?;
            let rep = report::EnhancedReport {
                test: "enhanced",
                alpha_n,
                n: sample.n(),
                m: sample.m(),
                alpha: flags.alpha,
                block_length: l,
                replicates: cfg.replicates,
                seed: cfg.seed,
                statistic: res.statistic,
                eta,
                enhancement_term: enhancement_term(&sample, res.s_hat, eta),
                quantile: res.quantile,
                p_value: res.p_value,
                reject: res.reject,
                s_hat: res.s_hat,
                k_hat: res.k_hat,
            };
            emit(flags.json, report::to_json(&rep), report::render_enhanced(&rep));
        }
        Command::Simulate { plan, paper_scale, json } => {
            let text = fs::read_to_string(&plan)
                .with_context(|| format!("reading {}", plan.display()))?;
            let mut plan = config::parse_plan(&text)?;
            if paper_scale {
                plan.reps = 1000;
            }
            let result = harness::run_experiment(&plan)?;
            emit(
                json,
                report::to_json(&report::ExperimentJson::from(&result)),
                report::render_experiment(&result),
            );
        }
        Command::Bandwidth { file, json } => {
            let sample = ingest::ingest_curves(&file)?;
            let rep = report::BandwidthReport {
                n: sample.n(),
                m: sample.m(),
                block_length: select_block_length(&sample),
            };
            emit(
                json,
                report::to_json(&rep),
                format!("block length {} (n = {}, m = {})\n", rep.block_length, rep.n, rep.m),
            );
        }
        Command::ExportScenario { spec, output } => {
            let text = fs::read_to_string(&spec)
                .with_context(|| format!("reading {}", spec.display()))?;
            let spec = config::parse_scenario(&text)?;
            let sample = funcpd_core::scenarios::assemble(&spec)?;
            match output {
                Some(path) => {
                    let mut out = fs::File::create(&path)
                        .with_context(|| format!("creating {}", path.display()))?;
                    ingest::write_curves(&sample, &mut out)?;
                }
                None => {
                    let stdout = std::io::stdout();
                    ingest::write_curves(&sample, &mut stdout.lock())?;
                }
            }
        }
    }
    Ok(())
}

fn main() {
    if let Err(err) = run() {
        let mut stderr = std::io::stderr().lock();
        let _ = writeln!(stderr, "error: {err:#}");
        std::process::exit(1);
    }
}
