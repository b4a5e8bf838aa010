//! Experiment driver behind the `magnus-tls` binary.

pub mod config;
pub mod emit;
pub mod report;

use std::path::PathBuf;

use clap::Parser;
use thiserror::Error;

pub use config::{DetuningScale, ExperimentConfig};
pub use emit::{emit_csv, emit_plot_data};
pub use report::{run_comparison, Comparison, ComparisonReport, FinalState, ReportRow, SweepPoint};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error in '{field}': {message}")]
    Config { field: String, message: String },

    #[error(transparent)]
    Runtime(#[from] crate::Error),

    #[error("I/O error at {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 1,
            CliError::Runtime(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

/// Compare truncated Magnus propagators against a numerical reference for a
/// pulsed two-level system.
#[derive(Debug, Clone, Default, Parser)]
#[command(name = "magnus-tls", version)]
pub struct Args {
    /// Config file of `key = value` lines.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Run a single detuning instead of the configured list.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,

    /// Run a single Magnus order (1, 2 or 3).
    #[arg(long)]
    pub order: Option<String>,

    /// Output directory (overrides `out.dir`).
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Suppress the summary table on stdout.
    #[arg(long)]
    pub quiet: bool,
}

/// Loads the config file (if any) and applies command-line overrides.
pub fn resolve_config(args: &Args) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
            ExperimentConfig::parse(&text)?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(delta) = &args.delta {
        let value = config::parse_number(delta).ok_or_else(|| CliError::Config {
            field: "--delta".into(),
            message: format!("cannot parse number '{delta}'"),
        })?;
        cfg.detunings = vec![value];
    }
    if let Some(order) = &args.order {
        let order = config::parse_order(order).ok_or_else(|| CliError::Config {
            field: "--order".into(),
            message: format!("expected 1, 2 or 3, got '{order}'"),
        })?;
        cfg.orders = vec![order];
    }
    if let Some(out) = &args.out {
        cfg.out_dir = out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Writes whatever the config's emit flags request; returns the files written.
pub fn emit_outputs(comparison: &Comparison, cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, CliError> {
    let mut written = emit_csv(comparison, &cfg.out_dir, cfg.emit_trajectories, cfg.emit_summary)?;
    if cfg.emit_plots {
        written.extend(emit_plot_data(comparison, &cfg.out_dir)?);
    }
    Ok(written)
}

pub fn format_summary(report: &ComparisonReport) -> String {
    let mut out = format!(
        "pulse: {} peak={:.6} area={:.6}\n{:>14} {:>5} {:>12} {:>10} {:>10}\n",
        report.pulse.shape(),
        report.pulse.peak(),
        report.pulse.area(),
        "delta",
        "order",
        "max_err",
        "rho00",
        "rho11"
    );
    for row in &report.rows {
        out.push_str(&format!(
            "{:>14.6e} {:>5} {:>12.4e} {:>10.6} {:>10.6}\n",
            row.delta, row.order.as_u32(), row.max_err, row.magnus_final.rho00, row.magnus_final.rho11
        ));
    }
    out
}

pub fn run(args: &Args) -> Result<Comparison, CliError> {
    let cfg = resolve_config(args)?;
    let comparison = run_comparison(&cfg)?;
    emit_outputs(&comparison, &cfg)?;
    if !args.quiet {
        print!("{}", format_summary(&comparison.report));
    }
    Ok(comparison)
}
