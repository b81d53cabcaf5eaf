//! Batch front-end: read an orbifold description, run one subcommand and
//! emit a JSON or CSV report.
//!
//! Exit codes: 0 success, 1 mathematical mismatch or validation failure,
//! 2 input error.

// `!(x >= 0.0)` is deliberate: NaN must be rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use g2morse::scalar::{parse_q, Q};
use serde::Serialize;
use serde_json::Value;

use commands::{Outcome, Settings, Table};
use config::{OrbifoldConfig, Resolved};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Math(#[from] g2morse::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Math(_) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "g2morse", version, about = "Spectral Morse-index invariants of flat G2 orbifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Group order, elements and G2 compatibility of each element.
    Check(Options),
    /// Exact mu3 and mu4 with the zeta-regularized cross-check.
    Invariants(Options),
    /// Character formula against brute-force averaging on low eigenvalue classes.
    Spectrum(Options),
    /// Refined-operator identities, Hessian structure and type decomposition.
    Identities(Options),
    /// Regularized Epstein zeta values of the fixed lattices.
    Zeta(Options),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Check,
    Invariants,
    Spectrum,
    Identities,
    Zeta,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Args, Clone, Debug)]
pub struct Options {
    /// Orbifold description (JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// Eigenvalue bound for `spectrum`, as "p/q".
    #[arg(long, value_parser = parse_rational)]
    pub radius_sq: Option<Q>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Residual tolerance (default 1e-9 for identities, 1e-6 otherwise).
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long, value_enum, default_value_t)]
    pub output: OutputFormat,
    /// Also check that every refined operator enforces its input type.
    #[arg(long)]
    pub strict_types: bool,
}

fn parse_rational(s: &str) -> Result<Q, String> {
    parse_q(s).ok_or_else(|| format!("invalid rational `{s}`"))
}

impl Command {
    pub fn split(&self) -> (CommandKind, &Options) {
        match self {
            Command::Check(o) => (CommandKind::Check, o),
            Command::Invariants(o) => (CommandKind::Invariants, o),
            Command::Spectrum(o) => (CommandKind::Spectrum, o),
            Command::Identities(o) => (CommandKind::Identities, o),
            Command::Zeta(o) => (CommandKind::Zeta, o),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub tool_version: &'static str,
    pub command: CommandKind,
    pub config: OrbifoldConfig,
    pub parameters: Settings,
    pub passed: bool,
    pub results: Value,
    #[serde(skip)]
    pub table: Table,
    pub wall_time_s: f64,
}

impl Report {
    pub fn exit_code(&self) -> u8 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.table.header).expect("in-memory write");
        for row in &self.table.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json() + "\n",
            OutputFormat::Csv => self.to_csv(),
        }
    }
}

pub fn settings(cfg: &Resolved, opts: &Options) -> Settings {
    Settings {
        radius_sq: opts.radius_sq.clone().unwrap_or_else(|| cfg.oracle_radius_sq.clone()),
        trials: opts.trials.unwrap_or(cfg.trials),
        seed: opts.seed.unwrap_or(cfg.seed),
        tolerance: opts.tolerance,
        strict_types: opts.strict_types,
    }
}

pub fn load_config(path: &std::path::Path) -> Result<OrbifoldConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    OrbifoldConfig::from_json(&text)
}

/// Run one command on a parsed config.
pub fn run_command(kind: CommandKind, config: &OrbifoldConfig, settings: Settings) -> Result<Report, CliError> {
    if settings.tolerance.is_some_and(|t| !(t >= 0.0)) {
        return Err(CliError::Input("tolerance must be a nonnegative number".into()));
    }
    let start = Instant::now();
    let cfg = config.resolve()?;
    let Outcome { passed, results, table } = match kind {
        CommandKind::Check => commands::check(&cfg),
        CommandKind::Invariants => commands::invariants(&cfg, &settings),
        CommandKind::Spectrum => commands::spectrum(&cfg, &settings),
        CommandKind::Identities => commands::identities(&cfg, &settings),
        CommandKind::Zeta => commands::zeta(&cfg, &settings),
    }?;
    Ok(Report {
        tool_version: env!("CARGO_PKG_VERSION"),
        command: kind,
        config: cfg.echo,
        parameters: settings,
        passed,
        results,
        table,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Full pipeline behind the binary: load, resolve, run.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let (kind, opts) = cli.command.split();
    let config = load_config(&opts.config)?;
    let cfg = config.resolve()?;
    run_command(kind, &config, settings(&cfg, opts))
}
