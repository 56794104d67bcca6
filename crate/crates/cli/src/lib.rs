//! Command implementations behind the `fuzzsel` binary.
//!
//! Exit codes: 0 success, 1 internal error, 2 usage, configuration or data error.

pub mod commands;
pub mod config;
pub mod model;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{Impute, RunArgs, RunConfig};
pub use model::TrainedModel;

/// Files written under `--out`.
pub mod files {
    pub const RESULT: &str = "result.json";
    pub const BASELINE: &str = "baseline.json";
    pub const MODEL: &str = "model.json";
    pub const TRACE: &str = "trace.csv";
    pub const RULES: &str = "rules.txt";
    pub const REPORT: &str = "report.json";
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Internal(String),
}

impl Failure {
    pub fn usage(e: impl fmt::Display) -> Self {
        Failure::Usage(e.to_string())
    }

    pub fn internal(e: impl fmt::Display) -> Self {
        Failure::Internal(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Internal(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Internal(m) => f.write_str(m),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "fuzzsel", version, about = "Cost-aware GA feature selection for a fuzzy classifier")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Load data, schema and costs; print per-feature statistics and anomalies.
    Validate(RunArgs),
    /// Run GA feature selection and write the result, baseline and model.
    Select(RunArgs),
    /// Classify unlabelled records with a saved model.
    Classify(ClassifyArgs),
    /// Compare a baseline with a selection result; write report and plot data.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// Model file written by `select`.
    #[arg(long)]
    pub model: PathBuf,
    /// CSV of records, either the model's inputs or the full schema width.
    #[arg(long)]
    pub data: PathBuf,
    /// Replace the model's rule base with these rules.
    #[arg(long)]
    pub rules: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Directory holding result.json and baseline.json.
    #[arg(long, default_value = config::DEFAULT_OUT)]
    pub run: PathBuf,
    #[arg(long)]
    pub result: Option<PathBuf>,
    #[arg(long)]
    pub baseline: Option<PathBuf>,
    /// Where report.json and the plot CSVs go (default: the run directory).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate(a) => commands::validate(&RunConfig::resolve(&a)?),
        Command::Select(a) => commands::select(&RunConfig::resolve(&a)?),
        Command::Classify(a) => commands::classify(&a),
        Command::Report(a) => commands::report(&a),
    }
}
