// SPDX-License-Identifier: Apache-2.0

//! `infoquant`: log returns, ground states, information diagnostics, fits
//! and model comparison from the command line.
//!
//! Exit status: 0 success, 1 usage error, 2 data error, 3 numerical failure.
//! Failures print a one-line JSON object to standard error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use infoquant::fitting::ModelFamily;
use infoquant::models::BracketSource;
use infoquant::{Error, ErrorCategory};

#[derive(Debug, Parser)]
#[command(
    name = "infoquant",
    version,
    about = "Fisher-information return densities: solve, diagnose, fit, compare"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Log returns from a price column.
    Returns(ReturnsArgs),
    /// Ground state of a potential; writes `x,psi,p` plus a JSON sidecar.
    Solve(SolveArgs),
    /// Fisher information, variance and Cramér–Rao product of a density CSV.
    Info(InfoArgs),
    /// Maximum-likelihood fit of one model family.
    Fit(FitArgs),
    /// Fit several families and rank them by AIC.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
struct ReturnsArgs {
    /// Prices CSV with a header row, oldest first.
    #[arg(long)]
    prices: PathBuf,
    /// Price column, by header name or zero-based index.
    #[arg(long, default_value = "close")]
    column: String,
    /// Output `.csv`.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Potential JSON file, or the JSON text itself, e.g.
    /// `{"type":"oscillator","omega":1,"eps1":0,"eps2":0}`.
    #[arg(long)]
    potential: String,
    /// Grid override `x_min,x_max,n_points`.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Output `.csv`; the sidecar goes next to it with a `.json` extension.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct InfoArgs {
    /// Density CSV with `x` and `p` (or `value`) columns on a uniform grid.
    #[arg(long)]
    density: PathBuf,
    /// Output `.json`.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct FitArgs {
    /// gaussian, anharmonic, laplace or square_well.
    #[arg(long)]
    model: ModelFamily,
    /// Returns CSV with a `log_return` column.
    #[arg(long)]
    input: PathBuf,
    /// Output `.json`.
    #[arg(short, long)]
    output: PathBuf,
    /// Bracket coefficients for the anharmonic family.
    #[arg(long, default_value = "oracle")]
    source: BracketSource,
    /// Seed recorded in the report.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// Returns CSV with a `log_return` column.
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated families.
    #[arg(long, default_value = "gaussian,laplace,anharmonic,square_well")]
    models: String,
    /// Output `.json`.
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, default_value = "oracle")]
    source: BracketSource,
    /// Seed recorded in every report.
    #[arg(long)]
    seed: Option<u64>,
}

/// Anything that ends a run early.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Core(e) => match e.category() {
                ErrorCategory::Data => 2,
                ErrorCategory::Numerical => 3,
            },
        }
    }

    fn to_json(&self) -> serde_json::Value {
        let (kind, category, message) = match self {
            Failure::Usage(m) => ("Usage", "usage", m.clone()),
            Failure::Core(e) => (
                e.kind(),
                match e.category() {
                    ErrorCategory::Data => "data",
                    ErrorCategory::Numerical => "numerical",
                },
                e.to_string(),
            ),
        };
        serde_json::json!({
            "error": kind,
            "category": category,
            "message": message,
            "exit_code": self.exit_code(),
        })
    }
}

fn report(f: &Failure) -> ExitCode {
    eprintln!("{}", f.to_json());
    ExitCode::from(f.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let text = e.render().to_string();
            let first = text
                .lines()
                .next()
                .unwrap_or("usage error")
                .trim_start_matches("error: ");
            return report(&Failure::Usage(first.to_string()));
        }
    };
    let outcome = match cli.command {
        Command::Returns(a) => commands::returns(&a.prices, &a.column, &a.output),
        Command::Solve(a) => commands::solve(&a.potential, a.grid.as_deref(), &a.output),
        Command::Info(a) => commands::info(&a.density, &a.output),
        Command::Fit(a) => commands::fit(a.model, &a.input, &a.output, a.source, a.seed),
        Command::Compare(a) => commands::compare(&a.input, &a.models, &a.output, a.source, a.seed),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => report(&f),
    }
}
