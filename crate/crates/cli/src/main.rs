//! `gcatalan`: exact and analytic computations for graph Catalan numbers.

mod commands;
mod render;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "gcatalan", version, about = "Catalan numbers of finite directed graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Words,
    Dyck,
    Trees,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CountMethod {
    /// Exact convolution recurrence.
    Dp,
    /// Contour formula through the implicit system, rounded.
    Contour,
    /// Plain Cauchy integral of the generating function, rounded.
    Cauchy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RadiusMethodArg {
    Newton,
    Continuation,
    Ratio,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate a graph, and print its matrices.
    Validate {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Catalan numbers c_n for n = 0..=N, per vertex (or edge) and in total.
    Count {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        n: usize,
        /// Restrict to one vertex (1-based).
        #[arg(long, conflicts_with = "edge")]
        vertex: Option<usize>,
        /// Restrict to one edge, by 1-based position or by label.
        #[arg(long)]
        edge: Option<String>,
        #[arg(long, value_enum, default_value_t = CountMethod::Dp)]
        method: CountMethod,
        /// Contour radius; defaults to half the ratio estimate.
        #[arg(long)]
        rho: Option<f64>,
        /// Contour sample points; defaults to 64 (n + 1).
        #[arg(long)]
        samples: Option<usize>,
    },
    /// List Catalan words, labeled Dyck paths or rooted trees of half-length N.
    Enumerate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        vertex: Option<usize>,
        /// Maximum number of objects; lifts the default limit on n.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Generating-function coefficients as exact rationals, with the residual check.
    Series {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        order: usize,
    },
    /// Radius of convergence of the generating functions.
    Radius {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = RadiusMethodArg::Newton)]
        method: RadiusMethodArg,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Table depth for the ratio method.
        #[arg(long, default_value_t = 200)]
        order: usize,
    },
    /// Perron-Frobenius data and the weighted counts for n = 0..=N.
    Kms {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Vacuum moments of T + T* for n = 1..=N.
    Fock {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        n: usize,
        /// Maximum number of basis words.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Compare the recurrence with every oracle on fixtures and random graphs.
    Selftest {
        /// Check only this graph instead of the bundled fixtures.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Number of seeded random graphs added to the bundled fixtures.
        #[arg(long, default_value_t = 5)]
        random: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
}

/// A failure with its diagnostic code.
#[derive(Debug)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
}

impl CliError {
    pub fn args(message: impl Into<String>) -> Self {
        CliError { code: "E-ARGS", message: message.into() }
    }
}

impl From<gcatalan_core::Error> for CliError {
    fn from(e: gcatalan_core::Error) -> Self {
        CliError { code: e.code(), message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let message: Vec<&str> = text
                .lines()
                .take_while(|l| !l.starts_with("Usage:"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect();
            eprintln!("error[E-ARGS]: {}", message.join(" ").trim_start_matches("error: "));
            return ExitCode::FAILURE;
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error[{}]: {}", e.code, e.message);
            ExitCode::FAILURE
        }
    }
}
