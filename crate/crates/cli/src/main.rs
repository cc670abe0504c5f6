//! `dyadic-bellman`: evaluate, construct, verify and sweep the Bellman
//! function of the dyadic maximal operator.
//!
//! Exit codes: 0 on success, 1 on usage errors (including infeasible
//! parameters), 2 when a consistency or verification check fails.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "dyadic-bellman", version, about)]
struct Cli {
    /// Emit a JSON record instead of the human-readable table.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV instead of the human-readable table.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form value with a grid cross-check.
    Value(ParamArgs),
    /// Coefficients of the extremal function, optionally tabulated.
    Extremal {
        #[command(flatten)]
        params: ParamArgs,
        /// Number of logarithmically spaced sample points in (0, 1].
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Quadrature, random probing and dyadic-model checks.
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        /// Random admissible step functions to draw; 0 runs quadrature only.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Cells per step function.
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Relative tolerance for the quadrature and probe checks.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Write `trial,value` pairs to this CSV file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate on an evenly spaced grid of one parameter.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, Args)]
struct ParamArgs {
    /// Exponent p > 1.
    #[arg(long)]
    p: f64,
    /// First moment, f > 0.
    #[arg(long)]
    f: f64,
    /// p-th moment, F ≥ f^p.
    #[arg(long = "F")]
    big_f: f64,
    /// Measure of the integration set, 0 < k ≤ 1.
    #[arg(long)]
    k: f64,
}

#[derive(Debug, Clone, Args)]
struct SweepArgs {
    /// Parameter to vary: p, f, F or k.
    #[arg(long)]
    param: String,
    #[arg(long)]
    start: f64,
    #[arg(long)]
    stop: f64,
    #[arg(long, default_value_t = 10)]
    steps: usize,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    f: Option<f64>,
    #[arg(long = "F")]
    big_f: Option<f64>,
    #[arg(long)]
    k: Option<f64>,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Human,
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let format = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Human
    };
    match commands::run(cli.command, format) {
        Ok(status) => status.into(),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
