//! `heightlab`: heights, Mahler measures and equidistribution experiments
//! from the command line. Every command prints one JSON envelope on stdout;
//! experiment tables can be projected to CSV instead.
//!
//! Exit codes: 0 success, 2 input error, 3 numerical failure.

mod commands;
mod envelope;
mod error;
mod experiment;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "heightlab", version, about = "Arithmetic heights as generalized Mahler measures")]
struct Cli {
    /// Cap on worker threads; all cores when absent.
    #[arg(long, global = true, env = "HEIGHTLAB_THREADS")]
    threads: Option<usize>,

    /// Indent JSON output.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Logarithmic Mahler measure: roots for univariate input, torus
    /// quadrature otherwise.
    Mahler {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        /// Variable order, comma separated (default: order of appearance).
        #[arg(long, value_delimiter = ',')]
        vars: Option<Vec<String>>,
        /// Quadrature nodes per axis; also cross-checks univariate input.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Weil height of the roots of a polynomial, split by place.
    Height {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        var: Option<String>,
    },
    /// Canonical height for z^2 + c of the roots of a polynomial.
    CanonicalHeight {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        /// The constant c, an integer or fraction such as -3/4.
        #[arg(short, long, allow_hyphen_values = true)]
        c: String,
        #[arg(long)]
        var: Option<String>,
        /// Truncation error target for archimedean escape rates.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Iterations before an orbit is declared bounded.
        #[arg(long, default_value_t = 10_000)]
        max_iterations: usize,
    },
    /// p-adic Newton polygon and root valuations.
    NewtonPolygon {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(short)]
        p: u64,
        #[arg(long)]
        var: Option<String>,
    },
    /// Exact p-adic integral of log||T - a||^-1 over the roots of a polynomial.
    LocalIntegral {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        /// The point a (integer or fraction).
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(short)]
        p: u64,
        #[arg(long)]
        var: Option<String>,
    },
    /// Empirical versus equilibrium integrals along a family of orbits.
    Experiment {
        name: ExperimentName,
        /// Family template in one variable and n, e.g. "T^n-2".
        #[arg(long, allow_hyphen_values = true)]
        family: Option<String>,
        /// Divisor polynomial G.
        #[arg(long, allow_hyphen_values = true)]
        divisor: Option<String>,
        #[arg(long, default_value_t = 1)]
        n_min: u64,
        #[arg(long, default_value_t = 50)]
        n_max: u64,
        /// Places, comma separated: "inf" and/or primes.
        #[arg(long)]
        places: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Cap the Green function at B (integrable test functions).
        #[arg(long)]
        truncate: Option<f64>,
        /// Write to a file instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExperimentName {
    Autissier,
    Equidist,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::input("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Numeric(e.to_string()))?;
    }
    let (out, path) = match cli.command {
        Command::Mahler { poly, vars, grid } => (commands::mahler(&poly, vars, grid)?, None),
        Command::Height { poly, var } => (commands::height(&poly, var)?, None),
        Command::CanonicalHeight { poly, c, var, tol, max_iterations } => {
            (commands::canonical_height(&poly, &c, var, tol, max_iterations)?, None)
        }
        Command::NewtonPolygon { poly, p, var } => (commands::newton_polygon(&poly, p, var)?, None),
        Command::LocalIntegral { poly, at, p, var } => (commands::local_integral(&poly, &at, p, var)?, None),
        Command::Experiment { name, family, divisor, n_min, n_max, places, format, truncate, output } => {
            let args = experiment::Args {
                autissier: name == ExperimentName::Autissier,
                family,
                divisor,
                n_min,
                n_max,
                places,
                truncate,
            };
            let run = experiment::run(args)?;
            match format {
                Format::Csv => {
                    write_out(&experiment::to_csv(&run.report)?, output.as_deref())?;
                    return Ok(());
                }
                Format::Json => (run.envelope, output),
            }
        }
    };
    let text = if cli.pretty { serde_json::to_string_pretty(&out) } else { serde_json::to_string(&out) }
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    write_out(&(text + "\n"), path.as_deref())
}

fn write_out(text: &str, path: Option<&std::path::Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
