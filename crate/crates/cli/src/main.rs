mod commands;
mod input;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use jordanscope::ranklab::DEFAULT_REL_TOL;
use jordanscope::tracker::DEFAULT_PROBE_RADIUS;

/// Exit 1: the run completed but a check failed. Exit 2: bad input.
#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Input(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Input(_) => 2,
        }
    }
}

impl From<jordanscope::Error> for Failure {
    fn from(e: jordanscope::Error) -> Self {
        use jordanscope::Error as E;
        match e {
            E::Syntax { .. }
            | E::UnknownIdentifier { .. }
            | E::NonIntegerExponent { .. }
            | E::NotSquare { .. }
            | E::NotMonic(_)
            | E::DegreeZero
            | E::NonFinite
            | E::SizeLimit(_)
            | E::Invalid(_) => Failure::Input(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "jordanscope", version, about = "Eigenvalue splitting and Jordan stability of polynomial matrix families")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Relative rank tolerance (default: $JORDANSCOPE_TOL, else 1e-8).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Record wall-clock time in the manifest (makes output non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Jordan census of A at one point.
    Census {
        /// Family JSON file, or builtin:NAME.
        family: String,
        /// Comma-separated coordinates, e.g. 0.3,-0.7 or 1+2*i.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Defining polynomials of the splitting set.
    SplitSet {
        family: String,
        /// Random points for the bound checks.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Defining polynomials of the complement of the Jordan-stable set.
    JstSet {
        family: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Classify every node of a parameter grid.
    Scan {
        family: String,
        /// lo:hi per parameter, comma-separated, e.g. -1:1,-1:1.
        #[arg(long = "box", allow_hyphen_values = true)]
        bbox: String,
        /// Nodes per axis: one value for all axes or one per axis.
        #[arg(long)]
        res: String,
        #[arg(long, default_value_t = DEFAULT_PROBE_RADIUS)]
        probe_radius: f64,
        /// Worker threads (0: all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Also write the grid as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Follow the eigenvalue branches along a polygonal path.
    Track {
        family: String,
        /// Vertices separated by ';', coordinates by ','.
        #[arg(long, allow_hyphen_values = true)]
        path: String,
        /// Output samples per segment.
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Branch values as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Identity, zero-set and bound checks; nonzero exit on failure.
    Verify {
        family: Option<String>,
        /// Run on every shipped family.
        #[arg(long)]
        builtin_corpus: bool,
        /// With --census: point at which to check a census.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// Census JSON to check against A(point).
        #[arg(long)]
        census: Option<PathBuf>,
        /// Treat literal bound violations as failures.
        #[arg(long)]
        strict_bounds: bool,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

pub fn rel_tol(cli: &Cli) -> Result<f64, Failure> {
    let tol = match (cli.tol, std::env::var("JORDANSCOPE_TOL")) {
        (Some(t), _) => t,
        (None, Ok(s)) => s
            .trim()
            .parse::<f64>()
            .map_err(|e| Failure::Input(format!("JORDANSCOPE_TOL='{s}': {e}")))?,
        (None, Err(_)) => DEFAULT_REL_TOL,
    };
    if !(tol.is_finite() && tol > 0.0 && tol < 1.0) {
        return Err(Failure::Input(format!("tolerance must lie in (0, 1), got {tol}")));
    }
    Ok(tol)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Validation(m) => eprintln!("jordanscope: validation failed: {m}"),
                Failure::Input(m) => eprintln!("jordanscope: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
