mod commands;
mod config;
mod exit;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::SystemArgs;

/// Closed-form traveling waves of the generalized (2+1)-D KMN equation, with numerical checks.
#[derive(Debug, Parser)]
#[command(name = "gkmn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Regime, equilibria and admissible families of a system
    Classify(ClassifyArgs),
    /// Sample one closed-form family, or an assembled wave q_1..q_8
    Solve(SolveArgs),
    /// Check families against independent numerical oracles
    Verify(VerifyArgs),
    /// Phase portrait as SVG, CSV and JSON
    Portrait(PortraitArgs),
    /// Evaluate an elliptic integral or Jacobi function
    Elliptic(EllipticArgs),
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PhaseArg {
    Printed,
    Quadrature,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Family tag such as p_b2 or phi_u6, or q_1..q_8
    #[arg(long)]
    family: Option<String>,
    /// Energy level; defaults to the catalog level on the catalog system
    #[arg(long, allow_hyphen_values = true)]
    energy: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    xi_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    xi_max: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Also assemble the complex wave q on the line y = t = 0
    #[arg(long)]
    wave: bool,
    #[arg(long, value_enum)]
    phase: Option<PhaseArg>,
    /// CSV destination; stdout when absent
    #[arg(long)]
    output: Option<PathBuf>,
    /// Metadata destination; defaults to the CSV path with a .json extension, else stderr
    #[arg(long)]
    meta: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long, conflicts_with = "all")]
    family: Option<String>,
    /// Every catalog family, restricted by --mode when given
    #[arg(long)]
    all: bool,
    #[arg(long, allow_hyphen_values = true)]
    energy: Option<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PortraitArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Grid nodes per axis
    #[arg(long)]
    grid: Option<usize>,
    /// Comma-separated energy levels; automatic when absent
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    levels: Option<Vec<f64>>,
    /// u_min,u_max,y_min,y_max
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
    bounds: Option<Vec<f64>>,
    /// Output prefix; writes PREFIX.svg, PREFIX.csv and PREFIX.json
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EllipticFn {
    Sn,
    Cn,
    Dn,
    Am,
    /// Complete integral of the first kind
    K,
    /// Complete integral of the second kind
    E,
    /// Incomplete integral of the first kind
    F,
    /// Incomplete integral of the second kind
    EInc,
    /// Incomplete integral of the third kind
    Pi,
}

#[derive(Debug, Args)]
struct EllipticArgs {
    #[arg(value_enum)]
    function: EllipticFn,
    /// Squared modulus
    #[arg(long, allow_hyphen_values = true)]
    k2: f64,
    /// Argument of the Jacobi functions
    #[arg(long, allow_hyphen_values = true)]
    u: Option<f64>,
    /// Amplitude of the incomplete integrals
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
    /// Characteristic of the third-kind integral
    #[arg(long, allow_hyphen_values = true)]
    n: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify(a) => commands::classify(a),
        Command::Solve(a) => commands::solve(a),
        Command::Verify(a) => commands::verify(a),
        Command::Portrait(a) => commands::portrait(a),
        Command::Elliptic(a) => commands::elliptic(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
