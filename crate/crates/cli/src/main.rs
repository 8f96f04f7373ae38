//! `loewner-lab`: trace minimizer curves, run the verification suite and emit
//! energy-comparison sweeps as CSV, JSON and SVG files.

mod commands;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

/// Numerical Loewner evolution and Loewner-energy minimizers.
#[derive(Debug, Parser)]
#[command(name = "loewner-lab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Curve families available to `trace`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Minimizer from 0 through `e^{iθ}` (`--theta`).
    Wang,
    /// Minimizer welding `x0` to `y0` (`--x0 --y0`).
    Emw,
    /// Limit curve from 0 to 1 of the point-constrained family.
    Gamma0,
    /// Universal welding-family curve; truncated at welding ratio `--ratio` if given.
    Universal,
    /// Orthogonal circular arc; up to tip angle `--theta` or welding ratio `--alpha`.
    Arc,
    /// Straight slit driven by `c√t` (`--c`, or angle fraction `--alpha`).
    Sqrt,
}

/// Output file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Comma-separated values.
    Csv,
    /// JSON summary.
    Json,
    /// SVG plot.
    Svg,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Trace a curve and write its samples and plot.
    Trace(TraceArgs),
    /// Run the acceptance checks; exits with status 1 if any check fails.
    Verify(VerifyArgs),
    /// Emit energy-ratio sweeps and the same-welding comparison.
    Compare(CompareArgs),
}

/// Arguments of `trace`.
#[derive(Debug, clap::Args)]
pub struct TraceArgs {
    /// Curve family.
    #[arg(long, value_enum)]
    pub family: Family,
    /// Target angle θ in radians.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Left welded point (negative).
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    /// Right welded point (positive).
    #[arg(long)]
    pub y0: Option<f64>,
    /// Welding ratio r ∈ (0, 1) for the universal curve.
    #[arg(long)]
    pub ratio: Option<f64>,
    /// Angle fraction (sqrt family) or harmonic-measure ratio (arc family).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Square-root driver coefficient.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Number of zipper steps.
    #[arg(long, default_value_t = 20_000)]
    pub steps: usize,
    /// Number of emitted curve samples.
    #[arg(long, default_value_t = 400)]
    pub samples: usize,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Output formats (comma separated).
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Format::Csv, Format::Svg])]
    pub format: Vec<Format>,
}

/// Arguments of `verify`.
#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    /// Only run criteria whose key (e.g. `05_sle_identifications`) contains this text.
    #[arg(long)]
    pub only: Option<String>,
    /// Multiplier applied to every pinned tolerance.
    #[arg(long, default_value_t = 1.0)]
    pub tol: f64,
    /// Directory for `verify.json`; the report is printed to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Arguments of `compare`.
#[derive(Debug, clap::Args)]
pub struct CompareArgs {
    /// δ grid for the local ratio sweeps (comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = loewner_lab::compare::default_deltas())]
    pub deltas: Vec<f64>,
    /// Angle for the same-welding comparison.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_3)]
    pub theta: f64,
    /// Number of zipper steps for traced figures.
    #[arg(long, default_value_t = 4000)]
    pub steps: usize,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Output formats (comma separated).
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Format::Csv, Format::Svg])]
    pub format: Vec<Format>,
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("LOEWNER_LAB_THREADS") {
        let n: usize = v.trim().parse().with_context(|| {
            format!("LOEWNER_LAB_THREADS must be a positive integer, got {v:?}")
        })?;
        anyhow::ensure!(n > 0, "LOEWNER_LAB_THREADS must be positive");
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| match cli.command {
        Command::Trace(a) => commands::trace(&a).map(|()| true),
        Command::Verify(a) => commands::verify(&a),
        Command::Compare(a) => commands::compare(&a).map(|()| true),
    });
    match outcome {
        Ok(true) => {}
        Ok(false) => std::process::exit(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}
