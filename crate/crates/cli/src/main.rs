//! `eil`: elastic-interaction loss between region boundaries on images.
//!
//! Subcommands evaluate the loss, verify its gradient, run level-set
//! evolution, generate synthetic masks, score predictions and benchmark the
//! FFT path against direct summation.

mod commands;
mod error;
mod io;
mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eil_core::{SmoothingKind, SmoothingParams};

use error::CliResult;

#[derive(Parser)]
#[command(
    name = "eil",
    version,
    about = "Elastic-interaction loss between region boundaries: evaluation, \
             gradient checks, level-set evolution, synthetic data, metrics and benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the loss between a ground-truth mask and a prediction map
    Loss(LossArgs),
    /// Compare the analytic gradient against finite differences
    Gradcheck(GradcheckArgs),
    /// Run gradient-flow evolution of a level set toward a ground truth
    Evolve(EvolveArgs),
    /// Generate a synthetic mask image
    Synth(SynthArgs),
    /// Score a prediction map against a ground-truth mask
    Metrics(MetricsArgs),
    /// Time the FFT loss against direct spectral summation
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Smoothing {
    Hardtanh,
    Sine,
}

impl Smoothing {
    fn kind(self) -> SmoothingKind {
        match self {
            Smoothing::Hardtanh => SmoothingKind::HardTanh,
            Smoothing::Sine => SmoothingKind::Sine,
        }
    }

    fn params(self, beta: f64) -> CliResult<SmoothingParams> {
        Ok(SmoothingParams::new(beta, self.kind())?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Oracle {
    Spectral,
    Spatial,
}

#[derive(Args)]
struct LossArgs {
    /// Ground-truth mask image (binarized at intensity >= 128)
    #[arg(long)]
    gt: PathBuf,
    /// Prediction image, intensity/255 read as probability
    #[arg(long)]
    pred: PathBuf,
    /// Prediction-strength weight
    #[arg(long, default_value_t = 0.35)]
    alpha: f64,
    /// Smoothed-Heaviside band half-width
    #[arg(long, default_value_t = 0.25)]
    beta: f64,
    /// Heaviside ramp shape
    #[arg(long, value_enum, default_value_t = Smoothing::Hardtanh)]
    smoothing: Smoothing,
    /// Also evaluate a slow reference implementation
    #[arg(long, value_enum)]
    oracle: Option<Oracle>,
}

#[derive(Args)]
struct GradcheckArgs {
    /// Grid edge length (at most 64)
    #[arg(long, default_value_t = 16)]
    size: usize,
    /// RNG seed for the random instance
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Central-difference step
    #[arg(long, default_value_t = 1e-5)]
    eps: f64,
    #[arg(long, default_value_t = 0.35)]
    alpha: f64,
    #[arg(long, default_value_t = 0.25)]
    beta: f64,
    #[arg(long, value_enum, default_value_t = Smoothing::Hardtanh)]
    smoothing: Smoothing,
}

#[derive(Args)]
struct EvolveArgs {
    /// Ground-truth mask image
    #[arg(long)]
    gt: PathBuf,
    /// Initial prediction image (probability map)
    #[arg(long)]
    init: PathBuf,
    /// Number of descent steps
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    steps: u32,
    /// Step size
    #[arg(long, default_value_t = 2.5e-3)]
    lr: f64,
    #[arg(long, default_value_t = 0.35)]
    alpha: f64,
    #[arg(long, default_value_t = 0.25)]
    beta: f64,
    #[arg(long, value_enum, default_value_t = Smoothing::Hardtanh)]
    smoothing: Smoothing,
    /// Output directory for loss.csv, snapshots and the final mask
    #[arg(long)]
    out: PathBuf,
    /// Snapshot cadence in steps
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    snapshot_every: u32,
    /// Early-stop threshold on the relative loss change (0 = never stop)
    #[arg(long, default_value_t = 0.0)]
    stop_rel_tol: f64,
    /// Bound on |phi| after each step
    #[arg(long, default_value_t = 1.0)]
    clamp_phi: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    Disk,
    Vessel,
    VesselGap,
}

#[derive(Args)]
struct SynthArgs {
    /// What to draw
    #[arg(value_enum)]
    shape: Shape,
    /// Square grid edge length
    #[arg(long, default_value_t = 64)]
    size: usize,
    /// Disk radius
    #[arg(long, default_value_t = 8.0)]
    radius: f64,
    /// Disk center row (default: grid center)
    #[arg(long)]
    center_row: Option<f64>,
    /// Disk center column (default: grid center)
    #[arg(long)]
    center_col: Option<f64>,
    /// Vessel sine amplitude
    #[arg(long, default_value_t = 10.0)]
    amplitude: f64,
    /// Vessel sine period in pixels
    #[arg(long, default_value_t = 64.0)]
    period: f64,
    /// Vessel tube width in pixels
    #[arg(long, default_value_t = 3.0)]
    width: f64,
    /// Gap width in columns (vessel-gap only)
    #[arg(long, default_value_t = 6)]
    gap: usize,
    /// Background intensity
    #[arg(long, default_value_t = 0)]
    low: u8,
    /// Foreground intensity
    #[arg(long, default_value_t = 255)]
    high: u8,
    /// Output image path (.pgm or .png)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MetricsArgs {
    /// Ground-truth mask image
    #[arg(long)]
    gt: PathBuf,
    /// Prediction image, intensity/255 read as score
    #[arg(long)]
    pred: PathBuf,
    /// Foreground threshold on the score
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
}

#[derive(Args)]
struct BenchArgs {
    /// Ascending grid sizes to time
    #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
    sizes: Vec<usize>,
    /// Timing repeats per size (median reported)
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    repeats: u32,
    /// RNG seed for the timing instances
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Loss(args) => commands::loss::run(args),
        Command::Gradcheck(args) => commands::gradcheck::run(args),
        Command::Evolve(args) => commands::evolve::run(args),
        Command::Synth(args) => commands::synth::run(args),
        Command::Metrics(args) => commands::metrics::run(args),
        Command::Bench(args) => commands::bench::run(args),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            std::process::exit(e.code);
        }
    }
}
