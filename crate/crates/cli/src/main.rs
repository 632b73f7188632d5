//! `faa`: estimate, align, inspect and fuse grids by their dominant
//! spectral direction, and run the synthetic benchmarks.
//!
//! Exit codes: 0 success, 2 I/O, 3 shape or precondition, 4 configuration.

mod commands;
mod config;
mod error;
mod files;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use faa_core::Window;

use crate::files::Format;

#[derive(Parser, Debug)]
#[command(
    name = "faa",
    version,
    about = "Fourier angle estimation and alignment"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct EstimatorArgs {
    /// Histogram bins over [0, 180) degrees.
    #[arg(long, default_value_t = 180)]
    bins: usize,
    #[arg(long, value_enum, default_value_t = WindowArg::None)]
    window: WindowArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum WindowArg {
    None,
    Hann,
}

impl From<WindowArg> for Window {
    fn from(w: WindowArg) -> Self {
        match w {
            WindowArg::None => Window::None,
            WindowArg::Hann => Window::Hann,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Suite {
    Angles,
    Equivariance,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report the dominant spectral direction of a grid.
    Estimate {
        #[arg(long)]
        input: PathBuf,
        /// Input format; inferred from the extension when omitted.
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[command(flatten)]
        est: EstimatorArgs,
        /// Report destination, `-` for stdout.
        #[arg(long, default_value = "-")]
        json: String,
    },
    /// Rotate a grid so its dominant direction lands on --theta0.
    Align {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Target direction in degrees.
        #[arg(long, allow_hyphen_values = true)]
        theta0: f64,
        /// Aligned grid, written in the input's format.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        est: EstimatorArgs,
        #[arg(long, default_value = "-")]
        json: String,
    },
    /// Export the log power spectrum and the polar energy table.
    Spectrum {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Defaults to `<stem>_power.pgm` beside the input.
        #[arg(long)]
        out_power: Option<PathBuf>,
        /// Defaults to `<stem>_polar.csv` beside the input.
        #[arg(long)]
        out_polar: Option<PathBuf>,
        #[command(flatten)]
        est: EstimatorArgs,
        #[arg(long, default_value = "-")]
        json: String,
    },
    /// Orientation-aligned fusion of a low-level map with a half-size high-level map.
    Fuse {
        #[arg(long)]
        low: PathBuf,
        #[arg(long)]
        high: PathBuf,
        /// key=value settings file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Fused map; `.csv` stacks channels vertically, `.pgm` needs one channel.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "-")]
        json: String,
    },
    /// Run a synthetic benchmark suite.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long, default_value = "-")]
    json: String,
    /// Per-angle table.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Canvas side in pixels.
    #[arg(long, default_value_t = 64)]
    size: usize,
    /// Rectangle half-length (angles suite).
    #[arg(long, default_value_t = 20.0)]
    a: f64,
    /// Rectangle half-width (angles suite).
    #[arg(long, default_value_t = 6.0)]
    b: f64,
    /// Sweep start in degrees (angles suite).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    start: f64,
    /// Sweep end in degrees, inclusive (angles suite).
    #[arg(long, default_value_t = 175.0, allow_hyphen_values = true)]
    stop: f64,
    #[arg(long, default_value_t = 5.0)]
    step: f64,
    /// Explicit comma-separated angles in degrees; overrides the sweep.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    angles: Option<Vec<f64>>,
    /// Resolution of the brute-force cross-check in degrees.
    #[arg(long, default_value_t = 0.25)]
    oracle_step: f64,
    #[arg(long)]
    no_oracle: bool,
    /// Hard-edged rectangles instead of 4x4 supersampling.
    #[arg(long)]
    hard: bool,
    /// Test-image seed (equivariance suite).
    #[arg(long, default_value_t = 3)]
    seed: u64,
    /// Include wall-clock runtime, which makes the report non-reproducible.
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    est: EstimatorArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Estimate {
            input,
            format,
            est,
            json,
        } => commands::estimate(&input, format, &est, &json),
        Command::Align {
            input,
            format,
            theta0,
            out,
            est,
            json,
        } => commands::align(&input, format, theta0, &out, &est, &json),
        Command::Spectrum {
            input,
            format,
            out_power,
            out_polar,
            est,
            json,
        } => commands::spectrum(&input, format, out_power, out_polar, &est, &json),
        Command::Fuse {
            low,
            high,
            config,
            out,
            json,
        } => commands::fuse(&low, &high, config.as_deref(), &out, &json),
        Command::Bench(args) => commands::bench(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("faa: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
