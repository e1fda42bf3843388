//! binfit: fit distributions to binned data and estimate moments.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod output;

/// Exit codes: 0 success, 1 partial failure, 2 invocation or parse error.
pub const EXIT_OK: u8 = 0;
pub const EXIT_PARTIAL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "binfit",
    version,
    about = "Estimate means and variances of binned (interval-censored) data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct DataArgs {
    /// Delimited input file (comma-separated, header row).
    #[arg(long)]
    data: PathBuf,
    /// Column holding the unit identifier; omit for single-unit files.
    #[arg(long)]
    id: Option<String>,
    /// Column holding each bin's lower bound.
    #[arg(long, default_value = "min")]
    min: String,
    /// Column holding each bin's upper bound ("inf" or empty = unbounded).
    #[arg(long, default_value = "max")]
    max: String,
    /// Column holding each bin's count.
    #[arg(long, default_value = "n")]
    n: String,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a model to every unit and write one estimates row per unit.
    Fit {
        #[command(flatten)]
        data: DataArgs,
        /// Model: EGG, PN, PL, best, dagum, gb2, or midpoint.
        #[arg(long)]
        model: String,
        /// Estimates file; defaults to stdout only.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the estimates table to the console (Y or N).
        #[arg(long, default_value = "Y")]
        print: String,
        /// Seed for the optimizer's randomized restarts.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// TOML file with tolerance, grid, and top-bin-factor overrides.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Generate synthetic districts, fit estimators, and write metrics.
    Bench {
        /// TOML file describing the generator (see README).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Generating family: lognormal, gamma, weibull, or dagum.
        #[arg(long)]
        family: Option<String>,
        /// Number of synthetic units.
        #[arg(long, default_value_t = 100)]
        units: u32,
        /// Smallest unit size.
        #[arg(long, default_value_t = 40)]
        size_min: u32,
        /// Largest unit size.
        #[arg(long, default_value_t = 2000)]
        size_max: u32,
        /// Apply census rounding to generated counts.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        rounding: bool,
        /// Comma-separated estimators (EGG, PN, PL, best, dagum, gb2, midpoint).
        #[arg(long, default_value = "best")]
        models: String,
        /// Seed for generation and fitting.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Metrics output file.
        #[arg(long, default_value = "metrics.csv")]
        metrics_out: PathBuf,
        /// Scatter (plot data) output file.
        #[arg(long, default_value = "scatter.csv")]
        scatter_out: PathBuf,
    },
    /// Check structural validity and eligibility of every unit.
    Validate {
        #[command(flatten)]
        data: DataArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Fit { data, model, out, print, seed, config } => {
            commands::cmd_fit(&data, &model, out.as_deref(), &print, seed, config.as_deref())
        }
        Command::Bench {
            config,
            family,
            units,
            size_min,
            size_max,
            rounding,
            models,
            seed,
            metrics_out,
            scatter_out,
        } => commands::cmd_bench(commands::BenchArgs {
            config,
            family,
            units,
            size_min,
            size_max,
            rounding,
            models,
            seed,
            metrics_out,
            scatter_out,
        }),
        Command::Validate { data } => commands::cmd_validate(&data),
    };
    match code {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
