//! Argument surface for the `quill` binary.
//!
//! Scenario overrides mirror the `Scenario` field names, minus `n_beta`
//! (that is the sweep axis) and `object_present` (the tables always compare
//! object-present curves; the Monte Carlo passes derive the absent
//! configuration themselves).

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "quill",
    version,
    about = "Twin beams vs correlated thermal beams: ratio tables, figures, and Monte Carlo validation",
    arg_required_else_help = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ratio curves for two equally bright sources vs bath photon number
    Figure2(FigureArgs),
    /// Per-source curves and ratios at unequal brightness vs bath photon number
    Figure3(FigureArgs),
    /// Evaluate a JSON sweep spec and emit the table as CSV
    Sweep(SweepArgs),
    /// Check every closed form against its Monte Carlo sampler
    Validate(ValidateArgs),
    /// Print the closed-form dominant-bath SNR ratio on one line
    Asymptote(AsymptoteArgs),
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Directory for the CSV/SVG outputs
    #[arg(long, default_value = "out", value_name = "DIR")]
    pub out: PathBuf,

    /// What to write
    #[arg(long, value_enum, default_value_t = OutputFormat::CsvSvg)]
    pub format: OutputFormat,

    /// Bath photon grid, log spaced, as MIN:MAX:COUNT (default 10:1e7:60)
    #[arg(long, value_name = "MIN:MAX:COUNT")]
    pub grid: Option<String>,

    #[command(flatten)]
    pub overrides: ScenarioOverrides,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// CSV table only
    Csv,
    /// CSV table plus SVG plots
    #[value(name = "csv+svg")]
    CsvSvg,
}

impl OutputFormat {
    pub fn svg(self) -> bool {
        matches!(self, OutputFormat::CsvSvg)
    }
}

#[derive(Debug, Default, Args)]
pub struct ScenarioOverrides {
    /// Detected reference photons per pixel, both sources
    #[arg(long, value_name = "N")]
    pub n: Option<f64>,

    /// Detected reference photons per pixel, twin-beam source only
    #[arg(long, value_name = "N")]
    pub n_twb: Option<f64>,

    /// Detected reference photons per pixel, thermal-beam source only
    #[arg(long, value_name = "N")]
    pub n_thb: Option<f64>,

    /// Source modes per pixel
    #[arg(long, value_name = "M")]
    pub m: Option<u64>,

    /// Bath modes per pixel
    #[arg(long, value_name = "M")]
    pub m_beta: Option<u64>,

    /// Source detection efficiency, in (0, 1]
    #[arg(long, value_name = "ETA")]
    pub eta: Option<f64>,

    /// Bath detection efficiency, in (0, 1]
    #[arg(long, value_name = "ETA")]
    pub eta_beta: Option<f64>,

    /// Object power reflectivity, in [0, 1]
    #[arg(long, value_name = "TAU")]
    pub tau: Option<f64>,

    /// Pixel pairs per frame (frame-level estimators only)
    #[arg(long, value_name = "PIXELS")]
    pub n_pix: Option<u32>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Path to the JSON sweep spec
    #[arg(value_name = "SPEC")]
    pub spec: PathBuf,

    /// Write sweep.csv into DIR instead of printing the table to stdout
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Override every per-instance shot count (count and quadrature passes)
    #[arg(long, value_name = "K")]
    pub shots: Option<u64>,

    /// Base seed; falls back to QUILL_SEED, then 0
    #[arg(long, value_name = "S")]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct AsymptoteArgs {
    /// Twin-beam detected reference photons per pixel
    #[arg(long, value_name = "N")]
    pub n_twb: f64,

    /// Thermal-beam detected reference photons per pixel
    #[arg(long, value_name = "N")]
    pub n_thb: f64,

    /// Source detection efficiency, in (0, 1]
    #[arg(long, value_name = "ETA")]
    pub eta: f64,

    /// Source modes per pixel
    #[arg(long, value_name = "M")]
    pub m: u64,
}
