//! Command-line surface of the `puck` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use puck_core::{Criterion, FitNoise};

#[derive(Debug, Parser)]
#[command(
    name = "puck",
    version,
    about = "Simulate and analyze price series driven by a potential centered on their own moving average"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate the price process and write a price CSV
    Simulate(SimulateArgs),
    /// Fit the nested potential families and report the winner
    Fit(FitArgs),
    /// Slide a window along the series, fitting and classifying each one
    Scan(ScanArgs),
    /// Reconstruct the empirical potential and write plot data
    Potential(PotentialArgs),
    /// Classify the market regime of a whole series
    Classify(ClassifyArgs),
    /// Print the stability interval of the quadratic coefficient
    Stability(StabilityArgs),
    /// Generate the bundled quadratic -> cubic -> crash demo fixture
    MakeDemo(MakeDemoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Auto,
    TimePrice,
    PriceOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Aic,
    Bic,
}

impl From<CriterionArg> for Criterion {
    fn from(value: CriterionArg) -> Self {
        match value {
            CriterionArg::Aic => Criterion::Aic,
            CriterionArg::Bic => Criterion::Bic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NoiseArg {
    Gaussian,
    StudentT,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Input CSV with (timestamp, price) or price-only rows
    #[arg(long)]
    pub input: PathBuf,
    /// Column layout; auto decides from the first parseable row
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    pub format: FormatArg,
    /// Field delimiter
    #[arg(long, default_value_t = ',')]
    pub delimiter: char,
    /// Skip the first row of the file
    #[arg(long)]
    pub skip_header: bool,
}

/// Flags shared by the fitting commands. Precedence: flags override the
/// config file, which overrides built-in defaults.
#[derive(Debug, Args)]
pub struct FitFlags {
    /// TOML config file with the candidate grid and defaults
    #[arg(long)]
    pub grid_spec: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub criterion: Option<CriterionArg>,
    /// Noise family assumed by the likelihood
    #[arg(long, value_enum)]
    pub noise: Option<NoiseArg>,
    /// Student-t degrees of freedom (default 4)
    #[arg(long)]
    pub dof: Option<f64>,
    /// Refine the best grid point by coordinate descent
    #[arg(long)]
    pub refine: bool,
    /// Half-width of the no-potential band for b_quad
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Criterion gap required for the cubic precursor alarm
    #[arg(long)]
    pub delta_threshold: Option<f64>,
}

impl FitFlags {
    pub fn noise_override(&self) -> Option<FitNoise> {
        match (self.noise, self.dof) {
            (Some(NoiseArg::Gaussian), _) => Some(FitNoise::Gaussian),
            (Some(NoiseArg::StudentT), dof) => {
                Some(FitNoise::StudentT { dof: dof.unwrap_or(4.0) })
            }
            (None, _) => None,
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 0.0)]
    pub b_quad: f64,
    #[arg(long, default_value_t = 0.0)]
    pub b_nl: f64,
    #[arg(long, default_value_t = 2)]
    pub gamma: u32,
    /// Moving-average span
    #[arg(long, default_value_t = 4)]
    pub m: usize,
    #[arg(long, default_value_t = 0.03)]
    pub sigma: f64,
    /// Number of generated ticks after the warm-up
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = NoiseArg::Gaussian)]
    pub noise: NoiseArg,
    #[arg(long)]
    pub dof: Option<f64>,
    /// Price level of the constant warm-up history
    #[arg(long, default_value_t = 100.0)]
    pub init_price: f64,
    /// Output price CSV path
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub fit: FitFlags,
    /// Report path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub fit: FitFlags,
    /// Window length in ticks
    #[arg(long)]
    pub window: Option<usize>,
    /// Step between window starts
    #[arg(long)]
    pub step: Option<usize>,
    /// Report path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PotentialArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Moving-average span for the displacement
    #[arg(long, default_value_t = 4)]
    pub m: usize,
    /// Number of displacement bins
    #[arg(long)]
    pub bins: Option<usize>,
    /// Output plot file: displacement vs potential
    #[arg(long)]
    pub out: PathBuf,
    /// Optional second plot file: displacement vs mean increment
    #[arg(long)]
    pub increments_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub fit: FitFlags,
    /// Report path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    /// Moving-average span (must be >= 2)
    #[arg(long)]
    pub m: usize,
    /// Report path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MakeDemoArgs {
    /// Output price CSV path
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 1500)]
    pub n_quad: usize,
    #[arg(long, default_value_t = 1500)]
    pub n_cubic: usize,
    #[arg(long, default_value_t = 400)]
    pub n_crash: usize,
    #[arg(long, default_value_t = 0.45)]
    pub sigma: f64,
    #[arg(long, default_value_t = 4)]
    pub m: usize,
}
