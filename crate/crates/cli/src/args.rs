use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "dbtunnel",
    version,
    about = "Square double-barrier tunneling: spectra, resonances, standing waves and phase times"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transmission, reflection and transmitted phase over a k grid.
    Spectrum(CommonArgs),
    /// Resonance positions, widths and finesse.
    Resonances(CommonArgs),
    /// Standing-wave intensity I(k, x) or probability P(k, x).
    StandingWave(StandingArgs),
    /// Phase-time profile, resonance lifetimes and limit checks.
    PhaseTime(CommonArgs),
    /// Compare closed form, interference sum and transfer-matrix oracle.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    /// CODATA physics, k reported in units of 5.12e9 m⁻¹.
    Tabulated,
    /// k_e = 5.12289e9 m⁻¹.
    Nominal,
    /// k_e from CODATA constants.
    Codata,
}

#[derive(Debug, Clone, Args)]
pub struct GeometryArgs {
    /// Named configuration.
    #[arg(long, conflicts_with_all = ["a1", "l1", "a2", "l2", "d", "reflectivity", "separation"])]
    pub preset: Option<String>,
    /// First barrier height, eV.
    #[arg(long, requires_all = ["l1", "a2", "l2", "d"], allow_negative_numbers = true)]
    pub a1: Option<f64>,
    /// First barrier length, Å.
    #[arg(long, requires = "a1", allow_negative_numbers = true)]
    pub l1: Option<f64>,
    /// Second barrier height, eV.
    #[arg(long, requires = "a1", allow_negative_numbers = true)]
    pub a2: Option<f64>,
    /// Second barrier length, Å.
    #[arg(long, requires = "a1", allow_negative_numbers = true)]
    pub l2: Option<f64>,
    /// Gap between the barriers, Å.
    #[arg(long, requires = "a1", allow_negative_numbers = true)]
    pub d: Option<f64>,
    /// Mirror reflectivity of an optical cavity.
    #[arg(long, requires = "separation", conflicts_with = "a1", allow_negative_numbers = true)]
    pub reflectivity: Option<f64>,
    /// Plate separation of an optical cavity, m.
    #[arg(long, requires = "reflectivity", allow_negative_numbers = true)]
    pub separation: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    /// Lower end of the open k interval (k_min, k_max].
    #[arg(long, allow_negative_numbers = true)]
    pub k_min: Option<f64>,
    /// Upper end of the k interval; defaults to just below the tunneling ceiling.
    #[arg(long, allow_negative_numbers = true)]
    pub k_max: Option<f64>,
    /// Number of grid points on (k_min, k_max].
    #[arg(long, default_value_t = 2000)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Root-finding tolerance in k, or the residual threshold for `validate`.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Half step of the phase-time finite-difference stencil.
    #[arg(long)]
    pub dk: Option<f64>,
    #[arg(long, value_enum, default_value_t = Units::Tabulated)]
    pub units: Units,
}

#[derive(Debug, Clone, Args)]
pub struct StandingArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Explicit positions (Å, or m for a cavity), comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["x_min", "x_max"], allow_negative_numbers = true)]
    pub x: Vec<f64>,
    /// Start of an x grid; defaults to the left edge of the well or cavity.
    #[arg(long, allow_negative_numbers = true)]
    pub x_min: Option<f64>,
    /// End of an x grid; defaults to the right edge of the well or cavity.
    #[arg(long, allow_negative_numbers = true)]
    pub x_max: Option<f64>,
    /// Number of x grid points, ends included.
    #[arg(long, default_value_t = 50)]
    pub x_points: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Randomized configurations checked in addition to the grid.
    #[arg(long, default_value_t = 200)]
    pub random: usize,
    #[arg(long, default_value_t = 0x5eed_db01)]
    pub seed: u64,
}
