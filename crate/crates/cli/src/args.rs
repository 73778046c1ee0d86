use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pseudoharmonic::oracle::Scheme;
use pseudoharmonic::tolerances;

#[derive(Debug, Parser)]
#[command(
    name = "pseudoharmonic",
    version,
    about = "Bound states, ladder algebra and numerical checks for the N-dimensional pseudoharmonic oscillator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy table over n, l and dimensions.
    Spectrum(SpectrumArgs),
    /// Sample one normalized radial eigenfunction.
    Wavefunction(WavefunctionArgs),
    /// Ladder-operator coefficients and algebra residuals for one (l, N).
    Ladder(LadderArgs),
    /// Run every module check over the requested ranges.
    Verify(VerifyArgs),
    /// Compare closed-form energies with the finite-difference oracle.
    OracleCompare(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// `a1 = M omega^2 / 2`, `a2 = a3 = 0`.
    Harmonic,
    /// Molecular form from `--De` and `--re` (both default to 1).
    Pseudoharmonic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Pretty,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum SchemeArg {
    #[default]
    Flux,
    Substituted,
    Direct,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Flux => Scheme::FluxConservative,
            SchemeArg::Substituted => Scheme::Substituted,
            SchemeArg::Direct => Scheme::Direct,
        }
    }
}

/// Exactly one coefficient source: inline `--a1/--a2/--a3`, molecular
/// `--De/--re`, a molecule file record, or a preset.
#[derive(Debug, Clone, Default, Args)]
pub struct SourceArgs {
    /// Coefficient of r^2.
    #[arg(long, allow_negative_numbers = true)]
    pub a1: Option<f64>,
    /// Coefficient of 1/r^2 (default 0 with --a1).
    #[arg(long, allow_negative_numbers = true)]
    pub a2: Option<f64>,
    /// Constant offset (default 0 with --a1).
    #[arg(long, allow_negative_numbers = true)]
    pub a3: Option<f64>,
    /// Dissociation energy.
    #[arg(long = "De", allow_negative_numbers = true)]
    pub de: Option<f64>,
    /// Equilibrium bond length.
    #[arg(long = "re", allow_negative_numbers = true)]
    pub re: Option<f64>,
    /// Record key in the molecule file.
    #[arg(long, requires = "molecule_file")]
    pub molecule: Option<String>,
    /// Molecule file (see README for the grammar).
    #[arg(long)]
    pub molecule_file: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Oscillator frequency for `--preset harmonic` (default 1).
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Reduced Planck constant (default 1).
    #[arg(long, allow_negative_numbers = true)]
    pub hbar: Option<f64>,
    /// Mass (default 1).
    #[arg(long, allow_negative_numbers = true)]
    pub mass: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct RangeArgs {
    /// Comma-separated dimensions N >= 2.
    #[arg(long, value_delimiter = ',', default_value = "3")]
    pub dims: Vec<u32>,
    #[arg(long, default_value_t = 3)]
    pub n_max: u32,
    #[arg(long, default_value_t = 2)]
    pub ell_max: u32,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    pub format: Format,
    /// Write to a file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub range: RangeArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct WavefunctionArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    #[arg(long, default_value_t = 0)]
    pub ell: u32,
    #[arg(long, default_value_t = 3)]
    pub dim: u32,
    /// Number of radial samples.
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// Outer sample radius (default: where |R| < 1e-12).
    #[arg(long, allow_negative_numbers = true)]
    pub r_max: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LadderArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 0)]
    pub ell: u32,
    #[arg(long, default_value_t = 3)]
    pub dim: u32,
    #[arg(long, default_value_t = 5)]
    pub n_max: u32,
    /// Largest power q for the composition check.
    #[arg(long, default_value_t = 5)]
    pub q_max: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Tolerance overrides; defaults are the library's.
#[derive(Debug, Clone, Args)]
pub struct ToleranceArgs {
    #[arg(long, default_value_t = tolerances::ORACLE)]
    pub tol_oracle: f64,
    #[arg(long, default_value_t = tolerances::NORMALIZATION)]
    pub tol_normalization: f64,
    #[arg(long, default_value_t = tolerances::ORTHOGONALITY)]
    pub tol_orthogonality: f64,
    #[arg(long, default_value_t = tolerances::RESIDUAL_EXACT)]
    pub tol_residual: f64,
    #[arg(long, default_value_t = tolerances::RESIDUAL_DETUNED)]
    pub tol_detuned: f64,
    #[arg(long, default_value_t = tolerances::LADDER_DIFFERENTIAL)]
    pub tol_ladder: f64,
    #[arg(long, default_value_t = tolerances::ALGEBRA)]
    pub tol_algebra: f64,
    #[arg(long, default_value_t = tolerances::POWER)]
    pub tol_power: f64,
}

#[derive(Debug, Clone, Args)]
pub struct OracleSettings {
    /// Points on the coarsest oracle grid.
    #[arg(long, default_value_t = 2000)]
    pub points: usize,
    /// Number of grids, each doubling the previous.
    #[arg(long, default_value_t = 3)]
    pub refinements: usize,
    #[arg(long, value_enum, default_value_t = SchemeArg::Flux)]
    pub scheme: SchemeArg,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub range: RangeArgs,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(flatten)]
    pub oracle: OracleSettings,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub range: RangeArgs,
    #[arg(long, default_value_t = tolerances::ORACLE)]
    pub tol_oracle: f64,
    #[command(flatten)]
    pub oracle: OracleSettings,
    #[command(flatten)]
    pub output: OutputArgs,
}
