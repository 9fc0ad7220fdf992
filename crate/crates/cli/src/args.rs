//! Command line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "masscalc",
    version,
    about = "Weight calculus of so(n), Weitzenböck formulas and their boundary terms on asymptotically flat metrics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Seed for random directions, random charts and random test bases.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    /// Write the generator matrices and the spectrum of B as JSON.
    #[arg(long, value_name = "PATH", global = true)]
    pub dump_spectral: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split R^n ⊗ V into irreducible summands with their conformal weights.
    Decompose(RepArgs),
    /// Casimir number and dimension of a representation.
    Casimir(RepArgs),
    /// Basis of the space of Weitzenböck coefficient vectors.
    Weitzenbock(RepArgs),
    /// Mass coefficient μ(a).
    Mu(CoeffArgs),
    /// Sign of μ(a) and the split of the summands into P+ and P−.
    Classify(CoeffArgs),
    /// Cross-check an explicit matrix representation against the weight calculus.
    VerifyRep(RepArgs),
    /// ADM mass integrals on a sequence of radii and their limit.
    Mass(MassArgs),
    /// Boundary terms of a Weitzenböck formula on a sequence of radii.
    Boundary(BoundaryArgs),
    /// Boundary term against μ(a) times the mass.
    TheoremCheck(BoundaryArgs),
}

/// Selects a representation either by dominant weight or by family.
#[derive(Debug, Clone, Args)]
pub struct RepArgs {
    /// Ambient dimension.
    #[arg(long)]
    pub n: usize,

    /// Dominant weight as comma separated half-integers, e.g. `1,1` or `1/2,1/2,-1/2`.
    #[arg(long, allow_hyphen_values = true)]
    pub weight: Option<String>,

    /// Representation family: exterior, spin or symmetric_traceless.
    #[arg(long)]
    pub family: Option<String>,

    /// Degree of the exterior power.
    #[arg(long)]
    pub p: Option<usize>,

    /// Degree of the symmetric traceless power.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct CoeffArgs {
    #[command(flatten)]
    pub rep: RepArgs,

    /// Coefficients: a comma separated list of rationals, `universal` or `basis`.
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: String,
}

#[derive(Debug, Clone, Args)]
pub struct MetricArgs {
    /// Chart: flat, schwarzschild, perturbation or gauge.
    #[arg(long, default_value = "schwarzschild")]
    pub metric: String,

    /// Mass parameter of the Schwarzschild chart.
    #[arg(long = "M", default_value_t = 1.0)]
    pub mass: f64,

    /// Decay order of a random perturbation or gauge chart.
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,

    /// Polynomial degree of a random perturbation or gauge chart.
    #[arg(long, default_value_t = 2)]
    pub degree: u32,

    /// Strictly increasing radii, comma separated.
    #[arg(long)]
    pub radii: String,

    /// Quadrature order (exact for degree 2·order+1 on the sphere).
    #[arg(long, default_value_t = 32)]
    pub order: usize,
}

#[derive(Debug, Clone, Args)]
pub struct MassArgs {
    /// Ambient dimension.
    #[arg(long)]
    pub n: usize,

    #[command(flatten)]
    pub metric: MetricArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BoundaryArgs {
    #[command(flatten)]
    pub coeff: CoeffArgs,

    #[command(flatten)]
    pub metric: MetricArgs,

    /// Normal, frame and area element on the sphere.
    #[arg(long, value_enum, default_value_t = FrameArg::Euclidean)]
    pub frame: FrameArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FrameArg {
    Euclidean,
    Exact,
}
