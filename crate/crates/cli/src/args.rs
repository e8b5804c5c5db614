use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use ptmetric::weyl::parse_rational;

#[derive(Debug, Parser)]
#[command(name = "ptmetric", version, about = "Metric operator and spectra of the PT-symmetric -x^4 oscillator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every exact identity of the metric construction.
    Verify(VerifyArgs),
    /// Compute the lowest eigenvalues with one solver.
    Spectrum(SpectrumArgs),
    /// Run several solvers and compare their spectra pairwise.
    Compare(CompareArgs),
    /// Sample the scaled potential V(y) of the equivalent Hermitian problem.
    Potential(PotentialArgs),
}

impl Command {
    pub fn out(&self) -> Option<&Path> {
        match self {
            Command::Verify(a) => a.output.out.as_deref(),
            Command::Spectrum(a) => a.output.out.as_deref(),
            Command::Compare(a) => a.output.out.as_deref(),
            Command::Potential(a) => a.output.out.as_deref(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Basis,
    Fd,
    ShootLine,
    ShootRays,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PotentialArg {
    /// The scaled quartic-plus-linear potential of the equivalent problem.
    Quartic,
    /// `p² + y²`, levels 1, 3, 5, ...
    Harmonic,
}

fn rational(s: &str) -> Result<BigRational, String> {
    parse_rational(s).ok_or_else(|| format!("`{s}` is not a rational number (use p/q, an integer or a decimal)"))
}

fn range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("`{s}` is not of the form a:b"))?;
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    let (a, b) = (parse(a)?, parse(b)?);
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(format!("range {a}:{b} must be finite and increasing"));
    }
    Ok((a, b))
}

#[derive(Clone, Debug, Args)]
pub struct Couplings {
    /// Quartic coupling g > 0 (rational, e.g. 1, 3/2).
    #[arg(long, default_value = "1", value_parser = rational, allow_hyphen_values = true)]
    pub g: BigRational,
    /// Mass term m² ≥ 0 (rational).
    #[arg(long, default_value = "0", value_parser = rational, allow_hyphen_values = true)]
    pub m2: BigRational,
}

#[derive(Clone, Debug, Args)]
pub struct OutputArgs {
    /// Output format (defaults to human, csv for `potential`).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct SolverArgs {
    /// Oscillator basis size.
    #[arg(long = "n-basis", default_value_t = 200)]
    pub n_basis: usize,
    /// Oscillator basis frequency (variational optimum when omitted).
    #[arg(long)]
    pub omega: Option<f64>,
    /// Half width L of the finite-difference box [-L, L].
    #[arg(long = "grid-L", default_value_t = 8.0)]
    pub grid_l: f64,
    /// Interior points of the finest finite-difference grid.
    #[arg(long = "grid-n", default_value_t = 4000)]
    pub grid_n: usize,
    /// Start of the inward shooting integration.
    #[arg(long, default_value_t = 10.0)]
    pub xmax: f64,
}

#[derive(Clone, Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub couplings: Couplings,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub couplings: Couplings,
    #[arg(long, value_enum, default_value = "quartic")]
    pub potential: PotentialArg,
    #[arg(long, value_enum, default_value = "basis")]
    pub method: MethodArg,
    /// Number of levels.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
    pub k: u32,
    /// Relative accuracy demanded of the solver (residual bound for shooting).
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub couplings: Couplings,
    #[arg(long, value_enum, default_value = "quartic")]
    pub potential: PotentialArg,
    /// Comma-separated solvers, at least two.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "basis,fd,shoot-line")]
    pub methods: Vec<MethodArg>,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    pub k: u32,
    /// Largest accepted relative deviation between any two methods.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, Args)]
pub struct PotentialArgs {
    #[command(flatten)]
    pub couplings: Couplings,
    /// Sampling interval a:b.
    #[arg(long, default_value = "-2:2", value_parser = range, allow_hyphen_values = true)]
    pub range: (f64, f64),
    /// Number of samples.
    #[arg(long, default_value_t = 401, value_parser = clap::value_parser!(u32).range(2..))]
    pub n: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}
