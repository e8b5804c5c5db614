//! Numerical eigensolvers for the Hermitian quartic-plus-linear Hamiltonian
//! and for the non-Hermitian contour problem it is equivalent to.

mod basis;
mod compare;
mod fd;
pub mod linalg;
mod ode;
mod potential;
mod result;
mod shoot;

pub use basis::{
    ground_expectation, hamiltonian_matrix, optimal_omega, oscillator_basis_converged, oscillator_basis_eigs,
    BasisConfig, DenseSolver,
};
pub use compare::{compare_spectra, Comparison, PairDeviation};
pub use fd::{finite_difference_eigs, finite_difference_levels, GridConfig};
pub use potential::PotentialSpec;
pub use result::{sci12, EigResult, Method, EIG_SCHEMA};
pub use shoot::{shoot_eigenvalue, shoot_spectrum, ShootConfig, ShootProblem, ShootResult};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectraError {
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("level {level} not converged: value {value}, error estimate {estimate:e}")]
    NotConverged { level: usize, value: f64, estimate: f64 },
    #[error("box half width {half_width} too small at level {level}: {detail}")]
    BoxTooSmall { half_width: f64, level: usize, detail: String },
    #[error("no eigenvalue in [{lo}, {hi}]")]
    NoRootInBracket { lo: f64, hi: f64 },
    #[error("integration step underflow near t = {at}")]
    StiffnessFailure { at: f64 },
    #[error("residual {residual:e} at E = {energy} exceeds {tolerance:e}")]
    ResidualAboveTolerance { energy: f64, residual: f64, tolerance: f64 },
    #[error("need {needed} levels, got {a} and {b}")]
    LengthMismatch { needed: usize, a: usize, b: usize },
}
