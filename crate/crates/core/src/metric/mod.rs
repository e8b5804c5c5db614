//! Contour Hamiltonian, metric-operator hierarchy and the equivalent
//! Hermitian Hamiltonian, all in exact arithmetic.

mod bch;
mod hierarchy;
mod linsolve;
mod model;
mod report;
mod solve;

use thiserror::Error;

use crate::weyl::OperatorPoly;

pub use bch::{bch_conjugate, BchResult};
pub use hierarchy::{
    derive_metric, equivalent_hermitian, rescale_to_standard_form, verify_pseudo_hermitian, EquivalentHamiltonian,
    IdentityCheck, MetricSolution, OrderStatus, PseudoHermiticityReport, QTerm, ScaledHamiltonian, Verdict,
};
pub use model::{
    build_model, equivalent_h_template, expected_h0, expected_h1, expected_q1, expected_q1_h1_commutator,
    HamiltonianModel,
};
pub use report::{verify_identities, VerificationReport, REPORT_SCHEMA};
pub use solve::{require_unique, solve_commutator_equation, solve_with_growth, AnsatzGrowth, AnsatzSpec, CommutatorSolution};

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("coupling g must be positive, got {0}")]
    InvalidCoupling(String),
    #[error("mass-squared must be non-negative, got {0}")]
    InvalidMass(String),
    #[error("invalid ansatz: {0}")]
    InvalidAnsatz(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("right-hand side is not anti-Hermitian; no Hermitian solution exists")]
    RhsNotAntiHermitian,
    #[error("no solution within ansatz of p-degree {max_p_degree}{}", order.map(|o| format!(" at order {o}")).unwrap_or_default())]
    NoSolutionInAnsatz { order: Option<usize>, max_p_degree: u32 },
    #[error("solution not unique: kernel dimension {kernel_dim}")]
    UnderdeterminedSolution { solution: Box<OperatorPoly>, kernel_dim: usize },
    #[error("conjugation series did not terminate within {max_terms} terms")]
    TruncatedSeries { max_terms: usize },
    #[error("hierarchy did not terminate; equivalent Hamiltonian is not exact")]
    NotExact,
    #[error("operator is not of the form c p^2 + V(x): {0}")]
    NotStandardForm(String),
    #[error("internal error: {0}")]
    Internal(String),
}
