use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use super::linsolve;
use super::MetricError;
use crate::weyl::{GaussianRational, OperatorPoly};

/// Bounds of the Hermitian ansatz `X = Σ_{n odd ≤ max_p_degree} {f_n(x), pⁿ}`
/// with real polynomial `f_n` of degree at most `max_x_degree`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AnsatzSpec {
    pub max_p_degree: u32,
    pub max_x_degree: u32,
}

impl AnsatzSpec {
    pub fn new(max_p_degree: u32, max_x_degree: u32) -> Result<Self, MetricError> {
        if max_p_degree < 1 || max_p_degree % 2 == 0 {
            return Err(MetricError::InvalidAnsatz(format!(
                "max_p_degree must be odd and >= 1, got {max_p_degree}"
            )));
        }
        Ok(Self { max_p_degree, max_x_degree })
    }

    /// `(j, n)` pairs for the basis elements `{x^j, pⁿ}`, lowest total
    /// degree first.
    fn basis(&self) -> Vec<(u32, u32)> {
        let mut v: Vec<(u32, u32)> = (1..=self.max_p_degree)
            .step_by(2)
            .flat_map(|n| (0..=self.max_x_degree).map(move |j| (j, n)))
            .collect();
        v.sort_by_key(|&(j, n)| (j + n, n, j));
        v
    }
}

/// Growth schedule used when the caller does not fix the ansatz: odd
/// `p`-degree from 1 upward in steps of 2, `x`-degree tied to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AnsatzGrowth {
    pub max_p_degree_cap: u32,
}

impl Default for AnsatzGrowth {
    fn default() -> Self {
        Self { max_p_degree_cap: 9 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutatorSolution {
    pub x: OperatorPoly,
    /// Dimension of the ansatz-restricted kernel of `X ↦ [X, H0]`.
    pub kernel_dim: usize,
    pub ansatz: AnsatzSpec,
}

fn basis_element(j: u32, n: u32) -> OperatorPoly {
    OperatorPoly::x_pow(j).anticommutator(&OperatorPoly::p_pow(n))
}

/// Find Hermitian `X` in the ansatz span with `[X, h0] = rhs`.
///
/// The linear system over the real ansatz coefficients is solved exactly.
/// When the kernel is non-trivial the representative with higher-degree
/// coordinates set to zero is returned and `kernel_dim` reports the
/// ambiguity; use [`require_unique`] to turn that into an error.
pub fn solve_commutator_equation(
    h0: &OperatorPoly,
    rhs: &OperatorPoly,
    ansatz: AnsatzSpec,
) -> Result<CommutatorSolution, MetricError> {
    if !rhs.is_anti_hermitian() {
        return Err(MetricError::RhsNotAntiHermitian);
    }
    let basis = ansatz.basis();
    let images: Vec<OperatorPoly> = basis.iter().map(|&(j, n)| basis_element(j, n).commutator(h0)).collect();

    let keys: BTreeSet<(u32, u32)> = images
        .iter()
        .chain(std::iter::once(rhs))
        .flat_map(|p| p.terms().map(|m| (m.xpow, m.ppow)).collect::<Vec<_>>())
        .collect();

    let ncols = basis.len();
    let mut rows = Vec::with_capacity(2 * keys.len());
    let mut b = Vec::with_capacity(2 * keys.len());
    for &(a, p) in &keys {
        let coeffs: Vec<GaussianRational> = images.iter().map(|img| img.coeff(a, p)).collect();
        let target = rhs.coeff(a, p);
        rows.push(coeffs.iter().map(|c| c.re.clone()).collect());
        b.push(target.re.clone());
        rows.push(coeffs.iter().map(|c| c.im.clone()).collect());
        b.push(target.im.clone());
    }

    let sol = linsolve::solve(rows, b, ncols).ok_or(MetricError::NoSolutionInAnsatz {
        order: None,
        max_p_degree: ansatz.max_p_degree,
    })?;

    let x = basis
        .iter()
        .zip(&sol.values)
        .filter(|(_, c)| !c.is_zero())
        .fold(OperatorPoly::zero(), |acc, (&(j, n), c)| {
            acc.add(&basis_element(j, n).scale_rational(c))
        });

    if &x.commutator(h0) != rhs {
        return Err(MetricError::Internal("commutator solution failed re-substitution".into()));
    }
    Ok(CommutatorSolution { x, kernel_dim: sol.kernel_dim, ansatz })
}

/// Retry with a growing ansatz until a solution exists or the cap is hit.
pub fn solve_with_growth(
    h0: &OperatorPoly,
    rhs: &OperatorPoly,
    growth: AnsatzGrowth,
) -> Result<CommutatorSolution, MetricError> {
    let mut deg = 1;
    loop {
        match solve_commutator_equation(h0, rhs, AnsatzSpec { max_p_degree: deg, max_x_degree: deg }) {
            Err(MetricError::NoSolutionInAnsatz { .. }) if deg + 2 <= growth.max_p_degree_cap => deg += 2,
            other => return other,
        }
    }
}

pub fn require_unique(sol: CommutatorSolution) -> Result<CommutatorSolution, MetricError> {
    if sol.kernel_dim > 0 {
        let kernel_dim = sol.kernel_dim;
        return Err(MetricError::UnderdeterminedSolution { solution: Box::new(sol.x), kernel_dim });
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::model::{build_model, expected_q1};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn first_order_metric_for_g1() {
        let m = build_model(&q(1, 1), &q(0, 1)).unwrap();
        let rhs = m.h1.scale_rational(&q(2, 1));
        let sol = solve_commutator_equation(&m.h0, &rhs, AnsatzSpec::new(3, 3).unwrap()).unwrap();
        let expected = OperatorPoly::from_terms([
            (0, 3, GaussianRational::ratio(-1, 48)),
            (0, 1, GaussianRational::from_int(2)),
        ]);
        assert_eq!(sol.x, expected);
        assert_eq!(sol.x, expected_q1(&q(16, 1), &q(0, 1)));
        assert_eq!(sol.kernel_dim, 0);
    }

    #[test]
    fn degree_one_ansatz_is_too_small() {
        let m = build_model(&q(1, 1), &q(0, 1)).unwrap();
        let rhs = m.h1.scale_rational(&q(2, 1));
        let err = solve_commutator_equation(&m.h0, &rhs, AnsatzSpec::new(1, 4).unwrap()).unwrap_err();
        assert!(matches!(err, MetricError::NoSolutionInAnsatz { max_p_degree: 1, .. }));
        let grown = solve_with_growth(&m.h0, &rhs, AnsatzGrowth::default()).unwrap();
        assert_eq!(grown.ansatz.max_p_degree, 3);
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let m = build_model(&q(1, 1), &q(0, 1)).unwrap();
        let sol = solve_commutator_equation(&m.h0, &OperatorPoly::zero(), AnsatzSpec::new(5, 3).unwrap()).unwrap();
        assert!(sol.x.is_zero());
    }

    #[test]
    fn cubic_family() {
        let h0 = OperatorPoly::p_pow(2).add(&OperatorPoly::x_pow(2));
        let rhs = OperatorPoly::x_pow(3).scale(&GaussianRational::imag_ratio(2, 1));
        let sol = solve_commutator_equation(&h0, &rhs, AnsatzSpec::new(3, 3).unwrap()).unwrap();
        assert_eq!(sol.x.commutator(&h0), rhs);
        assert!(sol.x.is_hermitian());
        // −(2/3)p³ − ½{x², p}
        let expected = OperatorPoly::p_pow(3)
            .scale_rational(&q(-2, 3))
            .sub(&OperatorPoly::x_pow(2).anticommutator(&OperatorPoly::p()).scale_rational(&q(1, 2)));
        assert_eq!(sol.x, expected);
    }

    #[test]
    fn hermitian_rhs_is_rejected() {
        let h0 = OperatorPoly::p_pow(2);
        assert!(matches!(
            solve_commutator_equation(&h0, &OperatorPoly::x(), AnsatzSpec::new(1, 1).unwrap()),
            Err(MetricError::RhsNotAntiHermitian)
        ));
    }

    #[test]
    fn underdetermined_is_reported() {
        // p and p³ both commute with p².
        let h0 = OperatorPoly::p_pow(2);
        let sol = solve_commutator_equation(&h0, &OperatorPoly::zero(), AnsatzSpec::new(3, 0).unwrap()).unwrap();
        assert_eq!(sol.kernel_dim, 2);
        assert!(matches!(require_unique(sol), Err(MetricError::UnderdeterminedSolution { kernel_dim: 2, .. })));
    }

    #[test]
    fn ansatz_validation() {
        assert!(AnsatzSpec::new(0, 1).is_err());
        assert!(AnsatzSpec::new(2, 1).is_err());
    }
}
