use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::bch::{bch_conjugate, component, graded_conjugate, Graded};
use super::model::HamiltonianModel;
use super::solve::{solve_with_growth, AnsatzGrowth};
use super::MetricError;
use crate::spectra::PotentialSpec;
use crate::weyl::{fourier_map, FourierDirection, OperatorPoly};

/// How the operator at a given order was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderStatus {
    /// The right-hand side was non-zero and the commutator equation solved.
    Solved { max_p_degree: u32, kernel_dim: usize },
    /// The right-hand side vanished exactly.
    RhsVanished,
    /// Lower orders already satisfy every order exactly (terminating series).
    Certified,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QTerm {
    pub order: usize,
    pub q: OperatorPoly,
    /// `R` in `[Q_r, H0] = R`.
    pub rhs: OperatorPoly,
    pub status: OrderStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    /// The identity as a formula, e.g. `[Q1,H0] = 2H1`.
    pub anchor: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl IdentityCheck {
    pub fn new(name: &str, anchor: &str, passed: bool) -> Self {
        Self { name: name.into(), anchor: anchor.into(), passed, detail: None }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricSolution {
    pub q_terms: Vec<QTerm>,
    /// Highest order with a non-zero `Q_r` (0 if `Q = 0`).
    pub truncated_at: usize,
    pub q_total: OperatorPoly,
    /// `e^{-Q/2} H e^{Q/2}`; exact when `h_exact`, otherwise the sum of
    /// orders up to the requested maximum.
    pub h: OperatorPoly,
    pub h_fourier: OperatorPoly,
    /// The conjugation series with the found `Q` terminates and reproduces
    /// `H†` at every order in ε.
    pub all_orders_certified: bool,
    pub h_exact: bool,
    pub diagnostics: Vec<IdentityCheck>,
}

impl MetricSolution {
    pub fn q_at(&self, order: usize) -> OperatorPoly {
        self.q_terms.iter().find(|t| t.order == order).map(|t| t.q.clone()).unwrap_or_default()
    }
}

const MAX_NESTING: usize = 64;
/// Nested commutators tried when certifying a candidate `Q`; a series still
/// alive after this many is treated as non-terminating.
const CERTIFY_NESTING: usize = 8;

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// Solve `H† = e^{-Q} H e^{Q}` order by order in ε for `Q = Σ ε^r Q_r`.
///
/// At order `k` the unknown `Q_k` enters only through `−[Q_k, H0]`, so the
/// order-`k` component of the series evaluated with `Q_k = 0`, minus the
/// order-`k` part of `H†`, is the right-hand side `R_k` of `[Q_k, H0] = R_k`.
pub fn derive_metric(
    model: &HamiltonianModel,
    max_order: usize,
    growth: AnsatzGrowth,
) -> Result<MetricSolution, MetricError> {
    if max_order == 0 {
        return Err(MetricError::InvalidArgument("max_order must be >= 1".into()));
    }
    let h: Graded = vec![model.h0.clone(), model.h1.clone()];
    let target: Graded = vec![model.h0.clone(), -&model.h1];
    let one = BigRational::one();

    let mut q: Graded = vec![OperatorPoly::zero()];
    let mut q_terms = Vec::new();
    let mut diagnostics = Vec::new();
    let mut certified = false;
    let mut even_ok = true;

    for k in 1..=max_order {
        q.push(OperatorPoly::zero());
        if certified {
            if k % 2 == 1 {
                q_terms.push(QTerm {
                    order: k,
                    q: OperatorPoly::zero(),
                    rhs: OperatorPoly::zero(),
                    status: OrderStatus::Certified,
                });
            }
            continue;
        }
        let conj = graded_conjugate(&h, &q, &one, Some(k), k + 1);
        let rhs = component(&conj.series, k).sub(&component(&target, k));
        if rhs.is_zero() {
            if k % 2 == 1 {
                q_terms.push(QTerm { order: k, q: OperatorPoly::zero(), rhs, status: OrderStatus::RhsVanished });
            }
        } else {
            if k % 2 == 0 {
                even_ok = false;
            }
            let sol = solve_with_growth(&model.h0, &rhs, growth).map_err(|e| match e {
                MetricError::NoSolutionInAnsatz { max_p_degree, .. } => {
                    MetricError::NoSolutionInAnsatz { order: Some(k), max_p_degree }
                }
                other => other,
            })?;
            diagnostics.push(IdentityCheck::new(
                &format!("hierarchy order {k}"),
                &format!("[Q{k},H0] = R{k}"),
                sol.x.commutator(&model.h0) == rhs,
            ));
            q[k] = sol.x.clone();
            q_terms.push(QTerm {
                order: k,
                q: sol.x,
                rhs,
                status: OrderStatus::Solved {
                    max_p_degree: sol.ansatz.max_p_degree,
                    kernel_dim: sol.kernel_dim,
                },
            });
        }

        let full = graded_conjugate(&h, &q, &one, None, CERTIFY_NESTING);
        if full.terminated && full.series == target {
            certified = true;
        }
    }

    diagnostics.push(IdentityCheck::new("even orders vanish", "R_{2n} = 0 with Q_{2n} = 0", even_ok));

    let q_total = q.iter().fold(OperatorPoly::zero(), |acc, t| acc.add(t));
    let truncated_at = q.iter().rposition(|t| !t.is_zero()).unwrap_or(0);

    let q1 = q.get(1).cloned().unwrap_or_default();
    let c11 = q1.commutator(&model.h1);
    diagnostics.push(IdentityCheck::new("[Q1,H1] depends on p only", "[Q1,H1] = f(p)", c11.is_p_only()).with_detail(c11.to_string()));
    diagnostics.push(IdentityCheck::new("[Q1,[Q1,H1]] vanishes", "[Q1,[Q1,H1]] = 0", q1.commutator(&c11).is_zero()));
    diagnostics.push(IdentityCheck::new("metric exponent is Hermitian", "Q† = Q", q_total.is_hermitian()));
    diagnostics.push(IdentityCheck::new(
        "higher orders vanish",
        "e^{-Q} H e^{Q} = H† to all orders",
        certified,
    ));

    let conj_half = graded_conjugate(&h, &q, &half(), if certified { None } else { Some(max_order) }, CERTIFY_NESTING.max(max_order + 1));
    let h_exact = certified && conj_half.terminated;
    let h_eq = conj_half.series.iter().fold(OperatorPoly::zero(), |acc, t| acc.add(t));
    diagnostics.push(IdentityCheck::new("equivalent Hamiltonian is Hermitian", "h† = h", h_eq.is_hermitian()));
    let h_fourier = fourier_map(&h_eq, FourierDirection::Forward);

    Ok(MetricSolution {
        q_terms,
        truncated_at,
        q_total,
        h: h_eq,
        h_fourier,
        all_orders_certified: certified,
        h_exact,
        diagnostics,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equal,
    NotEqual,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PseudoHermiticityReport {
    pub verdict: Verdict,
    pub terminated_at: Option<usize>,
}

/// Check `e^{-Q} H e^{Q} = H†` exactly.
pub fn verify_pseudo_hermitian(model: &HamiltonianModel, q: &OperatorPoly, max_terms: usize) -> PseudoHermiticityReport {
    match bch_conjugate(&model.h, q, &BigRational::one(), max_terms) {
        Ok(r) => PseudoHermiticityReport {
            verdict: if r.result == model.h.adjoint() { Verdict::Equal } else { Verdict::NotEqual },
            terminated_at: Some(r.terminated_at),
        },
        Err(_) => PseudoHermiticityReport { verdict: Verdict::Inconclusive, terminated_at: None },
    }
}

/// Standard form `p_y² + V(y)` of the Fourier-transformed equivalent
/// Hamiltonian after the rescaling that sets the kinetic coefficient to one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScaledHamiltonian {
    pub potential: PotentialSpec,
    /// `s` in `x = s·y`, `p = p_y / s`.
    pub scale: f64,
    /// True when `s` is rational, so the rescaled coefficients are exact.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalentHamiltonian {
    pub h: OperatorPoly,
    pub h_fourier: OperatorPoly,
    pub h_scaled: ScaledHamiltonian,
    pub metric: MetricSolution,
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

/// Rescale `c·p² + V(x)` to `p_y² + V(s·y)` with `s = √c`.
pub fn rescale_to_standard_form(op: &OperatorPoly) -> Result<ScaledHamiltonian, MetricError> {
    let not_standard = || MetricError::NotStandardForm(op.to_string());
    let mut kinetic: Option<BigRational> = None;
    let mut coeffs: Vec<BigRational> = Vec::new();
    for m in op.terms() {
        if !m.coeff.is_real() {
            return Err(not_standard());
        }
        match (m.xpow, m.ppow) {
            (0, 2) => kinetic = Some(m.coeff.re.clone()),
            (k, 0) => {
                let k = k as usize;
                if coeffs.len() <= k {
                    coeffs.resize(k + 1, BigRational::zero());
                }
                coeffs[k] = m.coeff.re.clone();
            }
            _ => return Err(not_standard()),
        }
    }
    let kinetic = kinetic.filter(|c| c.is_positive()).ok_or_else(not_standard)?;
    let exact_scale = rational_sqrt(&kinetic);
    let scale = match &exact_scale {
        Some(s) => s.to_f64().unwrap_or(f64::NAN),
        None => kinetic.to_f64().unwrap_or(f64::NAN).sqrt(),
    };
    let poly_coeffs: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| match &exact_scale {
            Some(s) => (c * num_traits::pow(s.clone(), k)).to_f64().unwrap_or(f64::NAN),
            // even powers of s are rational even when s is not
            None => (c * num_traits::pow(kinetic.clone(), k / 2)).to_f64().unwrap_or(f64::NAN) * scale.powi((k % 2) as i32),
        })
        .collect();
    let potential = PotentialSpec::new(1.0, poly_coeffs).map_err(|e| MetricError::NotStandardForm(e.to_string()))?;
    Ok(ScaledHamiltonian { potential, scale, exact: exact_scale.is_some() })
}

/// Derive `Q`, conjugate to the Hermitian `h`, Fourier transform it and put
/// it in kinetic-plus-potential form.
pub fn equivalent_hermitian(model: &HamiltonianModel) -> Result<EquivalentHamiltonian, MetricError> {
    let metric = derive_metric(model, 5, AnsatzGrowth::default())?;
    if !metric.h_exact {
        return Err(MetricError::NotExact);
    }
    let h = bch_conjugate(&model.h, &metric.q_total, &half(), MAX_NESTING)?.result;
    let h_fourier = fourier_map(&h, FourierDirection::Forward);
    let h_scaled = rescale_to_standard_form(&h_fourier)?;
    Ok(EquivalentHamiltonian { h, h_fourier, h_scaled, metric })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::model::{build_model, equivalent_h_template, expected_q1, expected_q1_h1_commutator};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn metric_truncates_at_first_order() {
        let m = build_model(&q(1, 1), &q(0, 1)).unwrap();
        let sol = derive_metric(&m, 5, AnsatzGrowth::default()).unwrap();
        assert_eq!(sol.q_total, expected_q1(&q(16, 1), &q(0, 1)));
        assert_eq!(sol.q_total.to_string(), "(-1/48)*p^3 + 2*p");
        assert_eq!(sol.truncated_at, 1);
        assert!(sol.q_at(3).is_zero());
        assert!(sol.q_at(5).is_zero());
        assert_eq!(sol.q_terms.iter().map(|t| t.order).collect::<Vec<_>>(), vec![1, 3, 5]);
        assert!(sol.all_orders_certified);
        assert!(sol.h_exact);
        assert!(sol.diagnostics.iter().all(|d| d.passed), "{:?}", sol.diagnostics);
    }

    #[test]
    fn q1_h1_commutator_g1() {
        let m = build_model(&q(1, 1), &q(0, 1)).unwrap();
        let c = expected_q1(&m.alpha, &m.m2).commutator(&m.h1);
        // −p⁴/16 + 4p² − 64
        let expected = OperatorPoly::p_pow(4)
            .scale_rational(&q(-1, 16))
            .add(&OperatorPoly::p_pow(2).scale_rational(&q(4, 1)))
            .sub(&OperatorPoly::one().scale_rational(&q(64, 1)));
        assert_eq!(c, expected);
        assert_eq!(c, expected_q1_h1_commutator(&m.alpha, &m.m2));
        assert!(c.is_p_only());
    }

    #[test]
    fn massive_metric_gains_linear_term() {
        let m = build_model(&q(1, 1), &q(1, 4)).unwrap();
        let sol = derive_metric(&m, 5, AnsatzGrowth::default()).unwrap();
        assert_eq!(sol.truncated_at, 1);
        // 2 + 4m²/α = 2 + 1/16
        assert_eq!(sol.q_total.coeff(0, 1), crate::weyl::GaussianRational::ratio(33, 16));
        assert_eq!(sol.q_total.commutator(&m.h0), m.h1.scale_rational(&q(2, 1)));
        assert_eq!(sol.h, equivalent_h_template(&m.alpha, &m.m2));
    }

    #[test]
    fn pseudo_hermiticity() {
        let m = build_model(&q(1, 1), &q(0, 1)).unwrap();
        let r = verify_pseudo_hermitian(&m, &expected_q1(&m.alpha, &m.m2), 10);
        assert_eq!(r.verdict, Verdict::Equal);
        assert_eq!(r.terminated_at, Some(2));
        let r0 = verify_pseudo_hermitian(&m, &OperatorPoly::zero(), 10);
        assert_eq!(r0.verdict, Verdict::NotEqual);
        let r_short = verify_pseudo_hermitian(&m, &expected_q1(&m.alpha, &m.m2), 2);
        assert_eq!(r_short.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn scaled_potential_g1() {
        let m = build_model(&q(1, 1), &q(0, 1)).unwrap();
        let eq = equivalent_hermitian(&m).unwrap();
        assert!(eq.h_scaled.exact);
        assert_eq!(eq.h_scaled.scale, 4.0);
        assert_eq!(eq.h_scaled.potential.kinetic_coeff, 1.0);
        assert_eq!(eq.h_scaled.potential.poly_coeffs, vec![0.0, -2.0, 0.0, 0.0, 4.0]);
    }

    #[test]
    fn non_standard_form_is_rejected() {
        let op = OperatorPoly::p_pow(4).add(&OperatorPoly::x_pow(2));
        assert!(matches!(rescale_to_standard_form(&op), Err(MetricError::NotStandardForm(_))));
    }

    #[test]
    fn rejects_zero_order() {
        let m = build_model(&q(1, 1), &q(0, 1)).unwrap();
        assert!(derive_metric(&m, 0, AnsatzGrowth::default()).is_err());
    }
}
