//! Exact metric construction, checked against closed forms assembled here
//! from elementary operators rather than from the library's templates.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use ptmetric::metric::{
    bch_conjugate, build_model, derive_metric, equivalent_hermitian, require_unique, solve_commutator_equation,
    verify_pseudo_hermitian, AnsatzGrowth, AnsatzSpec, HamiltonianModel, MetricError, OrderStatus, Verdict,
};
use ptmetric::weyl::{GaussianRational, OperatorPoly};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn x() -> OperatorPoly {
    OperatorPoly::x()
}

fn p() -> OperatorPoly {
    OperatorPoly::p()
}

fn c(r: &BigRational) -> OperatorPoly {
    OperatorPoly::constant(GaussianRational::real(r.clone()))
}

/// `−p³/(3α) + (2 + 4m²/α) p`
fn q1_oracle(alpha: &BigRational, m2: &BigRational) -> OperatorPoly {
    let p3 = p().mul(&p()).mul(&p());
    p3.scale_rational(&(-q(1, 3) / alpha)).add(&p().scale_rational(&(q(2, 1) + q(4, 1) * m2 / alpha)))
}

/// `(p² − 4m²)²/(4α) − p/2 + αx²`
fn h_oracle(alpha: &BigRational, m2: &BigRational) -> OperatorPoly {
    let shifted = p().mul(&p()).sub(&c(&(q(4, 1) * m2)));
    shifted
        .mul(&shifted)
        .scale_rational(&(q(1, 4) / alpha))
        .sub(&p().scale_rational(&q(1, 2)))
        .add(&x().mul(&x()).scale_rational(alpha))
}

fn ratio() -> impl Strategy<Value = BigRational> {
    (1i64..=40, 1i64..=12).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn metric_closed_forms_for_random_couplings(g in ratio(), m2_num in 0i64..=6, m2_den in 1i64..=4) {
        let m2 = q(m2_num, m2_den);
        let model = build_model(&g, &m2).unwrap();
        prop_assert!(model.is_well_formed());
        let sol = derive_metric(&model, 5, AnsatzGrowth::default()).unwrap();
        prop_assert!(sol.all_orders_certified);
        prop_assert_eq!(sol.truncated_at, 1);
        prop_assert_eq!(&sol.q_total, &q1_oracle(&model.alpha, &m2));
        prop_assert_eq!(&sol.h, &h_oracle(&model.alpha, &m2));
        let ph = verify_pseudo_hermitian(&model, &sol.q_total, 8);
        prop_assert_eq!(ph.verdict, Verdict::Equal);
        prop_assert_eq!(ph.terminated_at, Some(2));
    }
}

#[test]
fn commutator_with_h1_is_momentum_only() {
    for g in [q(1, 1), q(3, 2), q(7, 1)] {
        let model = build_model(&g, &q(0, 1)).unwrap();
        let a = &model.alpha;
        let q1 = q1_oracle(a, &q(0, 1));
        assert_eq!(q1.commutator(&model.h0), model.h1.scale_rational(&q(2, 1)));
        let c11 = q1.commutator(&model.h1);
        // −p⁴/α + 4p² − 4α
        let p2 = p().mul(&p());
        let expected = p2.mul(&p2).scale_rational(&(-q(1, 1) / a)).add(&p2.scale_rational(&q(4, 1))).sub(&c(&(q(4, 1) * a)));
        assert_eq!(c11, expected);
        assert!(q1.commutator(&c11).is_zero());
    }
}

#[test]
fn wrong_metric_is_rejected() {
    let model = build_model(&q(1, 1), &q(0, 1)).unwrap();
    let wrong = q1_oracle(&model.alpha, &q(0, 1)).add(&p());
    assert_eq!(verify_pseudo_hermitian(&model, &wrong, 8).verdict, Verdict::NotEqual);
    // x⁴ never commutes down to zero against the model within two terms
    let r = verify_pseudo_hermitian(&model, &x().mul(&x()).mul(&x()).mul(&x()), 2);
    assert_eq!(r.verdict, Verdict::Inconclusive);
}

#[test]
fn conjugation_at_half_gives_hermitian_h() {
    let model = build_model(&q(5, 3), &q(1, 2)).unwrap();
    let q1 = q1_oracle(&model.alpha, &model.m2);
    let h = bch_conjugate(&model.h, &q1, &q(1, 2), 10).unwrap();
    assert_eq!(h.result, h_oracle(&model.alpha, &model.m2));
    assert!(h.result.is_hermitian());
}

#[test]
fn scaled_potential_exact_and_inexact() {
    let eq = equivalent_hermitian(&build_model(&q(1, 1), &q(0, 1)).unwrap()).unwrap();
    assert!(eq.h_scaled.exact);
    assert_eq!(eq.h_scaled.scale, 4.0);
    assert_eq!(eq.h_scaled.potential.poly_coeffs, vec![0.0, -2.0, 0.0, 0.0, 4.0]);

    // α = 32: s = √32 is irrational, coefficients are rounded
    let eq = equivalent_hermitian(&build_model(&q(2, 1), &q(1, 4)).unwrap()).unwrap();
    assert!(!eq.h_scaled.exact);
    let s = 32f64.sqrt();
    let expected = [4.0 * 0.0625 / 32.0, -0.5 * s, -2.0 * 0.25, 0.0, 8.0];
    for (got, want) in eq.h_scaled.potential.poly_coeffs.iter().zip(expected) {
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
}

/// `H0 = p² + x²`, `H1 = i x³`.
fn cubic_model() -> HamiltonianModel {
    let h0 = p().mul(&p()).add(&x().mul(&x()));
    let h1 = x().mul(&x()).mul(&x()).scale(&GaussianRational::i());
    HamiltonianModel::from_split(h0, h1).unwrap()
}

#[test]
fn cubic_family_first_order() {
    let model = cubic_model();
    let rhs = model.h1.scale_rational(&q(2, 1));
    let sol = solve_commutator_equation(&model.h0, &rhs, AnsatzSpec::new(3, 3).unwrap()).unwrap();
    assert_eq!(sol.x.commutator(&model.h0), rhs);
    assert!(sol.x.is_hermitian());
    let sol = require_unique(sol).unwrap();
    // −(2/3) p³ − ½{x², p}
    let expected = p().mul(&p()).mul(&p()).scale_rational(&q(-2, 3)).sub(&x().mul(&x()).anticommutator(&p()).scale_rational(&q(1, 2)));
    assert_eq!(sol.x, expected);
}

#[test]
fn cubic_family_third_order() {
    let model = cubic_model();
    let sol = derive_metric(&model, 3, AnsatzGrowth::default()).unwrap();
    let q1 = sol.q_at(1);
    let q3 = sol.q_at(3);
    // order ε³ of e^{-Q}He^{Q} = H† leaves [Q3, H0] = (1/6)[Q1,[Q1,H1]]
    let oracle = q1.commutator(&q1.commutator(&model.h1)).scale_rational(&q(1, 6));
    let term = sol.q_terms.iter().find(|t| t.order == 3).unwrap();
    assert_eq!(term.rhs, oracle);
    assert!(matches!(term.status, OrderStatus::Solved { .. }));
    assert_eq!(q3.commutator(&model.h0), oracle);
    assert!(q3.is_hermitian());
    assert!(!sol.all_orders_certified);
    assert_eq!(q3.p_degree(), Some(5));
}

#[test]
fn invalid_parameters() {
    assert!(matches!(build_model(&q(0, 1), &q(0, 1)), Err(MetricError::InvalidCoupling(_))));
    assert!(matches!(build_model(&q(-1, 2), &q(0, 1)), Err(MetricError::InvalidCoupling(_))));
    assert!(matches!(build_model(&q(1, 1), &q(-1, 4)), Err(MetricError::InvalidMass(_))));
    assert!(HamiltonianModel::from_split(x().scale(&GaussianRational::i()), OperatorPoly::zero()).is_err());
    let m = build_model(&q(1, 1), &q(0, 1)).unwrap();
    assert!(derive_metric(&m, 0, AnsatzGrowth::default()).is_err());
}

#[test]
fn ansatz_too_small_reports_order() {
    let m = build_model(&q(1, 1), &q(0, 1)).unwrap();
    let err = derive_metric(&m, 3, AnsatzGrowth { max_p_degree_cap: 1 }).unwrap_err();
    assert!(matches!(err, MetricError::NoSolutionInAnsatz { order: Some(1), max_p_degree: 1 }), "{err:?}");
}
