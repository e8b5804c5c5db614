use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::MetricError;
use crate::weyl::{hermitian_split, GaussianRational, OperatorPoly};

/// The contour Hamiltonian together with its Hermitian and anti-Hermitian
/// parts.
///
/// `h` is `-d²/dz² - g z⁴ + m² z²` written on the real parametrisation
/// `z = -2i√(1 + ix)`, with `alpha = 16 g`.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianModel {
    pub g: BigRational,
    pub alpha: BigRational,
    pub m2: BigRational,
    pub h: OperatorPoly,
    pub h0: OperatorPoly,
    pub h1: OperatorPoly,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn real(q: &BigRational) -> GaussianRational {
    GaussianRational::real(q.clone())
}

/// `1 + i x`
fn contour_factor() -> OperatorPoly {
    OperatorPoly::one().add(&OperatorPoly::x().scale(&GaussianRational::i()))
}

pub fn build_model(g: &BigRational, m2: &BigRational) -> Result<HamiltonianModel, MetricError> {
    if !g.is_positive() {
        return Err(MetricError::InvalidCoupling(g.to_string()));
    }
    if m2.is_negative() {
        return Err(MetricError::InvalidMass(m2.to_string()));
    }
    let alpha = g * rat(16, 1);
    let f = contour_factor();
    let p = OperatorPoly::p();
    let p2 = OperatorPoly::p_pow(2);
    let half = GaussianRational::ratio(1, 2);

    // ½{1+ix, p²} − ½p − α(1+ix)²
    let mut h = f
        .anticommutator(&p2)
        .scale(&half)
        .sub(&p.scale(&half))
        .sub(&f.mul(&f).scale(&real(&alpha)));
    if !m2.is_zero() {
        // m² z² with z² = −4(1+ix)
        h = h.sub(&f.scale(&real(&(m2 * rat(4, 1)))));
    }
    let (h0, h1) = hermitian_split(&h);
    Ok(HamiltonianModel { g: g.clone(), alpha, m2: m2.clone(), h, h0, h1 })
}

impl HamiltonianModel {
    /// A generic `H = H0 + H1` for the hierarchy solver; the quartic
    /// parameters are left at zero.
    pub fn from_split(h0: OperatorPoly, h1: OperatorPoly) -> Result<Self, MetricError> {
        if !h0.is_hermitian() || !h1.is_anti_hermitian() {
            return Err(MetricError::InvalidArgument("need Hermitian H0 and anti-Hermitian H1".into()));
        }
        let zero = BigRational::zero();
        Ok(Self { g: zero.clone(), alpha: zero.clone(), m2: zero, h: h0.add(&h1), h0, h1 })
    }

    /// `H = H0 + H1`, `H0† = H0`, `H1† = -H1`.
    pub fn is_well_formed(&self) -> bool {
        self.h0.add(&self.h1) == self.h && self.h0.is_hermitian() && self.h1.is_anti_hermitian()
    }

    /// `H† = H0 − H1`
    pub fn adjoint_h(&self) -> OperatorPoly {
        self.h0.sub(&self.h1)
    }
}

/// `p² − ½p + α(x² − 1) − 4m²`
pub fn expected_h0(alpha: &BigRational, m2: &BigRational) -> OperatorPoly {
    OperatorPoly::p_pow(2)
        .sub(&OperatorPoly::p().scale_rational(&rat(1, 2)))
        .add(&OperatorPoly::x_pow(2).sub(&OperatorPoly::one()).scale_rational(alpha))
        .sub(&OperatorPoly::one().scale_rational(&(m2 * rat(4, 1))))
}

/// `½ i {x, p²} − 2iα x − 4i m² x`
pub fn expected_h1(alpha: &BigRational, m2: &BigRational) -> OperatorPoly {
    let i = GaussianRational::i();
    let coeff_x = -(alpha * rat(2, 1) + m2 * rat(4, 1));
    OperatorPoly::x()
        .anticommutator(&OperatorPoly::p_pow(2))
        .scale(&GaussianRational::imag_ratio(1, 2))
        .add(&OperatorPoly::x().scale(&(&i * &real(&coeff_x))))
}

/// `(p² − 4m²)² / (4α) − ½p + αx²`; reduces to `p⁴/(4α) − ½p + αx²` at `m² = 0`.
pub fn equivalent_h_template(alpha: &BigRational, m2: &BigRational) -> OperatorPoly {
    let shifted = OperatorPoly::p_pow(2).sub(&OperatorPoly::one().scale_rational(&(m2 * rat(4, 1))));
    shifted
        .mul(&shifted)
        .scale_rational(&(rat(1, 4) / alpha))
        .sub(&OperatorPoly::p().scale_rational(&rat(1, 2)))
        .add(&OperatorPoly::x_pow(2).scale_rational(alpha))
}

/// First-order metric exponent `−p³/(3α) + (2 + 4m²/α) p`.
pub fn expected_q1(alpha: &BigRational, m2: &BigRational) -> OperatorPoly {
    let lin = rat(2, 1) + m2 * rat(4, 1) / alpha;
    OperatorPoly::p_pow(3)
        .scale_rational(&-(rat(1, 3) / alpha))
        .add(&OperatorPoly::p().scale_rational(&lin))
}

/// `[Q1, H1] = −p⁴/α + (4 + 8m²/α) p² − 4(α + 2m²)²/α`.
pub fn expected_q1_h1_commutator(alpha: &BigRational, m2: &BigRational) -> OperatorPoly {
    let shift = alpha + m2 * rat(2, 1);
    OperatorPoly::p_pow(4)
        .scale_rational(&-(rat(1, 1) / alpha))
        .add(&OperatorPoly::p_pow(2).scale_rational(&(rat(4, 1) + m2 * rat(8, 1) / alpha)))
        .sub(&OperatorPoly::one().scale_rational(&(&shift * &shift * rat(4, 1) / alpha)))
}
