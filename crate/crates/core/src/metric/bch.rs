//! Exact conjugation `e^{-sQ} H e^{sQ} = Σ (−s)ⁿ/n! ad_Qⁿ(H)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::MetricError;
use crate::weyl::OperatorPoly;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BchResult {
    pub result: OperatorPoly,
    /// Index `n` of the last non-vanishing nested commutator `ad_Qⁿ(H)`;
    /// `ad_Q^{n+1}(H) = 0` exactly, which certifies the sum.
    pub terminated_at: usize,
}

/// Sum the conjugation series until a nested commutator vanishes.
///
/// Fails with [`MetricError::TruncatedSeries`] when `ad_Qⁿ(H)` is still
/// non-zero for every `n ≤ max_terms`.
pub fn bch_conjugate(
    h: &OperatorPoly,
    q: &OperatorPoly,
    s: &BigRational,
    max_terms: usize,
) -> Result<BchResult, MetricError> {
    if max_terms == 0 {
        return Err(MetricError::InvalidArgument("max_terms must be >= 1".into()));
    }
    let mut result = h.clone();
    let mut term = h.clone();
    let mut coeff = BigRational::one();
    for n in 1..=max_terms {
        term = q.commutator(&term);
        if term.is_zero() {
            return Ok(BchResult { result, terminated_at: n - 1 });
        }
        coeff = coeff * -s / BigRational::from_integer(BigInt::from(n));
        result = result.add(&term.scale_rational(&coeff));
    }
    Err(MetricError::TruncatedSeries { max_terms })
}

/// A formal power series in the bookkeeping parameter ε, indexed by order.
pub(crate) type Graded = Vec<OperatorPoly>;

fn graded_commutator(q: &Graded, x: &Graded) -> Graded {
    if q.is_empty() || x.is_empty() {
        return Vec::new();
    }
    let mut out = vec![OperatorPoly::zero(); q.len() + x.len() - 1];
    for (r, qr) in q.iter().enumerate() {
        if qr.is_zero() {
            continue;
        }
        for (k, xk) in x.iter().enumerate() {
            if xk.is_zero() {
                continue;
            }
            out[r + k] = out[r + k].add(&qr.commutator(xk));
        }
    }
    trim(out)
}

fn trim(mut v: Graded) -> Graded {
    while v.last().is_some_and(|p| p.is_zero()) {
        v.pop();
    }
    v
}

fn add_scaled(acc: &mut Graded, x: &Graded, c: &BigRational) {
    if acc.len() < x.len() {
        acc.resize(x.len(), OperatorPoly::zero());
    }
    for (a, b) in acc.iter_mut().zip(x) {
        *a = a.add(&b.scale_rational(c));
    }
}

pub(crate) struct GradedConjugation {
    pub series: Graded,
    /// Whether the nested commutators vanished identically (all orders in ε
    /// exact), as opposed to being cut at `max_order`.
    pub terminated: bool,
}

/// Graded `e^{-sQ(ε)} H(ε) e^{sQ(ε)}` where `Q` has no order-0 part.
///
/// With `max_order = Some(K)` only components of order `≤ K` are kept;
/// with `None` the nested series is followed until it vanishes, up to
/// `max_nesting` commutators.
pub(crate) fn graded_conjugate(
    h: &Graded,
    q: &Graded,
    s: &BigRational,
    max_order: Option<usize>,
    max_nesting: usize,
) -> GradedConjugation {
    let cut = |v: Graded| match max_order {
        Some(k) => trim(v.into_iter().take(k + 1).collect()),
        None => v,
    };
    let mut acc = cut(h.clone());
    let mut term = acc.clone();
    let mut coeff = BigRational::one();
    for n in 1..=max_nesting {
        term = cut(graded_commutator(q, &term));
        if term.is_empty() {
            return GradedConjugation { series: trim(acc), terminated: true };
        }
        coeff = coeff * -s / BigRational::from_integer(BigInt::from(n));
        add_scaled(&mut acc, &term, &coeff);
    }
    GradedConjugation { series: trim(acc), terminated: false }
}

pub(crate) fn component(g: &Graded, k: usize) -> OperatorPoly {
    g.get(k).cloned().unwrap_or_else(OperatorPoly::zero)
}
