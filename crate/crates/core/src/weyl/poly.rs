use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::gaussian::GaussianRational;

/// A single normal-ordered term `coeff · x^xpow · p^ppow`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub xpow: u32,
    pub ppow: u32,
    pub coeff: GaussianRational,
}

/// How two polynomials are combined by [`algebra_combine`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineMode {
    Add,
    Multiply,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketKind {
    Commutator,
    Anticommutator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FourierDirection {
    /// `x ↦ −p`, `p ↦ x`.
    Forward,
    /// `x ↦ p`, `p ↦ −x`.
    Inverse,
}

/// A polynomial in `x` and `p` with `[x, p] = i`, kept in normal order
/// (every `x` to the left of every `p`).
///
/// Zero coefficients are never stored, so derived `PartialEq` is operator
/// equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OperatorPoly {
    terms: BTreeMap<(u32, u32), GaussianRational>,
}

fn falling_factorial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, j| acc * BigInt::from(n - j))
}

fn binomial(n: u32, k: u32) -> BigInt {
    falling_factorial(n, k) / falling_factorial(k, k)
}

/// `p^b x^c = Σ_k C(b,k) c!/(c−k)! (−i)^k x^{c−k} p^{b−k}`, the closed form of
/// repeatedly rewriting `p x → x p − i`.
fn reorder_p_x(b: u32, c: u32) -> impl Iterator<Item = (u32, u32, GaussianRational)> {
    (0..=b.min(c)).map(move |k| {
        let n = binomial(b, k) * falling_factorial(c, k);
        // (−i)^k = i^{3k}
        let coeff = GaussianRational::real(BigRational::from_integer(n)).mul_i_pow(3 * k as usize);
        (c - k, b - k, coeff)
    })
}

impl OperatorPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn monomial(xpow: u32, ppow: u32, coeff: GaussianRational) -> Self {
        let mut out = Self::zero();
        out.add_term(xpow, ppow, &coeff);
        out
    }

    pub fn x() -> Self {
        Self::x_pow(1)
    }

    pub fn p() -> Self {
        Self::p_pow(1)
    }

    pub fn x_pow(n: u32) -> Self {
        Self::monomial(n, 0, GaussianRational::one())
    }

    pub fn p_pow(n: u32) -> Self {
        Self::monomial(0, n, GaussianRational::one())
    }

    /// Build from `(xpow, ppow, coeff)` triples; repeated keys are summed.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, GaussianRational)>,
    {
        let mut out = Self::zero();
        for (a, b, c) in terms {
            out.add_term(a, b, &c);
        }
        out
    }

    fn add_term(&mut self, xpow: u32, ppow: u32, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        let key = (xpow, ppow);
        let remove = match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                v.is_zero()
            }
            None => {
                self.terms.insert(key, c.clone());
                false
            }
        };
        if remove {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, xpow: u32, ppow: u32) -> GaussianRational {
        self.terms.get(&(xpow, ppow)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().map(|(&(xpow, ppow), c)| Monomial { xpow, ppow, coeff: c.clone() })
    }

    /// Highest total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).max()
    }

    pub fn x_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn p_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).max()
    }

    /// True when no term contains `x`; the syntactic form of "function of p only".
    pub fn is_p_only(&self) -> bool {
        self.terms.keys().all(|k| k.0 == 0)
    }

    pub fn is_x_only(&self) -> bool {
        self.terms.keys().all(|k| k.1 == 0)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    pub fn scale_rational(&self, q: &BigRational) -> Self {
        self.scale(&GaussianRational::real(q.clone()))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.add_term(a, b, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.add_term(a, b, &-c);
        }
        out
    }

    /// Normal-ordered product `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), c1) in &self.terms {
            for (&(c, d), c2) in &other.terms {
                let base = c1 * c2;
                if b == 0 || c == 0 {
                    out.add_term(a + c, b + d, &base);
                    continue;
                }
                for (xp, pp, k) in reorder_p_x(b, c) {
                    out.add_term(a + xp, pp + d, &(&base * &k));
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        self.mul(other).add(&other.mul(self))
    }

    /// Hermitian adjoint: conjugate coefficients, reverse each monomial
    /// (`x`, `p` individually self-adjoint) and re-normal-order.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), c) in &self.terms {
            let cc = c.conj();
            if a == 0 || b == 0 {
                out.add_term(a, b, &cc);
                continue;
            }
            for (xp, pp, k) in reorder_p_x(b, a) {
                out.add_term(xp, pp, &(&cc * &k));
            }
        }
        out
    }

    pub fn is_hermitian(&self) -> bool {
        self.adjoint() == *self
    }

    pub fn is_anti_hermitian(&self) -> bool {
        self.adjoint() == -self
    }

    /// Evaluate the polynomial with `x` and `p` replaced by the given
    /// operators. This is an algebra homomorphism only when the images
    /// satisfy `[x', p'] = i`.
    pub fn substitute(&self, x_image: &Self, p_image: &Self) -> Self {
        let mut out = Self::zero();
        let mut xpows: Vec<Self> = vec![Self::one()];
        let mut ppows: Vec<Self> = vec![Self::one()];
        for (&(a, b), c) in &self.terms {
            while xpows.len() <= a as usize {
                let next = xpows.last().unwrap().mul(x_image);
                xpows.push(next);
            }
            while ppows.len() <= b as usize {
                let next = ppows.last().unwrap().mul(p_image);
                ppows.push(next);
            }
            let term = xpows[a as usize].mul(&ppows[b as usize]).scale(c);
            out = out.add(&term);
        }
        out
    }

    /// Iterate terms in rendering order: descending total degree, then
    /// descending power of `x`.
    pub fn terms_display_order(&self) -> Vec<Monomial> {
        let mut v: Vec<Monomial> = self.terms().collect();
        v.sort_by(|l, r| {
            (r.xpow + r.ppow).cmp(&(l.xpow + l.ppow)).then(r.xpow.cmp(&l.xpow))
        });
        v
    }
}

/// `scale·a + b` for [`CombineMode::Add`], `scale·(a·b)` for
/// [`CombineMode::Multiply`].
pub fn algebra_combine(
    a: &OperatorPoly,
    b: &OperatorPoly,
    mode: CombineMode,
    scale: &GaussianRational,
) -> OperatorPoly {
    match mode {
        CombineMode::Add => a.scale(scale).add(b),
        CombineMode::Multiply => a.mul(b).scale(scale),
    }
}

pub fn bracket(a: &OperatorPoly, b: &OperatorPoly, kind: BracketKind) -> OperatorPoly {
    match kind {
        BracketKind::Commutator => a.commutator(b),
        BracketKind::Anticommutator => a.anticommutator(b),
    }
}

pub fn adjoint(a: &OperatorPoly) -> OperatorPoly {
    a.adjoint()
}

/// Split into Hermitian and anti-Hermitian parts `(S, A)` with `S + A = a`.
pub fn hermitian_split(a: &OperatorPoly) -> (OperatorPoly, OperatorPoly) {
    let dag = a.adjoint();
    let half = GaussianRational::ratio(1, 2);
    (a.add(&dag).scale(&half), a.sub(&dag).scale(&half))
}

/// Canonical automorphism exchanging position and momentum.
pub fn fourier_map(a: &OperatorPoly, direction: FourierDirection) -> OperatorPoly {
    let (x_img, p_img) = match direction {
        FourierDirection::Forward => (-OperatorPoly::p(), OperatorPoly::x()),
        FourierDirection::Inverse => (OperatorPoly::p(), -OperatorPoly::x()),
    };
    a.substitute(&x_img, &p_img)
}

impl fmt::Display for OperatorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms_display_order()
            .into_iter()
            .map(|m| {
                let mut factors = Vec::new();
                match m.xpow {
                    0 => {}
                    1 => factors.push("x".to_string()),
                    n => factors.push(format!("x^{n}")),
                }
                match m.ppow {
                    0 => {}
                    1 => factors.push("p".to_string()),
                    n => factors.push(format!("p^{n}")),
                }
                if factors.is_empty() {
                    m.coeff.to_string()
                } else if m.coeff.is_one() {
                    factors.join("*")
                } else {
                    format!("{}*{}", m.coeff, factors.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for OperatorPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Neg for OperatorPoly {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(&GaussianRational::from_int(-1))
    }
}

impl Neg for &OperatorPoly {
    type Output = OperatorPoly;
    fn neg(self) -> OperatorPoly {
        self.scale(&GaussianRational::from_int(-1))
    }
}

impl<'a> Add<&'a OperatorPoly> for &'a OperatorPoly {
    type Output = OperatorPoly;
    fn add(self, rhs: &OperatorPoly) -> OperatorPoly {
        OperatorPoly::add(self, rhs)
    }
}

impl<'a> Sub<&'a OperatorPoly> for &'a OperatorPoly {
    type Output = OperatorPoly;
    fn sub(self, rhs: &OperatorPoly) -> OperatorPoly {
        OperatorPoly::sub(self, rhs)
    }
}

impl<'a> Mul<&'a OperatorPoly> for &'a OperatorPoly {
    type Output = OperatorPoly;
    fn mul(self, rhs: &OperatorPoly) -> OperatorPoly {
        OperatorPoly::mul(self, rhs)
    }
}
