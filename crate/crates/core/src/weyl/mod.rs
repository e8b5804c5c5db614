//! Exact Weyl-algebra arithmetic: polynomials in `x` and `p` with
//! `[x, p] = i` over Gaussian-rational coefficients.

mod gaussian;
mod poly;

pub use gaussian::{parse_rational, GaussianRational};
pub use poly::{
    adjoint, algebra_combine, bracket, fourier_map, hermitian_split, BracketKind, CombineMode,
    FourierDirection, Monomial, OperatorPoly,
};
