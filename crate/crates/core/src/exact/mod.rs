//! Exact arithmetic: rationals, dense univariate polynomials, rational
//! matrices and coprime-base factorization of finite sets of rationals.

mod coprime;
mod matrix;
mod rational;
mod unipoly;

pub use coprime::{coprime_base, CoprimeBase, CoprimeFactorization};
pub use matrix::QMatrix;
pub use rational::{format_rational, parse_rational, rat, rational_serde, ratio, Integer, Rational};
pub use unipoly::{rational_roots, RationalRoots, UniPoly};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("zero input at position {0}")]
    ZeroInput(usize),
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("matrix dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
}
