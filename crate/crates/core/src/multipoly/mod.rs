//! Multivariate polynomials over the rationals and the ideal toolbox built
//! on a Buchberger Gröbner engine: normal forms, membership, elimination,
//! saturation, intersection and equality.
//!
//! Polynomials print and parse in a plain ASCII grammar:
//!
//! ```text
//! poly   := ["-"] term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*      (division by constants only)
//! factor := atom ["^" integer]
//! atom   := integer | identifier | "(" poly ")"
//! ```
//!
//! e.g. `3/2*x_1_2^2*x_2_2 - 1`. Matrix entries are named `x_<row>_<col>`
//! (1-indexed); parameters use `t`, `s_i`, `z_i`.

mod groebner;
mod ideal;
mod parse;
mod poly;
mod ring;

pub use groebner::{groebner_basis, reduce, DEFAULT_BASIS_BUDGET};
pub use ideal::{ideal_equal, Ideal};
pub use parse::parse_poly;
pub use poly::{substitute_linear, Poly};
pub use ring::{Monomial, MonomialOrder, Ring};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials live in different rings")]
    RingMismatch,
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("Gröbner basis exceeded the budget of {0} polynomials")]
    BudgetExceeded(usize),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
