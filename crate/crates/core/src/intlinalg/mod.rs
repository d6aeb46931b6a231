//! Exact integer linear algebra: Hermite and Smith normal forms, integer
//! kernels and lattices.
//!
//! Hermite normal form convention (used throughout the crate): row-style,
//! `H = U·M` with `U` unimodular, `H` in row echelon form with zero rows at the
//! bottom, positive pivots, and every entry above a pivot reduced into
//! `[0, pivot)`. Lattices store their basis as the nonzero rows of this form,
//! which makes the stored basis canonical.

mod lattice;
mod matrix;
mod normal_form;

pub use lattice::{congruence_sublattice, lattice_equal, Lattice};
pub use matrix::IntMatrix;
pub use normal_form::{hnf, is_hnf, kernel, rank, smith_invariants};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
}
