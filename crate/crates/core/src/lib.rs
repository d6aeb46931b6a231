//! Exact computation of Zariski closures of cyclic matrix groups and
//! semigroups over the rationals.
//!
//! Given a square rational matrix `M`, [`closure::closure_pipeline`] returns the
//! dimension, the number of irreducible components, the isolated points and the
//! vanishing ideal of the closure of `{M^k}` in the space of `n × n` matrices,
//! together with the toric data of the component through the identity. The
//! building blocks live in their own modules:
//!
//! - [`exact`]: rationals, univariate polynomials, rational matrices, coprime bases
//! - [`intlinalg`]: Hermite/Smith normal forms and integer lattices
//! - [`multipoly`]: multivariate polynomials, Buchberger, ideal operations
//! - [`spectral`]: characteristic polynomial and rational Jordan form
//! - [`mgroup`]: the multiplicative group generated by the eigenvalues
//! - [`toric`]: lattice ideals, toric realization, normalized volumes
//! - [`closure`]: the closure pipeline and its verification oracle

pub mod closure;
pub mod exact;
pub mod intlinalg;
pub mod mgroup;
pub mod multipoly;
pub mod spectral;
pub mod toric;
