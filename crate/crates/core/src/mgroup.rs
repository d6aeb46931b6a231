//! The multiplicative group generated by nonzero eigenvalues, as a finitely
//! generated abelian group.
//!
//! Every eigenvalue is written as `r·e^{2πi·phase}` with `r > 0` rational.
//! Over a common coprime base the positive parts become integer exponent
//! vectors, so relations reduce to an integer kernel plus a congruence on the
//! phases. A negative rational contributes phase `1/2`; this is the only
//! torsion a rational matrix can produce.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{coprime_base, format_rational, rational_serde, CoprimeBase, Rational};
use crate::intlinalg::{congruence_sublattice, kernel, rank, IntMatrix, Lattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("eigenvalue at position {0} is zero")]
    ZeroEigenvalue(usize),
    #[error("no eigenvalues given")]
    Empty,
}

/// User-facing scalar `rational · e^{2πi·phase}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarSpec {
    #[serde(with = "rational_serde")]
    pub rational: Rational,
    #[serde(with = "rational_serde", default = "Rational::zero")]
    pub phase: Rational,
}

impl ScalarSpec {
    pub fn new(rational: Rational, phase: Rational) -> Self {
        ScalarSpec { rational, phase }
    }

    pub fn real(rational: Rational) -> Self {
        Self::new(rational, Rational::zero())
    }
}

/// Reduces into `[0, 1)`.
pub fn reduce_phase(p: &Rational) -> Rational {
    p - p.floor()
}

/// `∏ base_j^{exps_j} · e^{2πi·phase}` over a base fixed by the caller.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolicScalar {
    pub exps: Vec<BigInt>,
    pub phase: Rational,
}

impl SymbolicScalar {
    pub fn new(exps: Vec<BigInt>, phase: &Rational) -> Self {
        SymbolicScalar { exps, phase: reduce_phase(phase) }
    }

    pub fn one(base_len: usize) -> Self {
        Self::new(vec![BigInt::zero(); base_len], &Rational::zero())
    }

    pub fn is_one(&self) -> bool {
        self.phase.is_zero() && self.exps.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &SymbolicScalar) -> Self {
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Self::new(exps, &(&self.phase + &other.phase))
    }

    pub fn pow(&self, k: &BigInt) -> Self {
        let exps = self.exps.iter().map(|e| e * k).collect();
        Self::new(exps, &(&self.phase * Rational::from_integer(k.clone())))
    }

    /// The modulus `∏ base_j^{exps_j}`.
    pub fn modulus(&self, base: &CoprimeBase) -> Rational {
        base.evaluate(&self.exps)
    }

    /// The value when it is real (phase 0 or 1/2).
    pub fn to_real(&self, base: &CoprimeBase) -> Option<Rational> {
        let m = self.modulus(base);
        if self.phase.is_zero() {
            Some(m)
        } else if self.phase == Rational::new(1.into(), 2.into()) {
            Some(-m)
        } else {
            None
        }
    }

    pub fn describe(&self, base: &CoprimeBase) -> String {
        let m = format_rational(&self.modulus(base));
        if self.phase.is_zero() {
            m
        } else {
            format!("{m}*e^(2*pi*i*{})", format_rational(&self.phase))
        }
    }
}

/// `∏ generators_i^{v_i}`.
pub fn evaluate_word(generators: &[SymbolicScalar], base_len: usize, v: &[BigInt]) -> SymbolicScalar {
    generators
        .iter()
        .zip(v)
        .fold(SymbolicScalar::one(base_len), |acc, (g, k)| acc.mul(&g.pow(k)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultGroupData {
    pub base: CoprimeBase,
    pub generators: Vec<SymbolicScalar>,
    pub rank: usize,
    pub torsion_order: BigInt,
    /// `{v ∈ ℤ^n : ∏ generators_i^{v_i} = 1}`.
    pub relation_lattice: Lattice,
    /// Column `i` is the exponent vector of generator `i`.
    pub exponent_matrix: IntMatrix,
}

impl MultGroupData {
    pub fn is_torsion_free(&self) -> bool {
        self.torsion_order.is_one()
    }
}

/// Folds signs into phases and factors every modulus over one coprime base.
pub fn symbolic_scalars(eigs: &[ScalarSpec]) -> Result<(CoprimeBase, Vec<SymbolicScalar>), GroupError> {
    if eigs.is_empty() {
        return Err(GroupError::Empty);
    }
    if let Some(i) = eigs.iter().position(|e| e.rational.is_zero()) {
        return Err(GroupError::ZeroEigenvalue(i));
    }
    let moduli: Vec<Rational> = eigs.iter().map(|e| e.rational.abs()).collect();
    let f = coprime_base(&moduli).expect("nonzero inputs");
    let half = Rational::new(1.into(), 2.into());
    let scalars = eigs
        .iter()
        .zip(f.exps)
        .map(|(e, exps)| {
            let sign = if e.rational.is_negative() { half.clone() } else { Rational::zero() };
            SymbolicScalar::new(exps, &(&e.phase + sign))
        })
        .collect();
    Ok((f.base, scalars))
}

pub fn build_group(eigs: &[ScalarSpec]) -> Result<MultGroupData, GroupError> {
    let (base, scalars) = symbolic_scalars(eigs)?;
    Ok(group_from_symbolic(base, scalars))
}

/// Group data for scalars already written over `base`.
pub fn group_from_symbolic(base: CoprimeBase, generators: Vec<SymbolicScalar>) -> MultGroupData {
    let n = generators.len();
    let cols: Vec<Vec<BigInt>> = generators.iter().map(|g| g.exps.clone()).collect();
    let exponent_matrix = IntMatrix::from_columns(base.len(), &cols);
    let ker = kernel(&exponent_matrix);
    let phases: Vec<Rational> = generators.iter().map(|g| g.phase.clone()).collect();
    let relation_lattice = congruence_sublattice(&ker, &phases).expect("dimensions agree");
    let torsion_order = ker.basis().iter().fold(BigInt::one(), |acc, v| {
        let s: Rational = v.iter().zip(&phases).map(|(k, p)| Rational::from_integer(k.clone()) * p).sum();
        acc.lcm(reduce_phase(&s).denom())
    });
    debug_assert_eq!(relation_lattice.ambient_dim(), n);
    MultGroupData {
        rank: rank(&exponent_matrix),
        base,
        generators,
        torsion_order,
        relation_lattice,
        exponent_matrix,
    }
}

/// The group generated by the `q`-th powers of the generators.
pub fn power_group(g: &MultGroupData, q: u64) -> MultGroupData {
    assert!(q >= 1, "power must be positive");
    let q = BigInt::from(q);
    let gens = g.generators.iter().map(|s| s.pow(&q)).collect();
    group_from_symbolic(g.base.clone(), gens)
}
