//! Independent checks of a reported ideal: exact evaluation at powers of the
//! generator, and for symbolic eigenvalues, evaluation in a cyclotomic field.

use std::collections::BTreeMap;

use num_integer::Integer as _;
use num_traits::{One, ToPrimitive, Zero};

use super::{flatten, ClosureError, ClosureReport, Mode};
use crate::exact::{QMatrix, Rational, UniPoly};
use crate::mgroup::{symbolic_scalars, ScalarSpec, SymbolicScalar};
use crate::multipoly::{Ideal, Poly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PowerPoint {
    Power(i64),
    Isolated(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub at: PowerPoint,
    pub generator: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    Pass { points: usize },
    Fail(Counterexample),
}

impl OracleVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, OracleVerdict::Pass { .. })
    }
}

fn exponents(k: usize, mode: Mode) -> Vec<i64> {
    let k = k as i64;
    match mode {
        Mode::Semigroup => (1..=k).collect(),
        Mode::Group => (-k..=k).collect(),
    }
}

/// Evaluates every generator of the reported ideal at `M^k` for
/// `k = 1..=K` (and `k = 0, −1, …, −K` in group mode), then at every isolated
/// point.
/// `m` must be given in the report's coordinates.
pub fn verify_oracle(m: &QMatrix, report: &ClosureReport, k: usize, mode: Mode) -> Result<OracleVerdict, ClosureError> {
    verify_ideal(m, &report.ideal, &report.isolated_points, k, mode)
}

/// [`verify_oracle`] for an ideal and isolated points given directly.
pub fn verify_ideal(
    m: &QMatrix,
    ideal: &Ideal,
    isolated: &[QMatrix],
    k: usize,
    mode: Mode,
) -> Result<OracleVerdict, ClosureError> {
    let gens = ideal.generators();
    let mut checked = 0;
    let check = |point: &QMatrix, at: PowerPoint| -> Option<Counterexample> {
        let flat = flatten(point);
        gens.iter()
            .find(|g| !g.eval(&flat).is_zero())
            .map(|g| Counterexample { at, generator: g.to_string() })
    };
    let mut powers: Vec<(i64, QMatrix)> = Vec::new();
    let mut acc = QMatrix::identity(m.rows());
    for e in 1..=k as i64 {
        acc = &acc * m;
        powers.push((e, acc.clone()));
    }
    if mode == Mode::Group {
        let inv = m.inverse().map_err(|_| ClosureError::SingularInverse)?;
        powers.push((0, QMatrix::identity(m.rows())));
        let mut acc = QMatrix::identity(m.rows());
        for e in 1..=k as i64 {
            acc = &acc * &inv;
            powers.push((-e, acc.clone()));
        }
    }
    for (e, point) in &powers {
        if let Some(c) = check(point, PowerPoint::Power(*e)) {
            return Ok(OracleVerdict::Fail(c));
        }
        checked += 1;
    }
    for (i, p) in isolated.iter().enumerate() {
        if let Some(c) = check(p, PowerPoint::Isolated(i)) {
            return Ok(OracleVerdict::Fail(c));
        }
        checked += 1;
    }
    Ok(OracleVerdict::Pass { points: checked })
}

/// `Φ_d` for every divisor `d` of `n` (memoized by the caller's map).
fn cyclotomic(n: u64, memo: &mut BTreeMap<u64, UniPoly>) -> UniPoly {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut coeffs = vec![Rational::zero(); n as usize + 1];
    coeffs[0] = -Rational::one();
    coeffs[n as usize] = Rational::one();
    let mut p = UniPoly::new(coeffs);
    for d in 1..n {
        if n.is_multiple_of(d) {
            let (q, r) = p.div_rem(&cyclotomic(d, memo));
            debug_assert!(r.is_zero());
            p = q;
        }
    }
    memo.insert(n, p.clone());
    p
}

/// Value of `g` at `diag(a_1^k, …, a_n^k)` as an element of `ℚ[ζ]/Φ_D`.
fn eval_at_diagonal(g: &Poly, powers: &[SymbolicScalar], base: &crate::exact::CoprimeBase, d: u64, phi: &UniPoly) -> UniPoly {
    let n = powers.len();
    let mut acc = vec![Rational::zero(); d as usize];
    'terms: for (mono, c) in g.terms() {
        let mut value = SymbolicScalar::one(base.len());
        for (idx, &e) in mono.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let (i, j) = (idx / n, idx % n);
            if i != j {
                continue 'terms;
            }
            value = value.mul(&powers[i].pow(&e.into()));
        }
        let slot = (&value.phase * Rational::from_integer(d.into())).to_integer().to_usize().unwrap();
        acc[slot] += c * value.modulus(base);
    }
    UniPoly::new(acc).div_rem(phi).1
}

/// Symbolic analogue of [`verify_oracle`] for `diag(eigs)`, exact in the
/// cyclotomic field containing every phase.
pub fn verify_symbolic_orbit(eigs: &[ScalarSpec], report: &ClosureReport, k: usize, mode: Mode) -> Result<OracleVerdict, ClosureError> {
    let (base, scalars) = symbolic_scalars(eigs)?;
    let d = scalars.iter().fold(num_bigint::BigInt::one(), |acc, s| acc.lcm(s.phase.denom()));
    let d = d.to_u64().ok_or(ClosureError::TorsionTooLarge)?;
    let phi = cyclotomic(d, &mut BTreeMap::new());
    let mut checked = 0;
    for e in exponents(k, mode) {
        let powers: Vec<SymbolicScalar> = scalars.iter().map(|s| s.pow(&e.into())).collect();
        for g in report.ideal.generators() {
            if !eval_at_diagonal(g, &powers, &base, d, &phi).is_zero() {
                return Ok(OracleVerdict::Fail(Counterexample { at: PowerPoint::Power(e), generator: g.to_string() }));
            }
        }
        checked += 1;
    }
    Ok(OracleVerdict::Pass { points: checked })
}
