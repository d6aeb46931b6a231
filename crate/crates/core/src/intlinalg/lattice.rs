use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::matrix::IntMatrix;
use super::normal_form::{hnf, kernel};
use super::LatticeError;
use crate::exact::Rational;

/// A sublattice of `ℤ^ambient_dim`, stored by its Hermite-normal-form basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    ambient_dim: usize,
    basis: Vec<Vec<BigInt>>,
}

impl Lattice {
    pub fn zero(ambient_dim: usize) -> Self {
        Lattice { ambient_dim, basis: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::from_generators(ambient_dim, &IntMatrix::identity(ambient_dim).to_rows())
    }

    /// Lattice spanned by arbitrary (possibly dependent) generators.
    pub fn from_generators(ambient_dim: usize, gens: &[Vec<BigInt>]) -> Self {
        let (h, _) = hnf(&IntMatrix::from_rows(ambient_dim, gens));
        let basis = h
            .to_rows()
            .into_iter()
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .collect();
        Lattice { ambient_dim, basis }
    }

    pub fn from_i64(ambient_dim: usize, gens: &[&[i64]]) -> Self {
        let gens: Vec<Vec<BigInt>> = gens.iter().map(|g| g.iter().map(|&x| x.into()).collect()).collect();
        Self::from_generators(ambient_dim, &gens)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.ambient_dim, &self.basis)
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>, LatticeError> {
        if v.len() != self.ambient_dim {
            return Err(LatticeError::DimensionMismatch { expected: self.ambient_dim, found: v.len() });
        }
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.basis.len());
        for b in &self.basis {
            let p = b.iter().position(|x| !x.is_zero()).expect("basis rows are nonzero");
            let (q, r) = rest[p].div_rem(&b[p]);
            if !r.is_zero() {
                return Ok(None);
            }
            if !q.is_zero() {
                for (x, y) in rest.iter_mut().zip(b) {
                    *x -= &q * y;
                }
            }
            coords.push(q);
        }
        Ok(rest.iter().all(Zero::is_zero).then_some(coords))
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool, LatticeError> {
        Ok(self.coordinates(v)?.is_some())
    }

    pub fn is_sublattice_of(&self, other: &Lattice) -> Result<bool, LatticeError> {
        for b in &self.basis {
            if !other.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Index `[other : self]` when `self ⊆ other` with equal rank; `None` otherwise.
    pub fn index_in(&self, other: &Lattice) -> Result<Option<BigInt>, LatticeError> {
        if self.rank() != other.rank() {
            return Ok(None);
        }
        let mut rows = Vec::with_capacity(self.rank());
        for b in &self.basis {
            match other.coordinates(b)? {
                Some(c) => rows.push(c),
                None => return Ok(None),
            }
        }
        Ok(Some(IntMatrix::from_rows(self.rank(), &rows).det().abs()))
    }

    /// The saturation `(ℚ·L) ∩ ℤ^n`.
    pub fn saturation(&self) -> Lattice {
        let orth = kernel(&self.basis_matrix());
        kernel(&orth.basis_matrix())
    }
}

impl Serialize for Lattice {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<serde_json::Value>> = self
            .basis
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| match x.to_i64() {
                        Some(v) => serde_json::Value::from(v),
                        None => serde_json::Value::from(x.to_string()),
                    })
                    .collect()
            })
            .collect();
        rows.serialize(s)
    }
}

/// True iff the two lattices coincide (comparison of canonical bases).
pub fn lattice_equal(a: &Lattice, b: &Lattice) -> Result<bool, LatticeError> {
    if a.ambient_dim != b.ambient_dim {
        return Err(LatticeError::DimensionMismatch { expected: a.ambient_dim, found: b.ambient_dim });
    }
    Ok(a.basis == b.basis)
}

/// `{v ∈ L : Σ v_i·phases_i ≡ 0 (mod 1)}`.
///
/// Writing `v = Σ c_j b_j`, the condition becomes the congruence
/// `Σ c_j t_j ≡ 0 (mod D)` with `D` the common denominator of the phases and
/// `t_j = D·(b_j · phases)`. Its solutions are the projections of the integer
/// kernel of the row `[t_1 … t_k  D]`.
pub fn congruence_sublattice(l: &Lattice, phases: &[Rational]) -> Result<Lattice, LatticeError> {
    if phases.len() != l.ambient_dim {
        return Err(LatticeError::DimensionMismatch { expected: l.ambient_dim, found: phases.len() });
    }
    let den = phases.iter().fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
    if den.is_one() || l.rank() == 0 {
        return Ok(l.clone());
    }
    let scaled: Vec<BigInt> = phases
        .iter()
        .map(|p| (p * Rational::from_integer(den.clone())).to_integer())
        .collect();
    let mut row: Vec<BigInt> = l
        .basis
        .iter()
        .map(|b| b.iter().zip(&scaled).map(|(x, y)| x * y).sum::<BigInt>().mod_floor(&den))
        .collect();
    row.push(den);
    let k = l.rank();
    let sol = kernel(&IntMatrix::from_rows(k + 1, &[row]));
    let gens: Vec<Vec<BigInt>> = sol
        .basis()
        .iter()
        .map(|s| {
            (0..l.ambient_dim)
                .map(|i| (0..k).map(|j| &s[j] * &l.basis[j][i]).sum())
                .collect()
        })
        .collect();
    let sub = Lattice::from_generators(l.ambient_dim, &gens);
    debug_assert!(sub.basis.iter().all(|b| b.iter().zip(phases).map(|(x, p)| p * Rational::from_integer(x.clone())).sum::<Rational>().is_integer()));
    Ok(sub)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::intlinalg::kernel;
    use proptest::prelude::*;

    #[test]
    fn equality_examples() {
        let a = Lattice::from_i64(2, &[&[2, -1]]);
        let b = Lattice::from_i64(2, &[&[-2, 1]]);
        assert!(lattice_equal(&a, &b).unwrap());
        let c = Lattice::from_i64(2, &[&[1, 0]]);
        let d = Lattice::from_i64(2, &[&[2, 0]]);
        assert!(!lattice_equal(&c, &d).unwrap());
        let k = kernel(&IntMatrix::from_i64(&[&[3, 0, 1], &[-1, 1, 1]]));
        assert!(lattice_equal(&Lattice::from_i64(3, &[&[1, 4, -3]]), &k).unwrap());
        assert!(lattice_equal(&a, &Lattice::zero(3)).is_err());
    }

    #[test]
    fn congruence_examples() {
        let l = Lattice::from_i64(2, &[&[1, 0]]);
        let sub = congruence_sublattice(&l, &[ratio(1, 2), ratio(0, 1)]).unwrap();
        assert_eq!(sub, Lattice::from_i64(2, &[&[2, 0]]));

        let any = Lattice::from_i64(3, &[&[1, 2, 0], &[0, 3, 1]]);
        let zero = vec![Rational::zero(); 3];
        assert_eq!(congruence_sublattice(&any, &zero).unwrap(), any);

        let l = Lattice::from_i64(1, &[&[1]]);
        let sub = congruence_sublattice(&l, &[ratio(1, 4)]).unwrap();
        assert_eq!(sub, Lattice::from_i64(1, &[&[4]]));
    }

    #[test]
    fn congruence_brute_force() {
        // (-1)^a = 1 iff a even; i^k = 1 iff 4 | k
        let l = Lattice::from_i64(2, &[&[1, 0]]);
        let sub = congruence_sublattice(&l, &[ratio(1, 2), ratio(0, 1)]).unwrap();
        for a in -8i64..=8 {
            let v = [BigInt::from(a), BigInt::zero()];
            assert_eq!(sub.contains(&v).unwrap(), a % 2 == 0);
        }
        let l = Lattice::from_i64(1, &[&[1]]);
        let sub = congruence_sublattice(&l, &[ratio(1, 4)]).unwrap();
        for k in 0i64..=8 {
            assert_eq!(sub.contains(&[BigInt::from(k)]).unwrap(), k % 4 == 0);
        }
    }

    #[test]
    fn index_and_saturation() {
        let big = Lattice::from_i64(2, &[&[1, 0], &[0, 1]]);
        let small = Lattice::from_i64(2, &[&[2, 0], &[0, 3]]);
        assert_eq!(small.index_in(&big).unwrap(), Some(BigInt::from(6)));
        assert_eq!(big.index_in(&small).unwrap(), None);
        assert_eq!(Lattice::from_i64(2, &[&[2, 4]]).saturation(), Lattice::from_i64(2, &[&[1, 2]]));
    }

    fn lattice_strategy() -> impl Strategy<Value = Lattice> {
        (1usize..4).prop_flat_map(|d| {
            proptest::collection::vec(proptest::collection::vec(-4i64..5, d), 0..4).prop_map(move |gens| {
                let gens: Vec<Vec<BigInt>> = gens.into_iter().map(|g| g.into_iter().map(BigInt::from).collect()).collect();
                Lattice::from_generators(d, &gens)
            })
        })
    }

    proptest! {
        #[test]
        fn equality_is_an_equivalence(l in lattice_strategy(), shuffle in proptest::collection::vec(-2i64..3, 9)) {
            // a unimodular change of basis (upper unitriangular) gives an equal lattice
            let b = l.basis().to_vec();
            let mut changed = b.clone();
            for i in 0..b.len() {
                for j in i + 1..b.len() {
                    let c = BigInt::from(shuffle[(i * 3 + j) % shuffle.len()]);
                    for k in 0..l.ambient_dim() {
                        changed[i][k] += &c * &b[j][k];
                    }
                }
            }
            let l2 = Lattice::from_generators(l.ambient_dim(), &changed);
            prop_assert!(lattice_equal(&l, &l).unwrap());
            prop_assert_eq!(lattice_equal(&l, &l2).unwrap(), lattice_equal(&l2, &l).unwrap());
            prop_assert!(lattice_equal(&l, &l2).unwrap());
            let l3 = Lattice::from_generators(l.ambient_dim(), &l2.basis().iter().rev().cloned().collect::<Vec<_>>());
            prop_assert!(lattice_equal(&l2, &l3).unwrap() && lattice_equal(&l, &l3).unwrap());
        }

        #[test]
        fn congruence_matches_brute_force(l in lattice_strategy(), ps in proptest::collection::vec(0i64..6, 3)) {
            let d = l.ambient_dim();
            let phases: Vec<Rational> = ps[..d].iter().map(|&p| ratio(p, 6)).collect();
            let sub = congruence_sublattice(&l, &phases).unwrap();
            prop_assert!(sub.is_sublattice_of(&l).unwrap());
            // every small combination of the parent basis is in sub iff it satisfies the congruence
            let k = l.rank();
            let range: Vec<i64> = (-3..=3).collect();
            let mut idx = vec![0usize; k];
            loop {
                let v: Vec<BigInt> = (0..d)
                    .map(|i| (0..k).map(|j| BigInt::from(range[idx[j]]) * &l.basis()[j][i]).sum())
                    .collect();
                let s: Rational = v.iter().zip(&phases).map(|(x, p)| p * Rational::from_integer(x.clone())).sum();
                prop_assert_eq!(sub.contains(&v).unwrap(), s.is_integer());
                let mut pos = 0;
                while pos < k {
                    idx[pos] += 1;
                    if idx[pos] < range.len() { break; }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == k { break; }
            }
        }
    }
}
