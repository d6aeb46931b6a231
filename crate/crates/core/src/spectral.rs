//! Characteristic polynomials, rational Jordan forms with an explicit basis,
//! the semisimple/unipotent factorization and the nilpotent/invertible split.
//!
//! Jordan blocks are stored in the standard form: eigenvalue on the diagonal,
//! `1` on the superdiagonal. The unipotent factor of an invertible block
//! `λ·I + N` is `I + λ⁻¹·N`, built by [`unipotent_block`].

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact::{rational_roots, rational_serde, QMatrix, Rational, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("characteristic polynomial does not split over the rationals (irreducible part {cofactor}); use symbolic-diagonal mode")]
    EigenvaluesNotRational { cofactor: UniPoly },
    #[error("matrix has eigenvalue 0")]
    SingularInput,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JordanBlockSpec {
    #[serde(with = "rational_serde")]
    pub eigenvalue: Rational,
    pub size: usize,
}

impl JordanBlockSpec {
    pub fn new(eigenvalue: Rational, size: usize) -> Self {
        assert!(size >= 1, "Jordan block of size 0");
        JordanBlockSpec { eigenvalue, size }
    }
}

/// A Jordan decomposition `M = P·J·P⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanData {
    pub blocks: Vec<JordanBlockSpec>,
    pub p: QMatrix,
    pub p_inv: QMatrix,
    /// Largest nilpotent block, 0 when `M` is invertible.
    pub nu: usize,
}

impl JordanData {
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.size).sum()
    }

    pub fn jordan_matrix(&self) -> QMatrix {
        jordan_matrix(&self.blocks)
    }

    /// First coordinate of every block, in block order.
    pub fn block_offsets(&self) -> Vec<usize> {
        block_offsets(&self.blocks)
    }

    pub fn eigenvalues(&self) -> Vec<Rational> {
        self.blocks
            .iter()
            .flat_map(|b| std::iter::repeat_n(b.eigenvalue.clone(), b.size))
            .collect()
    }
}

pub fn block_offsets(blocks: &[JordanBlockSpec]) -> Vec<usize> {
    let mut at = 0;
    blocks
        .iter()
        .map(|b| {
            let o = at;
            at += b.size;
            o
        })
        .collect()
}

/// Block-diagonal matrix of standard Jordan blocks.
pub fn jordan_matrix(blocks: &[JordanBlockSpec]) -> QMatrix {
    let n = blocks.iter().map(|b| b.size).sum();
    let mut j = QMatrix::zeros(n, n);
    for (b, off) in blocks.iter().zip(block_offsets(blocks)) {
        for i in 0..b.size {
            j[(off + i, off + i)] = b.eigenvalue.clone();
            if i + 1 < b.size {
                j[(off + i, off + i + 1)] = Rational::one();
            }
        }
    }
    j
}

/// `m × m` matrix with `1` on the diagonal and `lambda` on the superdiagonal.
pub fn unipotent_block(m: usize, lambda: &Rational) -> QMatrix {
    let mut u = QMatrix::identity(m);
    for i in 0..m.saturating_sub(1) {
        u[(i, i + 1)] = lambda.clone();
    }
    u
}

pub fn char_poly(m: &QMatrix) -> Result<UniPoly, SpectralError> {
    m.char_poly().map_err(|_| SpectralError::NotSquare)
}

/// Eigenvalues with algebraic multiplicities, ascending.
pub fn rational_eigenvalues(m: &QMatrix) -> Result<Vec<(Rational, usize)>, SpectralError> {
    let cp = char_poly(m)?;
    let roots = rational_roots(&cp);
    if roots.cofactor.degree().unwrap_or(0) > 0 {
        return Err(SpectralError::EigenvaluesNotRational { cofactor: roots.cofactor });
    }
    Ok(roots.roots.into_iter().collect())
}

fn columns_matrix(n: usize, cols: &[Vec<Rational>]) -> QMatrix {
    let mut out = QMatrix::zeros(n, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            out[(i, j)] = x.clone();
        }
    }
    out
}

fn span_rank(n: usize, vecs: &[Vec<Rational>]) -> usize {
    if vecs.is_empty() {
        0
    } else {
        columns_matrix(n, vecs).rank()
    }
}

/// Jordan chains for one eigenvalue: returns (size, columns) per block with
/// sizes descending. Columns run from the eigenvector up to the chain top.
fn chains_for(m: &QMatrix, lambda: &Rational, mult: usize) -> Vec<(usize, Vec<Vec<Rational>>)> {
    let n = m.rows();
    let a = m.sub(&QMatrix::identity(n).scale(lambda));
    // powers[k] = A^k, ranks[k] = rank(A^k), until the rank stabilizes at n - mult
    let mut powers = vec![QMatrix::identity(n)];
    let mut ranks = vec![n];
    while *ranks.last().unwrap() > n - mult {
        let next = &a * powers.last().unwrap();
        ranks.push(next.rank());
        powers.push(next);
    }
    let top = ranks.len() - 1;
    let at_least = |k: usize| -> usize {
        // number of blocks of size >= k
        if k == 0 || k > top {
            0
        } else {
            ranks[k - 1] - ranks[k]
        }
    };

    let mut chosen: Vec<(usize, Vec<Rational>)> = Vec::new();
    for s in (1..=top).rev() {
        let exact = at_least(s) - at_least(s + 1);
        if exact == 0 {
            continue;
        }
        let mut span: Vec<Vec<Rational>> = if s > 1 { powers[s - 1].kernel() } else { Vec::new() };
        for (size, v) in &chosen {
            span.push(powers[size - s].mul_vec(v));
        }
        let mut rank = span_rank(n, &span);
        let mut picked = 0;
        for v in powers[s].kernel() {
            if picked == exact {
                break;
            }
            span.push(v.clone());
            let r = span_rank(n, &span);
            if r > rank {
                rank = r;
                picked += 1;
                chosen.push((s, v));
            } else {
                span.pop();
            }
        }
        assert_eq!(picked, exact, "chain tops must exist for every block");
    }
    chosen
        .into_iter()
        .map(|(s, v)| {
            let cols = (0..s).map(|i| powers[s - 1 - i].mul_vec(&v)).collect();
            (s, cols)
        })
        .collect()
}

/// Rational Jordan form `M = P·J·P⁻¹`, blocks sorted by eigenvalue ascending
/// and then size descending. The reconstruction is checked before returning.
pub fn jordan(m: &QMatrix) -> Result<JordanData, SpectralError> {
    if !m.is_square() {
        return Err(SpectralError::NotSquare);
    }
    let n = m.rows();
    let eigs = rational_eigenvalues(m)?;
    let mut blocks = Vec::new();
    let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for (lambda, mult) in &eigs {
        for (size, chain) in chains_for(m, lambda, *mult) {
            blocks.push(JordanBlockSpec::new(lambda.clone(), size));
            cols.extend(chain);
        }
    }
    let p = columns_matrix(n, &cols);
    let p_inv = p.inverse().expect("Jordan basis must be invertible");
    let data = JordanData {
        nu: blocks.iter().filter(|b| b.eigenvalue.is_zero()).map(|b| b.size).max().unwrap_or(0),
        blocks,
        p,
        p_inv,
    };
    assert_eq!(&(&data.p * &data.jordan_matrix()) * &data.p_inv, *m, "Jordan reconstruction failed");
    Ok(data)
}

/// Semisimple and unipotent factors of an invertible Jordan matrix, both in
/// Jordan coordinates: `J = S·U = U·S`.
pub fn su_decompose(blocks: &[JordanBlockSpec]) -> Result<(QMatrix, QMatrix), SpectralError> {
    if blocks.iter().any(|b| b.eigenvalue.is_zero()) {
        return Err(SpectralError::SingularInput);
    }
    let n = blocks.iter().map(|b| b.size).sum();
    let mut s = QMatrix::zeros(n, n);
    let mut u = QMatrix::zeros(n, n);
    for (b, off) in blocks.iter().zip(block_offsets(blocks)) {
        let ub = unipotent_block(b.size, &b.eigenvalue.recip());
        for i in 0..b.size {
            s[(off + i, off + i)] = b.eigenvalue.clone();
            for j in 0..b.size {
                u[(off + i, off + j)] = ub[(i, j)].clone();
            }
        }
    }
    Ok((s, u))
}

/// Jordan blocks separated by whether the eigenvalue is 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilpotentSplit {
    pub nilpotent: Vec<JordanBlockSpec>,
    pub invertible: Vec<JordanBlockSpec>,
    /// `permutation[k]` is the Jordan coordinate placed at position `k` in the
    /// block-diagonal shape `diag(N, M₁)`.
    pub permutation: Vec<usize>,
}

pub fn split_nilpotent(blocks: &[JordanBlockSpec]) -> NilpotentSplit {
    let mut nilpotent = Vec::new();
    let mut invertible = Vec::new();
    let mut front = Vec::new();
    let mut back = Vec::new();
    for (b, off) in blocks.iter().zip(block_offsets(blocks)) {
        let coords = off..off + b.size;
        if b.eigenvalue.is_zero() {
            nilpotent.push(b.clone());
            front.extend(coords);
        } else {
            invertible.push(b.clone());
            back.extend(coords);
        }
    }
    front.extend(back);
    NilpotentSplit { nilpotent, invertible, permutation: front }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn block(l: Rational, s: usize) -> JordanBlockSpec {
        JordanBlockSpec::new(l, s)
    }

    #[test]
    fn char_poly_examples() {
        let m = QMatrix::from_ints(&[&[10, -8], &[6, -4]]);
        assert_eq!(char_poly(&m).unwrap(), UniPoly::from_ints(&[8, -6, 1]));
        let id = QMatrix::identity(3);
        assert_eq!(char_poly(&id).unwrap(), UniPoly::linear(&rat(1)).pow(3));
        let t = QMatrix::from_ints(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 2]]);
        assert_eq!(char_poly(&t).unwrap(), UniPoly::from_ints(&[0, 0, -2, 1]));
        assert_eq!(char_poly(&QMatrix::zeros(2, 3)), Err(SpectralError::NotSquare));
    }

    #[test]
    fn jordan_of_diagonalizable_two_by_two() {
        let m = QMatrix::from_ints(&[&[10, -8], &[6, -4]]);
        let j = jordan(&m).unwrap();
        assert_eq!(j.blocks, vec![block(rat(2), 1), block(rat(4), 1)]);
        assert_eq!(j.nu, 0);
        // one admissible change of basis
        let p = QMatrix::from_ints(&[&[1, 4], &[1, 3]]);
        let d = QMatrix::diagonal(&[rat(2), rat(4)]);
        assert_eq!(&(&p * &d) * &p.inverse().unwrap(), m);
    }

    #[test]
    fn jordan_of_jordan_block_is_itself() {
        let blocks = vec![block(ratio(1, 5), 4)];
        let m = jordan_matrix(&blocks);
        let j = jordan(&m).unwrap();
        assert_eq!(j.blocks, blocks);
        assert_eq!(j.p, QMatrix::identity(4));
    }

    #[test]
    fn jordan_with_nilpotent_part() {
        let m = QMatrix::from_ints(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 2]]);
        assert_eq!(m.pow(2), QMatrix::diagonal(&[rat(0), rat(0), rat(4)]));
        let j = jordan(&m).unwrap();
        assert_eq!(j.blocks, vec![block(rat(0), 2), block(rat(2), 1)]);
        assert_eq!(j.nu, 2);
        let split = split_nilpotent(&j.blocks);
        assert_eq!(split.nilpotent, vec![block(rat(0), 2)]);
        assert_eq!(split.invertible, vec![block(rat(2), 1)]);
        assert_eq!(split.permutation, vec![0, 1, 2]);
    }

    #[test]
    fn non_rational_eigenvalues_rejected() {
        let m = QMatrix::from_ints(&[&[0, -1], &[1, 0]]);
        match jordan(&m) {
            Err(SpectralError::EigenvaluesNotRational { cofactor }) => {
                assert_eq!(cofactor, UniPoly::from_ints(&[1, 0, 1]))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn su_examples() {
        let (s, u) = su_decompose(&[block(ratio(1, 5), 4)]).unwrap();
        assert_eq!(s, QMatrix::identity(4).scale(&ratio(1, 5)));
        assert_eq!(u, unipotent_block(4, &rat(5)));

        let d = [block(rat(3), 1), block(rat(-2), 1)];
        let (s, u) = su_decompose(&d).unwrap();
        assert_eq!(s, jordan_matrix(&d));
        assert_eq!(u, QMatrix::identity(2));

        let b = [block(rat(2), 2)];
        let (s, u) = su_decompose(&b).unwrap();
        assert_eq!(s, QMatrix::diagonal(&[rat(2), rat(2)]));
        assert_eq!(u, QMatrix::from_rows(vec![vec![rat(1), ratio(1, 2)], vec![rat(0), rat(1)]]).unwrap());
        assert_eq!(&s * &u, jordan_matrix(&b));

        assert_eq!(su_decompose(&[block(rat(0), 1)]), Err(SpectralError::SingularInput));
    }

    #[test]
    fn split_edge_cases() {
        let inv = [block(rat(1), 2), block(rat(3), 1)];
        let s = split_nilpotent(&inv);
        assert!(s.nilpotent.is_empty());
        assert_eq!(s.permutation, vec![0, 1, 2]);
        let nil = [block(rat(0), 2), block(rat(0), 1)];
        let s = split_nilpotent(&nil);
        assert!(s.invertible.is_empty());
        assert_eq!(s.permutation, vec![0, 1, 2]);
        let mixed = [block(rat(-1), 1), block(rat(0), 2)];
        assert_eq!(split_nilpotent(&mixed).permutation, vec![1, 2, 0]);
    }

    fn binom(k: u64, r: u64) -> BigInt {
        (0..r).fold(BigInt::one(), |acc, i| acc * BigInt::from(k - i)) / (1..=r).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
    }

    fn arb_blocks() -> impl Strategy<Value = Vec<JordanBlockSpec>> {
        proptest::collection::vec((-2i64..3, 1usize..4), 1..4)
            .prop_map(|bs| bs.into_iter().map(|(l, s)| block(rat(l), s)).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn unipotent_powers_are_binomial(m in 1usize..6, num in -4i64..5, den in 1i64..4, k in 0u64..11) {
            let lambda = ratio(num, den);
            let a = unipotent_block(m, &lambda).pow(k);
            for i in 0..m {
                for j in 0..m {
                    let want = if j < i {
                        Rational::zero()
                    } else {
                        let d = (j - i) as u64;
                        Rational::from_integer(if d > k { BigInt::zero() } else { binom(k, d) }) * num_traits::pow(lambda.clone(), j - i)
                    };
                    prop_assert_eq!(&a[(i, j)], &want);
                }
            }
            // r! a_{1,r+1} is a falling product in a_{12}
            for r in 1..m {
                let fact = Rational::from_integer((1..=r as u64).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)));
                let prod = (0..r).fold(Rational::one(), |acc, i| acc * (&a[(0, 1)] - rat(i as i64) * &lambda));
                prop_assert_eq!(fact * &a[(0, r)], prod);
            }
        }

        #[test]
        fn jordan_reconstructs_conjugated_forms(
            blocks in arb_blocks(),
            seed in proptest::collection::vec(-2i64..3, 81),
        ) {
            let j = jordan_matrix(&blocks);
            let n = j.rows();
            let mut g = QMatrix::identity(n);
            for i in 0..n {
                for k in 0..n {
                    if i < k { g[(i, k)] = rat(seed[i * 9 + k]); }
                }
            }
            let mut h = QMatrix::identity(n);
            for i in 0..n {
                for k in 0..i { h[(i, k)] = rat(seed[k * 9 + i]); }
            }
            let g = &g * &h;
            let m = &(&g * &j) * &g.inverse().unwrap();
            let data = jordan(&m).unwrap();
            prop_assert_eq!(&(&data.p * &data.jordan_matrix()) * &data.p_inv, m.clone());
            prop_assert_eq!(&data.p * &data.p_inv, QMatrix::identity(n));
            let mut want = blocks.clone();
            want.sort_by(|a, b| a.eigenvalue.cmp(&b.eigenvalue).then(b.size.cmp(&a.size)));
            prop_assert_eq!(&data.blocks, &want);
            // block counts follow the rank sequence
            for (lambda, _) in rational_eigenvalues(&m).unwrap() {
                let a = m.sub(&QMatrix::identity(n).scale(&lambda));
                for k in 1..=n {
                    let count = data.blocks.iter().filter(|b| b.eigenvalue == lambda && b.size >= k).count();
                    prop_assert_eq!(count, a.pow(k as u64 - 1).rank() - a.pow(k as u64).rank());
                }
            }
        }

        #[test]
        fn su_factors_commute(blocks in arb_blocks()) {
            let blocks: Vec<_> = blocks.into_iter().filter(|b| !b.eigenvalue.is_zero()).collect();
            prop_assume!(!blocks.is_empty());
            let (s, u) = su_decompose(&blocks).unwrap();
            prop_assert_eq!(&s * &u, jordan_matrix(&blocks));
            prop_assert_eq!(&u * &s, jordan_matrix(&blocks));
        }
    }
}
