#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use zclosure::exact::{rat, ratio, QMatrix, Rational};
use zclosure::spectral::{jordan_matrix, JordanBlockSpec};

/// Eigenvalue pool for random Jordan data.
pub fn eigen_pool() -> Vec<Rational> {
    vec![rat(1), rat(-1), rat(2), rat(-2), rat(3), rat(-3), ratio(1, 2), ratio(1, 5), rat(0)]
}

/// Random Jordan blocks of total size `n` from `pool`, never the zero matrix.
pub fn random_blocks<R: Rng>(rng: &mut R, n: usize, pool: &[Rational]) -> Vec<JordanBlockSpec> {
    loop {
        let mut left = n;
        let mut blocks = Vec::new();
        while left > 0 {
            let size = rng.gen_range(1..=left.min(3));
            left -= size;
            blocks.push(JordanBlockSpec::new(pool.choose(rng).unwrap().clone(), size));
        }
        if blocks.iter().any(|b| !b.eigenvalue.is_zero() || b.size > 1) {
            return blocks;
        }
    }
}

/// Product of random lower and upper unitriangular integer matrices.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> QMatrix {
    let mut l = QMatrix::identity(n);
    let mut u = QMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            if i > j {
                l[(i, j)] = rat(rng.gen_range(-1..=1));
            } else if i < j {
                u[(i, j)] = rat(rng.gen_range(-1..=1));
            }
        }
    }
    &l * &u
}

pub fn conjugate(p: &QMatrix, blocks: &[JordanBlockSpec]) -> QMatrix {
    &(p * &jordan_matrix(blocks)) * &p.inverse().unwrap()
}

/// Exponents of `|x|` over the primes 2, 3, 5 (all pool values factor there).
fn small_prime_exponents(x: &Rational) -> Vec<Rational> {
    let mut out = Vec::new();
    let (mut num, mut den) = (x.numer().abs(), x.denom().clone());
    for p in [2u32, 3, 5] {
        let p = BigInt::from(p);
        let mut e = 0i64;
        while (&num % &p).is_zero() {
            num /= &p;
            e += 1;
        }
        while (&den % &p).is_zero() {
            den /= &p;
            e -= 1;
        }
        out.push(rat(e));
    }
    assert!(num.is_one() && den.is_one(), "value {x} outside the 2-3-5 pool");
    out
}

/// Counts predicted from Jordan data alone: (isolated points, dimension, components).
pub struct Predicted {
    pub nu: usize,
    pub isolated: usize,
    pub dimension: usize,
    pub components: usize,
}

pub fn predict(blocks: &[JordanBlockSpec]) -> Predicted {
    let nu = blocks.iter().filter(|b| b.eigenvalue.is_zero()).map(|b| b.size).max().unwrap_or(0);
    let nonzero: Vec<&JordanBlockSpec> = blocks.iter().filter(|b| !b.eigenvalue.is_zero()).collect();
    if nonzero.is_empty() {
        return Predicted { nu, isolated: nu, dimension: 0, components: 0 };
    }
    let rows: Vec<Vec<Rational>> = nonzero.iter().map(|b| small_prime_exponents(&b.eigenvalue)).collect();
    let rank = QMatrix::from_rows(rows).unwrap().rank();
    // −1 ∈ G iff some small word in the eigenvalues equals −1
    let vals: Vec<Rational> = nonzero.iter().map(|b| b.eigenvalue.clone()).collect();
    let torsion = if word_hits(&vals, &-Rational::one(), 4) { 2 } else { 1 };
    let unipotent = nonzero.iter().any(|b| b.size > 1);
    Predicted { nu, isolated: nu.saturating_sub(1), dimension: rank + usize::from(unipotent), components: torsion }
}

/// Whether `∏ vals_i^{v_i} = target` for some `v ∈ [−bound, bound]^n`.
pub fn word_hits(vals: &[Rational], target: &Rational, bound: i32) -> bool {
    let n = vals.len();
    let mut v = vec![-bound; n];
    loop {
        let value = vals.iter().zip(&v).fold(Rational::one(), |acc, (x, &e)| acc * num_traits::pow::Pow::pow(x, e));
        if &value == target {
            return true;
        }
        let mut i = 0;
        while i < n && v[i] == bound {
            v[i] = -bound;
            i += 1;
        }
        if i == n {
            return false;
        }
        v[i] += 1;
    }
}
