use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::rational::Rational;
use super::ExactError;

/// Pairwise coprime integers greater than one, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoprimeBase(Vec<BigInt>);

impl CoprimeBase {
    pub fn elements(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `∏ base_j^{exps_j}` as a positive rational.
    pub fn evaluate(&self, exps: &[BigInt]) -> Rational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (b, e) in self.0.iter().zip(exps) {
            let k = e.abs().try_into().expect("exponent fits in u32");
            let p = num_traits::pow(b.clone(), k);
            if e.is_negative() {
                den *= p;
            } else {
                num *= p;
            }
        }
        Rational::new(num, den)
    }

    /// Exponent vector of a positive rational whose numerator and denominator
    /// factor over this base; `None` otherwise.
    pub fn exponents_of(&self, x: &Rational) -> Option<Vec<BigInt>> {
        if !x.is_positive() {
            return None;
        }
        let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
        let mut exps = Vec::with_capacity(self.0.len());
        for b in &self.0 {
            let mut e = 0i64;
            while (&num % b).is_zero() {
                num /= b;
                e += 1;
            }
            while (&den % b).is_zero() {
                den /= b;
                e -= 1;
            }
            exps.push(BigInt::from(e));
        }
        (num.is_one() && den.is_one()).then_some(exps)
    }
}

/// Every input written as `sign · ∏ base_j^{exps[i][j]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoprimeFactorization {
    pub base: CoprimeBase,
    /// One row per input, one column per base element.
    pub exps: Vec<Vec<BigInt>>,
    /// `true` where the input is negative.
    pub negative: Vec<bool>,
}

/// Refines `items` into a pairwise coprime set whose products recover every
/// original item. Splits any pair with a nontrivial gcd until none remains;
/// each split strictly lowers the product of the set, so this terminates.
fn refine(mut items: Vec<BigInt>) -> Vec<BigInt> {
    items.retain(|x| !x.is_one());
    items.sort();
    items.dedup();
    loop {
        let mut split = None;
        'outer: for i in 0..items.len() {
            for j in i + 1..items.len() {
                let g = items[i].gcd(&items[j]);
                if !g.is_one() {
                    split = Some((i, j, g));
                    break 'outer;
                }
            }
        }
        let Some((i, j, g)) = split else { break };
        let a = &items[i] / &g;
        let b = &items[j] / &g;
        items.remove(j);
        items.remove(i);
        items.extend([g, a, b]);
        items.retain(|x| !x.is_one());
        items.sort();
        items.dedup();
    }
    items
}

/// Factors nonzero rationals over a common pairwise coprime base built by gcd
/// refinement of their numerators and denominators. No integer factorization
/// is performed.
pub fn coprime_base(xs: &[Rational]) -> Result<CoprimeFactorization, ExactError> {
    if let Some(i) = xs.iter().position(Zero::is_zero) {
        return Err(ExactError::ZeroInput(i));
    }
    let raw = xs
        .iter()
        .flat_map(|x| [x.numer().abs(), x.denom().clone()])
        .collect();
    let base = CoprimeBase(refine(raw));
    let mut exps = Vec::with_capacity(xs.len());
    for x in xs {
        let e = base
            .exponents_of(&x.abs())
            .expect("refined base must factor every input");
        exps.push(e);
    }
    Ok(CoprimeFactorization {
        base,
        exps,
        negative: xs.iter().map(|x| x.is_negative()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn reconstruct(f: &CoprimeFactorization, i: usize) -> Rational {
        let v = f.base.evaluate(&f.exps[i]);
        if f.negative[i] {
            -v
        } else {
            v
        }
    }

    #[test]
    fn powers_of_two() {
        let f = coprime_base(&[rat(2), rat(4)]).unwrap();
        assert_eq!(f.base.elements(), ints(&[2]).as_slice());
        assert_eq!(f.exps, vec![ints(&[1]), ints(&[2])]);
        assert_eq!(f.negative, vec![false, false]);
    }

    #[test]
    fn unit_has_empty_base() {
        let f = coprime_base(&[rat(1)]).unwrap();
        assert!(f.base.is_empty());
        assert_eq!(f.exps, vec![Vec::<BigInt>::new()]);
    }

    #[test]
    fn six_and_ten() {
        let xs = [rat(6), rat(10)];
        let f = coprime_base(&xs).unwrap();
        assert_eq!(f.base.elements(), ints(&[2, 3, 5]).as_slice());
        for (i, x) in xs.iter().enumerate() {
            assert_eq!(&reconstruct(&f, i), x);
        }
    }

    #[test]
    fn zero_is_rejected() {
        assert_eq!(coprime_base(&[rat(3), rat(0)]), Err(ExactError::ZeroInput(1)));
    }

    #[test]
    fn signs_and_fractions() {
        let xs = [ratio(-8, 3), rat(3), ratio(1, 5), rat(-1)];
        let f = coprime_base(&xs).unwrap();
        assert_eq!(f.negative, vec![true, false, false, true]);
        for (i, x) in xs.iter().enumerate() {
            assert_eq!(&reconstruct(&f, i), x);
        }
    }

    proptest::proptest! {
        #[test]
        fn round_trip_and_pairwise_coprime(
            xs in proptest::collection::vec((-500i64..500, 1i64..200), 1..6)
        ) {
            let xs: Vec<Rational> = xs
                .into_iter()
                .map(|(n, d)| if n == 0 { ratio(1, d) } else { ratio(n, d) })
                .collect();
            let f = coprime_base(&xs).unwrap();
            let b = f.base.elements();
            for i in 0..b.len() {
                proptest::prop_assert!(b[i] > BigInt::one());
                for j in i + 1..b.len() {
                    proptest::prop_assert!(b[i].gcd(&b[j]).is_one());
                }
            }
            for (i, x) in xs.iter().enumerate() {
                proptest::prop_assert_eq!(&reconstruct(&f, i), x);
            }
        }
    }
}
