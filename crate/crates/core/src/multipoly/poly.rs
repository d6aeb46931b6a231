use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::ring::{Monomial, Ring};
use super::PolyError;
use crate::exact::{format_rational, QMatrix, Rational, UniPoly};

/// Polynomial with rational coefficients. Terms are kept sorted by the ring's
/// order, leading term first, and never carry a zero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ring: Arc<Ring>,
    terms: Vec<(Monomial, Rational)>,
}

impl Poly {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Poly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<Ring>, c: Rational) -> Self {
        Self::from_terms(ring, vec![(Monomial::one(ring.nvars()), c)])
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Self {
        Self::from_terms(ring, vec![(Monomial::var(ring.nvars(), i), Rational::one())])
    }

    /// Variable by name; panics when the ring lacks it.
    pub fn var_named(ring: &Arc<Ring>, name: &str) -> Self {
        let i = ring.var_index(name).unwrap_or_else(|| panic!("no variable {name}"));
        Self::var(ring, i)
    }

    pub fn monomial(ring: &Arc<Ring>, mono: Monomial, c: Rational) -> Self {
        Self::from_terms(ring, vec![(mono, c)])
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(ring: &Arc<Ring>, terms: Vec<(Monomial, Rational)>) -> Self {
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.0.len(), ring.nvars(), "monomial arity does not match ring");
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        let mut terms: Vec<(Monomial, Rational)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| ring.cmp(&b.0, &a.0));
        Poly { ring: ring.clone(), terms }
    }

    /// Trusted constructor: `terms` already sorted and nonzero.
    pub(crate) fn from_sorted(ring: &Arc<Ring>, terms: Vec<(Monomial, Rational)>) -> Self {
        Poly { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub(crate) fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    /// Indices of variables that occur in some term.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.ring.nvars())
            .filter(|&i| self.terms.iter().any(|(m, _)| m.0[i] > 0))
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            Some(lc) if !lc.is_one() => self.scale(&(Rational::one() / lc)),
            _ => self.clone(),
        }
    }

    pub fn mul_term(&self, mono: &Monomial, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        // multiplication by a monomial preserves any monomial order
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.mul(mono), a * c)).collect(),
        }
    }

    /// `self - c·mono·g` by a single merge pass.
    pub(crate) fn sub_scaled(&self, c: &Rational, mono: &Monomial, g: &Poly) -> Self {
        let ring = &self.ring;
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = g.terms.iter().map(|(m, x)| (m.mul(mono), x * c)).peekable();
        loop {
            let ord = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (Some(x), Some(y)) => ring.cmp(&x.0, &y.0),
            };
            match ord {
                Ordering::Greater => out.push(a.next().unwrap().clone()),
                Ordering::Less => {
                    let (m, x) = b.next().unwrap();
                    out.push((m, -x));
                }
                Ordering::Equal => {
                    let (m, x) = a.next().unwrap();
                    let (_, y) = b.next().unwrap();
                    let d = x - y;
                    if !d.is_zero() {
                        out.push((m.clone(), d));
                    }
                }
            }
        }
        Poly { ring: ring.clone(), terms: out }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.ring.nvars(), "evaluation point arity");
        let mut sum = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    v *= num_traits::pow(x.clone(), e as usize);
                }
            }
            sum += v;
        }
        sum
    }

    /// Same polynomial viewed in a ring with the same variables and another order.
    pub fn reorder(&self, ring: &Arc<Ring>) -> Self {
        assert!(self.ring.same_vars(ring), "reorder needs identical variables");
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| ring.cmp(&b.0, &a.0));
        Poly { ring: ring.clone(), terms }
    }

    /// Renames variables into `target`: variable `i` of `self` becomes variable
    /// `mapping[i]` of `target`.
    pub fn map_vars(&self, target: &Arc<Ring>, mapping: &[usize]) -> Self {
        assert_eq!(mapping.len(), self.ring.nvars());
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0; target.nvars()];
                for (i, &k) in m.0.iter().enumerate() {
                    e[mapping[i]] += k;
                }
                (Monomial(e), c.clone())
            })
            .collect();
        Poly::from_terms(target, terms)
    }

    /// Moves the polynomial to `target` by matching variable names. Fails if a
    /// variable that actually occurs is missing from `target`.
    pub fn to_ring(&self, target: &Arc<Ring>) -> Result<Self, PolyError> {
        let support = self.support_vars();
        let mut mapping = vec![0; self.ring.nvars()];
        for (i, name) in self.ring.vars().iter().enumerate() {
            match target.var_index(name) {
                Some(k) => mapping[i] = k,
                None if !support.contains(&i) => mapping[i] = usize::MAX,
                None => return Err(PolyError::UnknownVariable(name.clone())),
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0; target.nvars()];
                for (i, &k) in m.0.iter().enumerate() {
                    if k > 0 {
                        e[mapping[i]] += k;
                    }
                }
                (Monomial(e), c.clone())
            })
            .collect();
        Ok(Poly::from_terms(target, terms))
    }

    /// Substitutes `images[i]` for variable `i`; the result lives in the ring of the images.
    pub fn substitute(&self, images: &[Poly]) -> Result<Self, PolyError> {
        if images.len() != self.ring.nvars() {
            return Err(PolyError::DimensionMismatch { expected: self.ring.nvars(), found: images.len() });
        }
        let target = match images.first() {
            Some(p) => p.ring.clone(),
            None => self.ring.clone(),
        };
        if images.iter().any(|p| *p.ring != *target) {
            return Err(PolyError::RingMismatch);
        }
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(&target), p.clone()]).collect();
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
            }
            for (mm, cc) in term.terms {
                *acc.entry(mm).or_insert_with(Rational::zero) += cc;
            }
        }
        Ok(Poly::from_terms(&target, acc.into_iter().collect()))
    }

    /// Embeds a univariate polynomial as a polynomial in variable `var`.
    pub fn from_unipoly(ring: &Arc<Ring>, var: usize, p: &UniPoly) -> Self {
        let terms = p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut e = vec![0; ring.nvars()];
                e[var] = i as u32;
                (Monomial(e), c.clone())
            })
            .collect();
        Poly::from_terms(ring, terms)
    }
}

/// Replaces every variable `x_i` by the linear form `Σ_j S[i][j]·x_j`.
pub fn substitute_linear(f: &Poly, s: &QMatrix) -> Result<Poly, PolyError> {
    let n = f.ring.nvars();
    if !s.is_square() || s.rows() != n {
        return Err(PolyError::DimensionMismatch { expected: n, found: s.rows() });
    }
    let images: Vec<Poly> = (0..n)
        .map(|i| {
            let terms = (0..n).map(|j| (Monomial::var(n, j), s[(i, j)].clone())).collect();
            Poly::from_terms(&f.ring, terms)
        })
        .collect();
    f.substitute(&images)
}

fn merge(a: &Poly, b: &Poly, negate_b: bool) -> Poly {
    assert!(*a.ring == *b.ring, "arithmetic across different rings");
    let ring = &a.ring;
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    while i < a.terms.len() || j < b.terms.len() {
        let ord = if i == a.terms.len() {
            Ordering::Less
        } else if j == b.terms.len() {
            Ordering::Greater
        } else {
            ring.cmp(&a.terms[i].0, &b.terms[j].0)
        };
        match ord {
            Ordering::Greater => {
                out.push(a.terms[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let (m, c) = &b.terms[j];
                out.push((m.clone(), if negate_b { -c } else { c.clone() }));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { &a.terms[i].1 - &b.terms[j].1 } else { &a.terms[i].1 + &b.terms[j].1 };
                if !c.is_zero() {
                    out.push((a.terms[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    Poly { ring: ring.clone(), terms: out }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        merge(self, rhs, false)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        merge(self, rhs, true)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert!(*self.ring == *rhs.ring, "arithmetic across different rings");
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Poly::from_terms(&self.ring, acc.into_iter().collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let abs = c.abs();
            let factors: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let v = &self.ring.vars()[i];
                    if e == 1 {
                        v.clone()
                    } else {
                        format!("{v}^{e}")
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};
    use crate::multipoly::{parse_poly, MonomialOrder};

    fn ring4() -> Arc<Ring> {
        Ring::new(["x", "y", "z", "w"], MonomialOrder::Lex)
    }

    #[test]
    fn arithmetic_and_display() {
        let r = ring4();
        let x = Poly::var(&r, 0);
        let y = Poly::var(&r, 1);
        let h = &(&x * &x) - &y;
        assert_eq!(h.to_string(), "x^2 - y");
        let p = (&x + &y).pow(2);
        assert_eq!(p.to_string(), "x^2 + 2*x*y + y^2");
        assert_eq!(p.scale(&ratio(-3, 2)).to_string(), "-3/2*x^2 - 3*x*y - 3/2*y^2");
        assert!((&p - &p).is_zero());
        assert_eq!(Poly::constant(&r, rat(-1)).to_string(), "-1");
    }

    #[test]
    fn substitute_identity() {
        let r = ring4();
        let x = Poly::var(&r, 0);
        assert_eq!(substitute_linear(&x, &QMatrix::identity(4)).unwrap(), x);
        assert!(substitute_linear(&x, &QMatrix::identity(3)).is_err());
    }

    #[test]
    fn substitute_example_conjugation() {
        // coordinates [[x, w], [z, y]] transformed by X -> P^{-1} X P with P = [[1,4],[1,3]]
        let r = ring4();
        let phi = QMatrix::from_ints(&[
            &[-3, 4, 4, -3],
            &[4, -3, -4, 3],
            &[1, -1, -1, 1],
            &[-12, 12, 16, -9],
        ]);
        let h = parse_poly("x^2 - y", &r).unwrap();
        let expected = parse_poly("(-3*x+4*y+4*z-3*w)^2 - (4*x-3*y-4*z+3*w)", &r).unwrap();
        assert_eq!(substitute_linear(&h, &phi).unwrap(), expected);
        let z = parse_poly("z", &r).unwrap();
        assert_eq!(substitute_linear(&z, &phi).unwrap(), parse_poly("x - y - z + w", &r).unwrap());
    }

    #[test]
    fn eval_and_reorder() {
        let r = ring4();
        let p = parse_poly("x*y^4 - z^3 + 1/2", &r).unwrap();
        assert_eq!(p.eval(&[rat(2), rat(1), rat(1), rat(0)]), ratio(3, 2));
        let g = p.reorder(&r.with_order(MonomialOrder::GrevLex));
        assert_eq!(g.leading_monomial().unwrap().0, vec![1, 4, 0, 0]);
        assert_eq!(g.eval(&[rat(2), rat(1), rat(1), rat(0)]), ratio(3, 2));
    }

    proptest::proptest! {
        #[test]
        fn linear_substitution_inverts(
            coeffs in proptest::collection::vec(-3i64..4, 6),
            upper in proptest::collection::vec(-2i64..3, 6),
        ) {
            let r = ring4();
            let vars: Vec<Poly> = (0..4).map(|i| Poly::var(&r, i)).collect();
            let f = &(&(&vars[0] * &vars[1]).scale(&rat(coeffs[0])) + &vars[2].pow(2).scale(&rat(coeffs[1])))
                + &(&vars[3].scale(&rat(coeffs[2])) + &Poly::constant(&r, rat(coeffs[3])));
            let mut s = QMatrix::identity(4);
            let mut k = 0;
            for i in 0..4 {
                for j in i + 1..4 {
                    s[(i, j)] = rat(upper[k]);
                    k += 1;
                }
            }
            s[(3, 0)] = rat(coeffs[4]);
            s[(0, 0)] = rat(coeffs[5].abs() + 1);
            if let Ok(inv) = s.inverse() {
                let g = substitute_linear(&f, &s).unwrap();
                // f(S x) followed by x -> S^{-1} x gives back f
                let back = substitute_linear(&g, &inv).unwrap();
                proptest::prop_assert_eq!(back, f);
            }
        }
    }
}
