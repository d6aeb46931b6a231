use num_traits::One;

use super::poly::Poly;
use super::ring::Monomial;
use super::PolyError;
use crate::exact::Rational;

/// Largest number of polynomials a single Buchberger run may create before
/// giving up with [`PolyError::BudgetExceeded`].
pub const DEFAULT_BASIS_BUDGET: usize = 5000;

fn find_divisor<'a>(m: &Monomial, basis: &[&'a Poly]) -> Option<&'a Poly> {
    basis
        .iter()
        .filter(|g| g.leading_monomial().is_some_and(|lm| lm.divides(m)))
        .min_by_key(|g| g.len())
        .copied()
}

fn reduce_by(f: &Poly, basis: &[&Poly]) -> Poly {
    let ring = f.ring().clone();
    let mut rem: Vec<(Monomial, Rational)> = Vec::new();
    let mut p = f.clone();
    while let Some((lm, lc)) = p.terms().first().cloned() {
        match find_divisor(&lm, basis) {
            Some(g) => {
                let c = &lc / g.leading_coeff().unwrap();
                let mono = lm.div(g.leading_monomial().unwrap());
                p = p.sub_scaled(&c, &mono, g);
            }
            None => {
                let mut terms = p.into_terms();
                let lead = terms.remove(0);
                rem.push(lead);
                p = Poly::from_sorted(&ring, terms);
            }
        }
    }
    Poly::from_sorted(&ring, rem)
}

/// Full normal form of `f` modulo the polynomials in `basis`. When `basis` is
/// a Gröbner basis the result is the unique remainder, zero iff `f` lies in
/// the ideal.
pub fn reduce(f: &Poly, basis: &[Poly]) -> Poly {
    let refs: Vec<&Poly> = basis.iter().filter(|g| !g.is_zero()).collect();
    reduce_by(f, &refs)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

struct Engine {
    polys: Vec<Poly>,
    sugar: Vec<u32>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
    budget: usize,
}

impl Engine {
    fn lm(&self, i: usize) -> &Monomial {
        self.polys[i].leading_monomial().unwrap()
    }

    fn active_refs(&self) -> Vec<&Poly> {
        self.active.iter().map(|&i| &self.polys[i]).collect()
    }

    fn pair_sugar(&self, i: usize, j: usize, lcm: &Monomial) -> u32 {
        let d = lcm.degree();
        (self.sugar[i] + d - self.lm(i).degree()).max(self.sugar[j] + d - self.lm(j).degree())
    }

    /// Adds `h` to the basis and updates the pair set with the Gebauer–Möller
    /// criteria (product criterion plus chain criterion).
    fn insert(&mut self, h: Poly, sugar: u32) -> Result<(), PolyError> {
        if self.polys.len() >= self.budget {
            return Err(PolyError::BudgetExceeded(self.budget));
        }
        let h_idx = self.polys.len();
        self.polys.push(h);
        self.sugar.push(sugar);
        let h_lm = self.lm(h_idx).clone();

        let candidates: Vec<(usize, Monomial)> =
            self.active.iter().map(|&g| (g, h_lm.lcm(self.lm(g)))).collect();
        let mut kept: Vec<(usize, Monomial)> = Vec::new();
        for (k, (g1, l1)) in candidates.iter().enumerate() {
            let coprime = h_lm.coprime(self.lm(*g1));
            let dominated = candidates[k + 1..].iter().any(|(_, l2)| l2.divides(l1))
                || kept.iter().any(|(_, l2)| l2.divides(l1));
            if coprime || !dominated {
                kept.push((*g1, l1.clone()));
            }
        }
        let fresh: Vec<(usize, Monomial)> =
            kept.into_iter().filter(|(g, _)| !h_lm.coprime(self.lm(*g))).collect();

        let polys = &self.polys;
        let lm = |i: usize| polys[i].leading_monomial().unwrap();
        self.pairs.retain(|p| {
            !(h_lm.divides(&p.lcm) && lm(p.i).lcm(&h_lm) != p.lcm && h_lm.lcm(lm(p.j)) != p.lcm)
        });
        for (g, l) in fresh {
            let s = self.pair_sugar(g, h_idx, &l);
            self.pairs.push(Pair { i: g, j: h_idx, lcm: l, sugar: s });
        }
        let polys = &self.polys;
        self.active.retain(|&g| !h_lm.divides(polys[g].leading_monomial().unwrap()));
        self.active.push(h_idx);
        Ok(())
    }

    fn next_pair(&mut self) -> Option<Pair> {
        let ring = self.polys.first()?.ring().clone();
        let best = (0..self.pairs.len()).min_by(|&a, &b| {
            let (pa, pb) = (&self.pairs[a], &self.pairs[b]);
            pa.sugar
                .cmp(&pb.sugar)
                .then_with(|| ring.cmp(&pa.lcm, &pb.lcm))
                .then_with(|| (pa.i, pa.j).cmp(&(pb.i, pb.j)))
        })?;
        Some(self.pairs.swap_remove(best))
    }

    fn s_poly(&self, p: &Pair) -> Poly {
        let (f, g) = (&self.polys[p.i], &self.polys[p.j]);
        let mf = p.lcm.div(f.leading_monomial().unwrap());
        let mg = p.lcm.div(g.leading_monomial().unwrap());
        let left = f.mul_term(&mf, &Rational::one());
        left.sub_scaled(&Rational::one(), &mg, g)
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens` with respect to the
/// order of their ring: monic, inter-reduced and sorted by increasing leading
/// monomial, so equal ideals yield identical output. The zero ideal gives an
/// empty basis and the unit ideal gives `[1]`.
pub fn groebner_basis(gens: &[Poly], budget: usize) -> Result<Vec<Poly>, PolyError> {
    let Some(first) = gens.iter().find(|g| !g.is_zero()) else {
        return Ok(Vec::new());
    };
    let ring = first.ring().clone();
    if gens.iter().any(|g| *g.ring() != ring) {
        return Err(PolyError::RingMismatch);
    }
    let mut input: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).map(Poly::monic).collect();
    if input.iter().any(Poly::is_constant) {
        return Ok(vec![Poly::one(&ring)]);
    }
    input.sort_by(|a, b| {
        ring.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap())
            .then_with(|| a.len().cmp(&b.len()))
    });

    let mut eng = Engine { polys: Vec::new(), sugar: Vec::new(), active: Vec::new(), pairs: Vec::new(), budget };
    for f in input {
        let h = reduce_by(&f, &eng.active_refs());
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(vec![Poly::one(&ring)]);
        }
        let s = f.total_degree();
        eng.insert(h.monic(), s)?;
    }

    while let Some(pair) = eng.next_pair() {
        let s = eng.s_poly(&pair);
        let h = reduce_by(&s, &eng.active_refs());
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(vec![Poly::one(&ring)]);
        }
        eng.insert(h.monic(), pair.sugar)?;
    }

    let mut basis: Vec<Poly> = eng.active.iter().map(|&i| eng.polys[i].clone()).collect();
    basis.sort_by(|a, b| ring.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    for k in 0..basis.len() {
        let others: Vec<&Poly> = basis.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, p)| p).collect();
        let lead = basis[k].terms()[0].clone();
        let tail = Poly::from_sorted(&ring, basis[k].terms()[1..].to_vec());
        let tail = reduce_by(&tail, &others);
        let mut terms = vec![lead];
        terms.extend(tail.into_terms());
        basis[k] = Poly::from_sorted(&ring, terms).monic();
    }
    Ok(basis)
}
