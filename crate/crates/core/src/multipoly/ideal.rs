use std::sync::{Arc, OnceLock};

use super::groebner::{groebner_basis, reduce, DEFAULT_BASIS_BUDGET};
use super::poly::Poly;
use super::ring::{MonomialOrder, Ring};
use super::PolyError;

/// Ideal given by generators, with a lazily computed reduced Gröbner basis
/// for the ring's order. The cache is write-once.
#[derive(Debug, Clone)]
pub struct Ideal {
    ring: Arc<Ring>,
    generators: Vec<Poly>,
    budget: usize,
    basis: OnceLock<Vec<Poly>>,
}

impl Ideal {
    pub fn new(ring: &Arc<Ring>, generators: Vec<Poly>) -> Self {
        for g in &generators {
            assert!(**g.ring() == **ring, "generator from a different ring");
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal { ring: ring.clone(), generators, budget: DEFAULT_BASIS_BUDGET, basis: OnceLock::new() }
    }

    pub fn zero(ring: &Arc<Ring>) -> Self {
        Self::new(ring, Vec::new())
    }

    pub fn unit(ring: &Arc<Ring>) -> Self {
        Self::new(ring, vec![Poly::one(ring)])
    }

    /// Overrides the Gröbner budget (number of polynomials per run).
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self.basis = OnceLock::new();
        self
    }

    fn derived(&self, ring: &Arc<Ring>, generators: Vec<Poly>) -> Ideal {
        Ideal::new(ring, generators).with_budget(self.budget)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Reduced Gröbner basis for the ring's own order (cached).
    pub fn groebner_basis(&self) -> Result<&[Poly], PolyError> {
        if let Some(b) = self.basis.get() {
            return Ok(b);
        }
        let b = groebner_basis(&self.generators, self.budget)?;
        Ok(self.basis.get_or_init(|| b))
    }

    /// Reduced Gröbner basis for an arbitrary order.
    pub fn buchberger(&self, order: MonomialOrder) -> Result<Vec<Poly>, PolyError> {
        if order == self.ring.order() {
            return Ok(self.groebner_basis()?.to_vec());
        }
        let ring = self.ring.with_order(order);
        let gens: Vec<Poly> = self.generators.iter().map(|g| g.reorder(&ring)).collect();
        groebner_basis(&gens, self.budget)
    }

    /// The same ideal in the ring with another order, generated by its reduced
    /// basis for that order.
    pub fn with_order(&self, order: MonomialOrder) -> Result<Ideal, PolyError> {
        let ring = self.ring.with_order(order);
        let basis = self.buchberger(order)?;
        let out = self.derived(&ring, basis.clone());
        let _ = out.basis.set(basis);
        Ok(out)
    }

    pub fn normal_form(&self, f: &Poly) -> Result<Poly, PolyError> {
        if **f.ring() != *self.ring {
            return Err(PolyError::RingMismatch);
        }
        Ok(reduce(f, self.groebner_basis()?))
    }

    pub fn contains(&self, f: &Poly) -> Result<bool, PolyError> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool, PolyError> {
        for g in other.generators() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_unit(&self) -> Result<bool, PolyError> {
        Ok(self.groebner_basis()?.first().is_some_and(|g| g.is_constant()))
    }

    pub fn is_zero(&self) -> Result<bool, PolyError> {
        Ok(self.groebner_basis()?.is_empty())
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal, PolyError> {
        if *self.ring != *other.ring {
            return Err(PolyError::RingMismatch);
        }
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Ok(self.derived(&self.ring, gens))
    }

    /// Every polynomial vanishes at `point`.
    pub fn vanishes_at(&self, point: &[crate::exact::Rational]) -> bool {
        use num_traits::Zero;
        self.generators.iter().all(|g| g.eval(point).is_zero())
    }

    /// `I ∩ ℚ[remaining variables]`, computed with a block elimination order.
    /// The result lives in the ring of the remaining variables (same order tag).
    pub fn eliminate(&self, drop: &[usize]) -> Result<Ideal, PolyError> {
        let n = self.ring.nvars();
        if let Some(&bad) = drop.iter().find(|&&i| i >= n) {
            return Err(PolyError::DimensionMismatch { expected: n, found: bad });
        }
        let keep: Vec<usize> = (0..n).filter(|i| !drop.contains(i)).collect();
        let kept_ring = Ring::new(keep.iter().map(|&i| self.ring.vars()[i].clone()), self.ring.order());
        if drop.is_empty() {
            return Ok(self.clone());
        }
        let dropped: Vec<usize> = (0..n).filter(|i| drop.contains(i)).collect();
        let mut mapping = vec![0; n];
        let mut names = Vec::with_capacity(n);
        for (pos, &i) in dropped.iter().chain(keep.iter()).enumerate() {
            mapping[i] = pos;
            names.push(self.ring.vars()[i].clone());
        }
        let elim_ring = Ring::new(names, MonomialOrder::Block(dropped.len()));
        let gens: Vec<Poly> = self.generators.iter().map(|g| g.map_vars(&elim_ring, &mapping)).collect();
        let basis = groebner_basis(&gens, self.budget)?;
        let k = dropped.len();
        let mut out = Vec::new();
        for g in basis {
            if g.terms().iter().all(|(m, _)| m.0[..k].iter().all(|&e| e == 0)) {
                let terms = g
                    .terms()
                    .iter()
                    .map(|(m, c)| (super::Monomial(m.0[k..].to_vec()), c.clone()))
                    .collect();
                out.push(Poly::from_terms(&kept_ring, terms));
            }
        }
        Ok(self.derived(&kept_ring, out))
    }

    /// Eliminates variables by name.
    pub fn eliminate_named(&self, names: &[&str]) -> Result<Ideal, PolyError> {
        let idx = names
            .iter()
            .map(|n| self.ring.var_index(n).ok_or_else(|| PolyError::UnknownVariable(n.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        self.eliminate(&idx)
    }

    /// Extends the ring by one fresh variable (appended last) and returns the
    /// extended ring, the fresh variable, and this ideal's generators in it.
    fn extend_with_fresh(&self, prefix: &str) -> (Arc<Ring>, Poly, Vec<Poly>) {
        let fresh = self.ring.fresh_name(prefix);
        let mut names: Vec<String> = self.ring.vars().to_vec();
        names.push(fresh);
        let ext = Ring::new(names, self.ring.order());
        let mapping: Vec<usize> = (0..self.ring.nvars()).collect();
        let gens = self.generators.iter().map(|g| g.map_vars(&ext, &mapping)).collect();
        let t = Poly::var(&ext, self.ring.nvars());
        (ext, t, gens)
    }

    /// Saturation `(I : f^∞)` via `I + ⟨t·f − 1⟩` with `t` eliminated.
    pub fn saturate(&self, f: &Poly) -> Result<Ideal, PolyError> {
        if **f.ring() != *self.ring {
            return Err(PolyError::RingMismatch);
        }
        assert!(!f.is_zero(), "saturation by the zero polynomial");
        if f.is_constant() {
            return Ok(self.clone());
        }
        let (ext, t, mut gens) = self.extend_with_fresh("sat");
        let mapping: Vec<usize> = (0..self.ring.nvars()).collect();
        let fe = f.map_vars(&ext, &mapping);
        gens.push(&(&t * &fe) - &Poly::one(&ext));
        let tmp = self.derived(&ext, gens);
        let out = tmp.eliminate(&[self.ring.nvars()])?;
        // eliminate() builds a fresh ring with identical variables and order
        let gens = out.generators.iter().map(|g| g.to_ring(&self.ring)).collect::<Result<Vec<_>, _>>()?;
        Ok(self.derived(&self.ring, gens))
    }

    /// Intersection via `t·I + (1 − t)·J` with `t` eliminated.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal, PolyError> {
        if !self.ring.same_vars(&other.ring) {
            return Err(PolyError::RingMismatch);
        }
        if self.is_unit()? {
            return Ok(other.reordered(&self.ring));
        }
        if other.is_unit()? {
            return Ok(self.clone());
        }
        let (ext, t, gens_i) = self.extend_with_fresh("tau");
        let mapping: Vec<usize> = (0..self.ring.nvars()).collect();
        let one_minus_t = &Poly::one(&ext) - &t;
        let mut gens: Vec<Poly> = gens_i.iter().map(|g| &t * g).collect();
        gens.extend(other.generators.iter().map(|g| &one_minus_t * &g.map_vars(&ext, &mapping)));
        let tmp = self.derived(&ext, gens);
        let out = tmp.eliminate(&[self.ring.nvars()])?;
        let gens = out.generators.iter().map(|g| g.to_ring(&self.ring)).collect::<Result<Vec<_>, _>>()?;
        Ok(self.derived(&self.ring, gens))
    }

    fn reordered(&self, ring: &Arc<Ring>) -> Ideal {
        self.derived(ring, self.generators.iter().map(|g| g.reorder(ring)).collect())
    }

    /// Moves the ideal into a ring containing all of its variables (by name).
    pub fn to_ring(&self, ring: &Arc<Ring>) -> Result<Ideal, PolyError> {
        let gens = self.generators.iter().map(|g| g.to_ring(ring)).collect::<Result<Vec<_>, _>>()?;
        Ok(self.derived(ring, gens))
    }

    /// Reduced lex basis; the canonical form used for equality.
    pub fn canonical_basis(&self) -> Result<Vec<Poly>, PolyError> {
        self.buchberger(MonomialOrder::Lex)
    }
}

/// Equality of ideals by comparison of reduced lex Gröbner bases.
pub fn ideal_equal(a: &Ideal, b: &Ideal) -> Result<bool, PolyError> {
    if !a.ring.same_vars(&b.ring) {
        return Err(PolyError::RingMismatch);
    }
    let ba = a.canonical_basis()?;
    let bb = b.canonical_basis()?;
    Ok(ba.len() == bb.len() && ba.iter().zip(&bb).all(|(x, y)| x.terms() == y.terms()))
}

impl PartialEq for Ideal {
    /// Structural equality of ring and generators (not ideal equality).
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.generators == other.generators
    }
}
