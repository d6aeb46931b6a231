//! The building blocks of a closure in Jordan coordinates: the torus part
//! cut out by the relation lattice, the unipotent curve, and their product.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{matrix_ring, var_name, ClosureError};
use crate::exact::{QMatrix, Rational, UniPoly};
use crate::mgroup::{power_group, MultGroupData};
use crate::multipoly::{substitute_linear, Ideal, MonomialOrder, Poly, Ring};
use crate::spectral::JordanBlockSpec;
use crate::toric::{lattice_ideal, toric_from_points_in, ToricData};

/// Closure of the diagonal part, in one variable per Jordan block.
#[derive(Debug, Clone)]
pub struct SemisimpleClosure {
    pub ring: Arc<Ring>,
    /// Lattice ideal of the full relation lattice.
    pub ideal: Ideal,
    /// Ideals of the cosets `a^i·Y₀`, `i = 0..torsion`, when every generator
    /// is real (otherwise the cosets are not defined over the rationals).
    pub components: Option<Vec<Ideal>>,
    /// `Y₀`, the closure of the torsion-free power group.
    pub toric: ToricData,
}

/// `d_ring` carries one variable per generator of `g`.
pub fn semisimple_closure(g: &MultGroupData, d_ring: &Arc<Ring>) -> Result<SemisimpleClosure, ClosureError> {
    assert_eq!(d_ring.nvars(), g.generators.len());
    let ideal = lattice_ideal(&g.relation_lattice, d_ring)?;
    let q: u64 = (&g.torsion_order).try_into().map_err(|_| ClosureError::TorsionTooLarge)?;
    let y0 = power_group(g, q);
    let points: Vec<Vec<BigInt>> = y0.generators.iter().map(|s| s.exps.clone()).collect();
    let toric = toric_from_points_in(&points, d_ring)?;

    let reals: Option<Vec<Rational>> = g.generators.iter().map(|s| s.to_real(&g.base)).collect();
    let components = match reals {
        None => None,
        Some(values) => {
            let mut out = Vec::with_capacity(q as usize);
            let mut power = vec![Rational::one(); values.len()];
            for _ in 0..q {
                let inv: Vec<Rational> = power.iter().map(|p| p.recip()).collect();
                let s = QMatrix::diagonal(&inv);
                let gens = toric
                    .ideal
                    .generators()
                    .iter()
                    .map(|f| substitute_linear(f, &s))
                    .collect::<Result<Vec<_>, _>>()?;
                out.push(Ideal::new(d_ring, gens));
                for (p, v) in power.iter_mut().zip(&values) {
                    *p *= v;
                }
            }
            Some(out)
        }
    };
    Ok(SemisimpleClosure { ring: d_ring.clone(), ideal, components, toric })
}

/// Closure of the powers of the unipotent factor of an invertible Jordan
/// matrix, in its own Jordan coordinates `x_i_j` (`i, j ≤` total size).
#[derive(Debug, Clone)]
pub struct CurveData {
    pub blocks: Vec<JordanBlockSpec>,
    pub block_sizes: Vec<usize>,
    pub max_size: usize,
    pub ring: Arc<Ring>,
    /// Affine-linear equations of the smallest affine space holding the curve.
    pub linear_space_equations: Vec<Poly>,
    pub curve_ideal: Ideal,
    /// Row-major entries of `U^t` as polynomials in `t`.
    pub parametrization: Vec<UniPoly>,
}

impl CurveData {
    pub fn dim(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    /// Degree of the rational normal curve.
    pub fn degree(&self) -> usize {
        self.max_size - 1
    }

    pub fn entry(&self, i: usize, j: usize) -> &UniPoly {
        &self.parametrization[i * self.dim() + j]
    }

    /// `U^k` from the parametrization.
    pub fn evaluate(&self, k: &Rational) -> QMatrix {
        let n = self.dim();
        let rows = (0..n).map(|i| (0..n).map(|j| self.entry(i, j).eval(k)).collect()).collect();
        QMatrix::from_rows(rows).expect("square")
    }
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .scan(0, |at, s| {
            let o = *at;
            *at += s;
            Some(o)
        })
        .collect()
}

/// Linear generators shared by every closure of an invertible Jordan matrix:
/// entries outside the upper triangles of the blocks vanish, and entries on
/// one diagonal of one block agree. Blocks are given as `(offset, size)`.
fn block_shape_equations(ring: &Arc<Ring>, n: usize, blocks: &[(usize, usize)]) -> Vec<Poly> {
    let x = |i: usize, j: usize| Poly::var_named(ring, &var_name(i, j));
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let inside = blocks.iter().any(|&(o, s)| a >= o && b >= a && b < o + s);
            if !inside {
                out.push(x(a, b));
            }
        }
    }
    for &(o, s) in blocks {
        for r in 0..s {
            for k in 1..s - r {
                out.push(&x(o + k, o + k + r) - &x(o, o + r));
            }
        }
    }
    out
}

/// The curve `{U^t}` for the unipotent factor `U` of the given invertible
/// blocks (diagonal `1`, superdiagonal `λ⁻¹`).
pub fn unipotent_closure(blocks: &[JordanBlockSpec]) -> Result<CurveData, ClosureError> {
    if blocks.iter().any(|b| b.eigenvalue.is_zero()) || blocks.iter().all(|b| b.size == 1) {
        return Err(ClosureError::NotUnipotent);
    }
    let sizes: Vec<usize> = blocks.iter().map(|b| b.size).collect();
    let n: usize = sizes.iter().sum();
    let offs = offsets(&sizes);
    let max_size = *sizes.iter().max().unwrap();
    let ring = matrix_ring(n, MonomialOrder::GrevLex);

    let mut parametrization = vec![UniPoly::zero(); n * n];
    for (b, &o) in blocks.iter().zip(&offs) {
        let inv = b.eigenvalue.recip();
        for r in 0..b.size {
            let entry = UniPoly::binomial(r).scale(&num_traits::pow(inv.clone(), r));
            for k in 0..b.size - r {
                parametrization[(o + k) * n + o + k + r] = entry.clone();
            }
        }
    }

    // the first largest block carries the representative of every diagonal
    let rep = sizes.iter().position(|&s| s == max_size).unwrap();
    let mut linear = block_shape_equations(&ring, n, &offs.iter().copied().zip(sizes.iter().copied()).collect::<Vec<_>>());
    let x = |i: usize, j: usize| Poly::var_named(&ring, &var_name(i, j));
    for (l, (b, &o)) in blocks.iter().zip(&offs).enumerate() {
        linear.push(&x(o, o) - &Poly::one(&ring));
        if l == rep {
            continue;
        }
        for r in 1..b.size {
            // λ_l^r x_{l,r} = λ_rep^r x_{rep,r}
            let ratio = num_traits::pow(&blocks[rep].eigenvalue / &b.eigenvalue, r);
            linear.push(&x(o, o + r) - &x(offs[rep], offs[rep] + r).scale(&ratio));
        }
    }

    let o = offs[rep];
    let mut names = vec!["t".to_string()];
    names.extend((1..max_size).map(|r| var_name(o, o + r)));
    let param_ring = Ring::new(names, MonomialOrder::GrevLex);
    let gens: Vec<Poly> = (1..max_size)
        .map(|r| &Poly::var(&param_ring, r) - &Poly::from_unipoly(&param_ring, 0, &parametrization[o * n + o + r]))
        .collect();
    let eliminated = Ideal::new(&param_ring, gens).eliminate(&[0])?;
    let mut all = linear.clone();
    for g in eliminated.generators() {
        all.push(g.to_ring(&ring)?);
    }
    Ok(CurveData {
        blocks: blocks.to_vec(),
        block_sizes: sizes,
        max_size,
        curve_ideal: Ideal::new(&ring, all),
        ring,
        linear_space_equations: linear,
        parametrization,
    })
}

/// An invertible Jordan block placed at `offset` in the full coordinates.
#[derive(Debug, Clone)]
pub struct PlacedBlock {
    pub block: JordanBlockSpec,
    pub offset: usize,
}

/// Name of the diagonal variable standing for a block.
pub fn block_diagonal_name(b: &PlacedBlock) -> String {
    var_name(b.offset, b.offset)
}

/// Ideal of `{S·U : S ∈ V(d_ideal), U ∈ curve}` in the `n × n` coordinates of
/// `ring`, where `d_ideal` lives in the ring of block diagonal variables and
/// all coordinates outside `blocks` vanish. Without a curve this is the
/// diagonal ideal with the block shape imposed.
pub fn product_closure(
    d_ideal: &Ideal,
    blocks: &[PlacedBlock],
    curve: Option<&CurveData>,
    ring: &Arc<Ring>,
) -> Result<Ideal, ClosureError> {
    let n = super::matrix_size(ring);
    let shape: Vec<(usize, usize)> = blocks.iter().map(|b| (b.offset, b.block.size)).collect();
    let mut gens = block_shape_equations(ring, n, &shape);

    let upper: Vec<(usize, usize, usize)> = blocks
        .iter()
        .enumerate()
        .flat_map(|(l, b)| (1..b.block.size).map(move |r| (l, b.offset, r)))
        .collect();
    let core = match curve {
        Some(curve) if !upper.is_empty() => {
            let compact = offsets(&curve.block_sizes);
            let mut names = vec!["t".to_string()];
            names.extend(upper.iter().map(|&(_, o, r)| var_name(o, o + r)));
            names.extend(d_ideal.ring().vars().iter().cloned());
            let param_ring = Ring::new(names, MonomialOrder::GrevLex);
            let mut pg = d_ideal.generators().iter().map(|g| g.to_ring(&param_ring)).collect::<Result<Vec<_>, _>>()?;
            for &(l, o, r) in &upper {
                let c = compact[l];
                let entry = curve.entry(c, c + r);
                let y = Poly::var_named(&param_ring, &var_name(o, o + r));
                let d = Poly::var_named(&param_ring, &block_diagonal_name(&blocks[l]));
                pg.push(&y - &(&d * &Poly::from_unipoly(&param_ring, 0, entry)));
            }
            Ideal::new(&param_ring, pg).eliminate(&[0])?
        }
        _ => d_ideal.clone(),
    };
    for g in core.generators() {
        gens.push(g.to_ring(ring)?);
    }
    Ok(Ideal::new(ring, gens))
}

/// Vanishing ideal of finitely many points (intersection of maximal ideals).
pub fn points_ideal(ring: &Arc<Ring>, points: &[Vec<Rational>]) -> Result<Ideal, ClosureError> {
    let mut acc: Option<Ideal> = None;
    for p in points {
        let gens = p
            .iter()
            .enumerate()
            .map(|(i, c)| &Poly::var(ring, i) - &Poly::constant(ring, c.clone()))
            .collect();
        let m = Ideal::new(ring, gens);
        acc = Some(match acc {
            None => m,
            Some(a) => a.intersect(&m)?,
        });
    }
    Ok(acc.unwrap_or_else(|| Ideal::unit(ring)))
}
