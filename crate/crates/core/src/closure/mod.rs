//! Zariski closure of the cyclic (semi)group generated by a matrix.
//!
//! The closure splits as a finite set of isolated points `X₀` (early powers
//! of the nilpotent part) and the closure `X₁` of the powers of the invertible
//! part. In Jordan coordinates `X₁` is the product of a torus orbit closure,
//! cut out by the lattice of multiplicative relations among the eigenvalues,
//! with the rational normal curve of the unipotent factor. The ideal is built
//! there and then moved to the original coordinates by `X ↦ P⁻¹XP`.
//!
//! Matrix coordinates are named `x_<row>_<col>`, 1-indexed, row-major.

mod oracle;
mod parts;

pub use oracle::{verify_ideal, verify_oracle, verify_symbolic_orbit, Counterexample, OracleVerdict, PowerPoint};
pub use parts::{
    points_ideal, product_closure, semisimple_closure, unipotent_closure, CurveData, PlacedBlock, SemisimpleClosure,
};

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::Zero;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exact::{format_rational, QMatrix, Rational, UniPoly};
use crate::intlinalg::Lattice;
use crate::mgroup::{build_group, symbolic_scalars, group_from_symbolic, GroupError, ScalarSpec};
use crate::multipoly::{ideal_equal, substitute_linear, Ideal, MonomialOrder, PolyError, Ring};
use crate::spectral::{block_offsets, jordan, rational_eigenvalues, JordanBlockSpec, SpectralError};
use crate::toric::{ToricData, ToricError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("the zero matrix generates no closure to describe")]
    ZeroMatrix,
    #[error("eigenvalues are not rational: characteristic polynomial keeps the factor {cofactor}; use the symbolic-diagonal mode")]
    EigenvaluesNotRational { cofactor: UniPoly },
    #[error("group mode requires an invertible matrix (GroupModeOnSingular)")]
    GroupModeOnSingular,
    #[error("eigenvalue at position {0} is zero")]
    ZeroEigenvalue(usize),
    #[error("no eigenvalues given")]
    Empty,
    #[error("blocks do not define a nontrivial unipotent factor")]
    NotUnipotent,
    #[error("negative powers requested for a singular matrix")]
    SingularInverse,
    #[error("power must be nonzero")]
    ZeroPower,
    #[error("torsion order does not fit in 64 bits")]
    TorsionTooLarge,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Toric(#[from] ToricError),
}

impl From<SpectralError> for ClosureError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::NotSquare => ClosureError::NotSquare,
            SpectralError::EigenvaluesNotRational { cofactor } => ClosureError::EigenvaluesNotRational { cofactor },
            SpectralError::SingularInput => ClosureError::SingularInverse,
        }
    }
}

impl From<GroupError> for ClosureError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::ZeroEigenvalue(i) => ClosureError::ZeroEigenvalue(i),
            GroupError::Empty => ClosureError::Empty,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    /// Powers `M^k`, `k ≥ 1`.
    #[default]
    Semigroup,
    /// Powers `M^k`, `k ∈ ℤ`; needs `M` invertible.
    Group,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Coords {
    #[default]
    Original,
    /// Report everything for the Jordan matrix `J = P⁻¹MP`.
    Jordan,
}

macro_rules! text_enum {
    ($t:ty, $($v:ident => $s:literal),*) => {
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $(Self::$v => $s),* })
            }
        }
        impl FromStr for $t {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                match s {
                    $($s => Ok(Self::$v),)*
                    _ => Err(format!("unknown value {s:?}")),
                }
            }
        }
    };
}

text_enum!(Mode, Semigroup => "semigroup", Group => "group");
text_enum!(Coords, Original => "original", Jordan => "jordan");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosureOptions {
    pub mode: Mode,
    pub coords: Coords,
    /// Order of the reported basis; `Lex` or `GrevLex`.
    pub order: MonomialOrder,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions { mode: Mode::Semigroup, coords: Coords::Original, order: MonomialOrder::GrevLex }
    }
}

impl ClosureOptions {
    pub fn mode(mode: Mode) -> Self {
        ClosureOptions { mode, ..Default::default() }
    }
}

/// 0-indexed position to variable name.
pub fn var_name(i: usize, j: usize) -> String {
    format!("x_{}_{}", i + 1, j + 1)
}

pub fn matrix_ring(n: usize, order: MonomialOrder) -> Arc<Ring> {
    Ring::new((0..n).flat_map(|i| (0..n).map(move |j| var_name(i, j))), order)
}

pub(crate) fn matrix_size(ring: &Ring) -> usize {
    let n = (0..=ring.nvars()).find(|k| k * k >= ring.nvars()).unwrap();
    assert_eq!(n * n, ring.nvars(), "not a matrix coordinate ring");
    n
}

/// Row-major entries, the evaluation point for the coordinate ring.
pub fn flatten(m: &QMatrix) -> Vec<Rational> {
    m.entries().to_vec()
}

#[derive(Debug, Clone)]
pub struct ClosureReport {
    pub mode: Mode,
    pub coords: Coords,
    pub n: usize,
    /// The generator in the report's coordinates, when it is a rational matrix.
    pub matrix: Option<QMatrix>,
    /// Eigenvalue of each Jordan block, as text, with the block sizes.
    pub eigenvalues: Vec<String>,
    pub block_sizes: Vec<usize>,
    pub nu: usize,
    pub has_zero_eigenvalue: bool,
    pub rank_g: usize,
    pub torsion_order: u64,
    /// Multiplicative relations among the block eigenvalues.
    pub relation_lattice: Option<Lattice>,
    pub diagonalizable_part: bool,
    pub dimension: usize,
    pub num_components: usize,
    pub isolated_points: Vec<QMatrix>,
    pub ideal: Ideal,
    pub component_ideals: Option<Vec<Ideal>>,
    pub toric: Option<ToricData>,
}

pub fn ideal_strings(i: &Ideal) -> Result<Vec<String>, PolyError> {
    Ok(i.groebner_basis()?.iter().map(|g| g.to_string()).collect())
}

impl ClosureReport {
    /// Expected count of isolated points from `ν` and whether nonzero
    /// eigenvalues exist.
    pub fn expected_isolated(&self) -> usize {
        if self.eigenvalues.iter().all(|e| e == "0") {
            self.nu
        } else {
            self.nu.saturating_sub(1)
        }
    }

    pub fn to_json(&self) -> Result<Value, PolyError> {
        let component_ideals = match &self.component_ideals {
            Some(cs) => Value::Array(
                cs.iter().map(|c| ideal_strings(c).map(|v| json!(v))).collect::<Result<Vec<_>, _>>()?,
            ),
            None => Value::Null,
        };
        let toric = match &self.toric {
            Some(t) => t.to_json()?,
            None => Value::Null,
        };
        Ok(json!({
            "mode": self.mode.to_string(),
            "coords": self.coords.to_string(),
            "n": self.n,
            "matrix": self.matrix,
            "eigenvalues": self.eigenvalues,
            "block_sizes": self.block_sizes,
            "nu": self.nu,
            "has_zero_eigenvalue": self.has_zero_eigenvalue,
            "rank": self.rank_g,
            "torsion": self.torsion_order,
            "relation_lattice": self.relation_lattice,
            "diagonalizable_part": self.diagonalizable_part,
            "dimension": self.dimension,
            "components": self.num_components,
            "isolated_points": self.isolated_points,
            "ideal": ideal_strings(&self.ideal)?,
            "component_ideals": component_ideals,
            "toric": toric,
        }))
    }
}

/// The substitution `Z ↦ P⁻¹XP` on the `n²` coordinates.
fn conjugation_substitution(p: &QMatrix, p_inv: &QMatrix) -> QMatrix {
    let n = p.rows();
    let mut s = QMatrix::zeros(n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if p_inv[(a, c)].is_zero() {
                    continue;
                }
                for e in 0..n {
                    s[(a * n + b, c * n + e)] = &p_inv[(a, c)] * &p[(e, b)];
                }
            }
        }
    }
    s
}

/// Moves an ideal from Jordan coordinates to the coordinates where the
/// matrix is `P·J·P⁻¹`, returned with its reduced basis in `ring`'s order.
fn transport(ideal: &Ideal, subst: Option<&QMatrix>, ring: &Arc<Ring>) -> Result<Ideal, ClosureError> {
    let basis = ideal.groebner_basis()?;
    let gens = match subst {
        Some(s) => basis.iter().map(|g| substitute_linear(g, s)).collect::<Result<Vec<_>, _>>()?,
        None => basis.to_vec(),
    };
    let gens = gens.iter().map(|g| g.reorder(ring)).collect();
    let out = Ideal::new(ring, gens);
    let reduced = out.groebner_basis()?.to_vec();
    Ok(Ideal::new(ring, reduced))
}

/// Whether the invertible part of `a` is diagonalizable: for each nonzero
/// eigenvalue the geometric and algebraic multiplicities agree.
fn invertible_part_diagonalizable(a: &QMatrix) -> Result<bool, ClosureError> {
    let n = a.rows();
    for (mu, mult) in rational_eigenvalues(a)? {
        if mu.is_zero() {
            continue;
        }
        if n - a.sub(&QMatrix::identity(n).scale(&mu)).rank() != mult {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Closure of `{M^k}` (semigroup mode) or `{M^k : k ∈ ℤ}` (group mode).
pub fn closure_pipeline(m: &QMatrix, opts: &ClosureOptions) -> Result<ClosureReport, ClosureError> {
    if !m.is_square() {
        return Err(ClosureError::NotSquare);
    }
    if m.is_zero() {
        return Err(ClosureError::ZeroMatrix);
    }
    let jd = jordan(m)?;
    let n = m.rows();
    let has_zero = jd.blocks.iter().any(|b| b.eigenvalue.is_zero());
    if opts.mode == Mode::Group && has_zero {
        return Err(ClosureError::GroupModeOnSingular);
    }
    let j = jd.jordan_matrix();
    let (shown, subst) = match opts.coords {
        Coords::Original => (m.clone(), Some(conjugation_substitution(&jd.p, &jd.p_inv))),
        Coords::Jordan => (j.clone(), None),
    };
    let work = matrix_ring(n, MonomialOrder::GrevLex);
    let ring = matrix_ring(n, opts.order);
    let nu = jd.nu;

    let placed: Vec<PlacedBlock> = jd
        .blocks
        .iter()
        .zip(block_offsets(&jd.blocks))
        .filter(|(b, _)| !b.eigenvalue.is_zero())
        .map(|(b, offset)| PlacedBlock { block: b.clone(), offset })
        .collect();

    let mut report = ClosureReport {
        mode: opts.mode,
        coords: opts.coords,
        n,
        matrix: Some(shown.clone()),
        eigenvalues: jd.blocks.iter().map(|b| format_rational(&b.eigenvalue)).collect(),
        block_sizes: jd.blocks.iter().map(|b| b.size).collect(),
        nu,
        has_zero_eigenvalue: has_zero,
        rank_g: 0,
        torsion_order: 1,
        relation_lattice: None,
        diagonalizable_part: true,
        dimension: 0,
        num_components: 0,
        isolated_points: Vec::new(),
        ideal: Ideal::unit(&ring),
        component_ideals: Some(Vec::new()),
        toric: None,
    };

    if placed.is_empty() {
        // nilpotent: the powers M, …, M^{ν−1} and then 0 forever
        let mut pts: Vec<QMatrix> = (1..nu as u64).map(|k| shown.pow(k)).collect();
        pts.push(QMatrix::zeros(n, n));
        let flat: Vec<Vec<Rational>> = pts.iter().map(flatten).collect();
        report.ideal = transport(&points_ideal(&work, &flat)?, None, &ring)?;
        report.isolated_points = pts;
        return Ok(report);
    }

    let specs: Vec<ScalarSpec> = placed.iter().map(|b| ScalarSpec::real(b.block.eigenvalue.clone())).collect();
    let group = build_group(&specs)?;
    let d_ring = Ring::new(placed.iter().map(parts::block_diagonal_name), MonomialOrder::GrevLex);
    let semi = semisimple_closure(&group, &d_ring)?;
    let inv_blocks: Vec<JordanBlockSpec> = placed.iter().map(|b| b.block.clone()).collect();
    let curve = if inv_blocks.iter().any(|b| b.size > 1) { Some(unipotent_closure(&inv_blocks)?) } else { None };

    let x1 = product_closure(&semi.ideal, &placed, curve.as_ref(), &work)?;
    let jordan_points: Vec<QMatrix> = (1..nu.max(1) as u64).map(|k| j.pow(k)).collect();
    let x0 = if jordan_points.is_empty() {
        None
    } else {
        Some(points_ideal(&work, &jordan_points.iter().map(flatten).collect::<Vec<_>>())?)
    };
    let full = match &x0 {
        Some(p) => x1.intersect(p)?,
        None => x1,
    };
    report.ideal = transport(&full, subst.as_ref(), &ring)?;
    report.component_ideals = match &semi.components {
        Some(cs) => Some(
            cs.iter()
                .map(|c| transport(&product_closure(c, &placed, curve.as_ref(), &work)?, subst.as_ref(), &ring))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        None => None,
    };
    report.isolated_points = (1..nu.max(1) as u64).map(|k| shown.pow(k)).collect();
    report.rank_g = group.rank;
    report.torsion_order = (&group.torsion_order).try_into().map_err(|_| ClosureError::TorsionTooLarge)?;
    report.relation_lattice = Some(group.relation_lattice.clone());
    report.diagonalizable_part = invertible_part_diagonalizable(&m.pow(nu.max(1) as u64))?;
    report.dimension = group.rank + usize::from(!report.diagonalizable_part);
    report.num_components = report.torsion_order as usize;
    report.toric = Some(semi.toric);
    Ok(report)
}

/// Closure for `diag(eigs)` with eigenvalues given symbolically (rational
/// modulus times a root of unity). The matrix is only reported when all
/// eigenvalues are real.
pub fn symbolic_diagonal_pipeline(eigs: &[ScalarSpec], opts: &ClosureOptions) -> Result<ClosureReport, ClosureError> {
    let (base, scalars) = symbolic_scalars(eigs)?;
    let reals: Option<Vec<Rational>> = scalars.iter().map(|s| s.to_real(&base)).collect();
    let group = group_from_symbolic(base.clone(), scalars.clone());
    let n = eigs.len();
    let work = matrix_ring(n, MonomialOrder::GrevLex);
    let ring = matrix_ring(n, opts.order);
    // only offsets and sizes matter without a curve
    let placed: Vec<PlacedBlock> = (0..n)
        .map(|i| PlacedBlock { block: JordanBlockSpec::new(Rational::from_integer(1.into()), 1), offset: i })
        .collect();
    let d_ring = Ring::new(placed.iter().map(parts::block_diagonal_name), MonomialOrder::GrevLex);
    let semi = semisimple_closure(&group, &d_ring)?;
    let ideal = transport(&product_closure(&semi.ideal, &placed, None, &work)?, None, &ring)?;
    let component_ideals = match &semi.components {
        Some(cs) => Some(
            cs.iter()
                .map(|c| transport(&product_closure(c, &placed, None, &work)?, None, &ring))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        None => None,
    };
    let torsion_order: u64 = (&group.torsion_order).try_into().map_err(|_| ClosureError::TorsionTooLarge)?;
    Ok(ClosureReport {
        mode: opts.mode,
        coords: opts.coords,
        n,
        matrix: reals.as_ref().map(|r| QMatrix::diagonal(r)),
        eigenvalues: match &reals {
            Some(r) => r.iter().map(format_rational).collect(),
            None => scalars.iter().map(|s| s.describe(&base)).collect(),
        },
        block_sizes: vec![1; n],
        nu: 0,
        has_zero_eigenvalue: false,
        rank_g: group.rank,
        torsion_order,
        relation_lattice: Some(group.relation_lattice.clone()),
        diagonalizable_part: true,
        dimension: group.rank,
        num_components: torsion_order as usize,
        isolated_points: Vec::new(),
        ideal,
        component_ideals,
        toric: Some(semi.toric),
    })
}

/// Whether `⟨M⟩` and `⟨M^q⟩` have the same closure (group mode).
pub fn power_closure_check(m: &QMatrix, q: i64) -> Result<bool, ClosureError> {
    if q == 0 {
        return Err(ClosureError::ZeroPower);
    }
    let opts = ClosureOptions::mode(Mode::Group);
    let a = closure_pipeline(m, &opts)?;
    let mq = m.pow_signed(q).map_err(|_| ClosureError::GroupModeOnSingular)?;
    let b = closure_pipeline(&mq, &opts)?;
    Ok(ideal_equal(&a.ideal, &b.ideal)?)
}
