//! Lattice ideals, toric varieties parametrized by Laurent monomials, their
//! realization as closures of a diagonal cyclic group, and normalized volumes.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::exact::{QMatrix, Rational};
use crate::intlinalg::{kernel, rank, IntMatrix, Lattice};
use crate::mgroup::ScalarSpec;
use crate::multipoly::{Ideal, Monomial, MonomialOrder, Poly, PolyError, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToricError {
    #[error("no points given")]
    Empty,
    #[error("point {index} has dimension {found}, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    #[error("affine hull has dimension {0}; volumes are supported up to dimension 3")]
    DimensionTooLarge(usize),
    #[error("lattice has ambient dimension {lattice} but the ring has {vars} variables")]
    RingSize { lattice: usize, vars: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `x^{v⁺} − x^{v⁻}`.
pub fn binomial(ring: &Arc<Ring>, v: &[BigInt]) -> Poly {
    let part = |sign: i32| {
        Monomial(
            v.iter()
                .map(|e| {
                    let e = if sign > 0 { e.clone() } else { -e };
                    if e.is_positive() {
                        e.to_u32().expect("exponent fits in u32")
                    } else {
                        0
                    }
                })
                .collect(),
        )
    };
    &Poly::monomial(ring, part(1), Rational::one()) - &Poly::monomial(ring, part(-1), Rational::one())
}

/// The lattice ideal `⟨x^β − x^γ : β − γ ∈ L⟩`: basis binomials saturated by
/// each variable in turn.
pub fn lattice_ideal(l: &Lattice, ring: &Arc<Ring>) -> Result<Ideal, ToricError> {
    if l.ambient_dim() != ring.nvars() {
        return Err(ToricError::RingSize { lattice: l.ambient_dim(), vars: ring.nvars() });
    }
    let gens = l.basis().iter().map(|v| binomial(ring, v)).collect();
    let mut ideal = Ideal::new(ring, gens);
    if l.rank() == 0 {
        return Ok(ideal);
    }
    for i in 0..ring.nvars() {
        // variables absent from every basis vector cannot appear in the saturation
        if l.basis().iter().all(|v| v[i].is_zero()) {
            continue;
        }
        ideal = ideal.saturate(&Poly::var(ring, i))?;
        ideal = Ideal::new(ring, ideal.groebner_basis()?.to_vec()).with_budget(ideal.budget());
    }
    Ok(ideal)
}

#[derive(Debug, Clone)]
pub struct ToricData {
    pub points: Vec<Vec<BigInt>>,
    /// Columns are the points.
    pub a: IntMatrix,
    pub kernel: Lattice,
    pub dimension: usize,
    pub ideal: Ideal,
}

fn int_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

impl ToricData {
    pub fn to_json(&self) -> Result<Value, PolyError> {
        let ideal: Vec<String> = self.ideal.groebner_basis()?.iter().map(|g| g.to_string()).collect();
        Ok(json!({
            "points": self.points.iter().map(|p| p.iter().map(int_value).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "dimension": self.dimension,
            "kernel": self.kernel,
            "variables": self.ideal.ring().vars(),
            "ideal": ideal,
        }))
    }
}

fn check_points(points: &[Vec<BigInt>]) -> Result<usize, ToricError> {
    let d = points.first().ok_or(ToricError::Empty)?.len();
    if let Some((index, p)) = points.iter().enumerate().find(|(_, p)| p.len() != d) {
        return Err(ToricError::DimensionMismatch { index, expected: d, found: p.len() });
    }
    Ok(d)
}

/// Default coordinate ring `x_1, …, x_n` for `n` points.
pub fn default_ring(n: usize) -> Arc<Ring> {
    Ring::new((1..=n).map(|i| format!("x_{i}")), MonomialOrder::GrevLex)
}

pub fn toric_from_points(points: &[Vec<BigInt>]) -> Result<ToricData, ToricError> {
    toric_from_points_in(points, &default_ring(points.len()))
}

/// Toric data with the ideal placed in `ring` (one variable per point).
pub fn toric_from_points_in(points: &[Vec<BigInt>], ring: &Arc<Ring>) -> Result<ToricData, ToricError> {
    let d = check_points(points)?;
    let a = IntMatrix::from_columns(d, points);
    let ker = kernel(&a);
    let ideal = lattice_ideal(&ker, ring)?;
    Ok(ToricData { points: points.to_vec(), dimension: rank(&a), a, kernel: ker, ideal })
}

pub fn first_primes(r: usize) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(r);
    let mut c = 2u64;
    while out.len() < r {
        if out.iter().take_while(|&&p| p * p <= c).all(|&p| !c.is_multiple_of(p)) {
            out.push(c);
        }
        c += 1;
    }
    out
}

/// Diagonal entries `a_i = ∏_j c_j^{α_ij}` with `c_j` the first primes, so that
/// the relation lattice of `(a_i)` is the kernel of the point matrix.
pub fn realize_as_matrix(points: &[Vec<BigInt>]) -> Result<Vec<ScalarSpec>, ToricError> {
    let d = check_points(points)?;
    let primes = first_primes(d);
    Ok(points
        .iter()
        .map(|p| {
            let value = p.iter().zip(&primes).fold(Rational::one(), |acc, (e, &c)| {
                let c = Rational::from_integer(c.into());
                let k = e.to_i32().expect("exponent fits in i32");
                acc * num_traits::pow::Pow::pow(&c, k)
            });
            ScalarSpec::real(value)
        })
        .collect())
}

/// The realization as an explicit rational diagonal matrix.
pub fn realization_matrix(points: &[Vec<BigInt>]) -> Result<QMatrix, ToricError> {
    let diag: Vec<Rational> = realize_as_matrix(points)?.into_iter().map(|s| s.rational).collect();
    Ok(QMatrix::diagonal(&diag))
}

type P = Vec<i128>;

fn to_small(v: &[BigInt]) -> P {
    v.iter().map(|x| x.to_i128().expect("coordinate fits in i128")).collect()
}

fn sub(a: &[i128], b: &[i128]) -> P {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn cross2(o: &[i128], a: &[i128], b: &[i128]) -> i128 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn det3(a: &[i128], b: &[i128], c: &[i128]) -> i128 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// Convex hull vertices in counterclockwise order (monotone chain).
fn hull2(points: &[P]) -> Vec<P> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<P> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross2(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<P> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross2(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn volume2(points: &[P]) -> i128 {
    let h = hull2(points);
    (1..h.len().saturating_sub(1)).map(|i| cross2(&h[0], &h[i], &h[i + 1])).sum::<i128>().abs()
}

fn volume3(points: &[P]) -> i128 {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let apex = pts[0].clone();
    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut total = 0i128;
    let n = pts.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (u, v) = (sub(&pts[j], &pts[i]), sub(&pts[k], &pts[i]));
                let normal = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
                if normal.iter().all(|&c| c == 0) {
                    continue;
                }
                let side = |p: &P| -> i128 { (0..3).map(|c| normal[c] * (p[c] - pts[i][c])).sum() };
                let sides: Vec<i128> = pts.iter().map(side).collect();
                if sides.iter().any(|&s| s > 0) && sides.iter().any(|&s| s < 0) {
                    continue;
                }
                let facet: Vec<usize> = (0..n).filter(|&m| sides[m] == 0).collect();
                if seen.contains(&facet) {
                    continue;
                }
                seen.push(facet.clone());
                if facet.iter().any(|&m| pts[m] == apex) {
                    continue;
                }
                // drop the coordinate where the normal is largest; the projection is injective on the facet
                let drop = (0..3).max_by_key(|&c| normal[c].abs()).unwrap();
                let keep: Vec<usize> = (0..3).filter(|&c| c != drop).collect();
                let projected: Vec<P> = facet.iter().map(|&m| keep.iter().map(|&c| pts[m][c]).collect()).collect();
                let order = hull2(&projected);
                let lift = |q: &P| -> P { pts[facet[projected.iter().position(|p| p == q).unwrap()]].clone() };
                let ring: Vec<P> = order.iter().map(lift).collect();
                for t in 1..ring.len().saturating_sub(1) {
                    total += det3(&sub(&ring[0], &apex), &sub(&ring[t], &apex), &sub(&ring[t + 1], &apex)).abs();
                }
            }
        }
    }
    total
}

/// Normalized volume (`k!` times Lebesgue measure) of the convex hull, measured
/// in the integer lattice of the points' affine hull, for hulls of dimension
/// at most 3. A single point has volume 1.
pub fn degree_by_volume(points: &[Vec<BigInt>]) -> Result<BigInt, ToricError> {
    let d = check_points(points)?;
    let origin = &points[0];
    let diffs: Vec<Vec<BigInt>> = points.iter().map(|p| p.iter().zip(origin).map(|(a, b)| a - b).collect()).collect();
    let hull_lattice = Lattice::from_generators(d, &diffs).saturation();
    let k = hull_lattice.rank();
    if k > 3 {
        return Err(ToricError::DimensionTooLarge(k));
    }
    let coords: Vec<P> = diffs
        .iter()
        .map(|v| to_small(&hull_lattice.coordinates(v).expect("same dimension").expect("inside the hull lattice")))
        .collect();
    let vol = match k {
        0 => 1,
        1 => {
            let xs = coords.iter().map(|c| c[0]);
            xs.clone().max().unwrap() - xs.min().unwrap()
        }
        2 => volume2(&coords),
        _ => volume3(&coords),
    };
    Ok(BigInt::from(vol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mgroup::build_group;
    use crate::multipoly::{ideal_equal, parse_poly};
    use crate::exact::{rat, ratio};
    use crate::intlinalg::lattice_equal;
    use proptest::prelude::*;

    fn pts(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter().map(|p| p.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn ring(vars: &[&str]) -> Arc<Ring> {
        Ring::new(vars.iter().copied(), MonomialOrder::GrevLex)
    }

    fn assert_ideal(i: &Ideal, gens: &[&str]) {
        let want = Ideal::new(i.ring(), gens.iter().map(|g| parse_poly(g, i.ring()).unwrap()).collect());
        assert!(ideal_equal(i, &want).unwrap(), "got {:?}", i.groebner_basis().unwrap());
    }

    #[test]
    fn lattice_ideal_examples() {
        let r = ring(&["x", "y", "z"]);
        assert_ideal(&lattice_ideal(&Lattice::from_i64(3, &[&[1, 4, -3]]), &r).unwrap(), &["x*y^4 - z^3"]);
        let r2 = ring(&["x", "y"]);
        assert_ideal(&lattice_ideal(&Lattice::from_i64(2, &[&[2, -1]]), &r2).unwrap(), &["x^2 - y"]);
        assert!(lattice_ideal(&Lattice::zero(2), &r2).unwrap().is_zero().unwrap());
        let sign = lattice_ideal(&Lattice::from_i64(2, &[&[2, 0]]), &r2).unwrap();
        assert_ideal(&sign, &["x^2 - 1"]);
        for x in [-1, 1] {
            for y in -3..4 {
                assert!(sign.vanishes_at(&[rat(x), rat(y)]));
            }
        }
        assert!(!sign.vanishes_at(&[rat(2), rat(0)]));
    }

    #[test]
    fn saturation_is_needed() {
        // the basis binomials of this lattice generate a strictly smaller ideal
        let l = Lattice::from_i64(4, &[&[1, -2, 1, 0], &[0, 1, -2, 1]]);
        let r = ring(&["a", "b", "c", "d"]);
        let naive = Ideal::new(&r, l.basis().iter().map(|v| binomial(&r, v)).collect());
        let full = lattice_ideal(&l, &r).unwrap();
        let extra = parse_poly("a*d - b*c", &r).unwrap();
        assert!(full.contains(&extra).unwrap());
        assert!(!naive.contains(&extra).unwrap());
    }

    #[test]
    fn toric_examples() {
        let t = toric_from_points_in(&pts(&[&[3, -1], &[0, 1], &[1, 1]]), &ring(&["x", "y", "z"])).unwrap();
        assert_eq!(t.dimension, 2);
        assert_ideal(&t.ideal, &["x*y^4 - z^3"]);
        let t = toric_from_points_in(&pts(&[&[1], &[2]]), &ring(&["x", "y"])).unwrap();
        assert_eq!(t.dimension, 1);
        assert_ideal(&t.ideal, &["x^2 - y"]);
        let t = toric_from_points_in(&pts(&[&[0, 0]]), &ring(&["x"])).unwrap();
        assert_eq!(t.dimension, 0);
        assert_ideal(&t.ideal, &["x - 1"]);
        assert!(matches!(
            toric_from_points(&pts(&[&[1, 2], &[1]])),
            Err(ToricError::DimensionMismatch { index: 1, expected: 2, found: 1 })
        ));
    }

    #[test]
    fn realization_examples() {
        let p = pts(&[&[3, -1], &[0, 1], &[1, 1]]);
        let diag: Vec<Rational> = realize_as_matrix(&p).unwrap().into_iter().map(|s| s.rational).collect();
        assert_eq!(diag, vec![ratio(8, 3), rat(3), rat(6)]);
        let g = build_group(&realize_as_matrix(&p).unwrap()).unwrap();
        assert!(lattice_equal(&g.relation_lattice, &kernel(&IntMatrix::from_columns(2, &p))).unwrap());

        assert_eq!(realization_matrix(&pts(&[&[1]])).unwrap(), QMatrix::diagonal(&[rat(2)]));
        let g = build_group(&realize_as_matrix(&pts(&[&[1, 0], &[0, 1]])).unwrap()).unwrap();
        assert_eq!(g.relation_lattice.rank(), 0);
        assert_eq!(first_primes(5), vec![2, 3, 5, 7, 11]);
    }

    #[test]
    fn volume_examples() {
        assert_eq!(degree_by_volume(&pts(&[&[0, 0], &[1, 0], &[2, 0], &[0, 1]])).unwrap(), BigInt::from(2));
        assert_eq!(degree_by_volume(&pts(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap(), BigInt::from(1));
        assert_eq!(degree_by_volume(&pts(&[&[0], &[3]])).unwrap(), BigInt::from(3));
        assert_eq!(degree_by_volume(&pts(&[&[5, 5]])).unwrap(), BigInt::one());
        let cube: Vec<Vec<i64>> = (0..8).map(|m| vec![m & 1, (m >> 1) & 1, (m >> 2) & 1]).collect();
        let cube: Vec<&[i64]> = cube.iter().map(|v| v.as_slice()).collect();
        assert_eq!(degree_by_volume(&pts(&cube)).unwrap(), BigInt::from(6));
        // a square lying in a plane of 3-space
        assert_eq!(degree_by_volume(&pts(&[&[0, 0, 0], &[1, 1, 0], &[0, 0, 1], &[1, 1, 1]])).unwrap(), BigInt::from(2));
        let simplex4 = pts(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert_eq!(degree_by_volume(&simplex4), Err(ToricError::DimensionTooLarge(4)));
    }

    fn arb_lattice() -> impl Strategy<Value = Lattice> {
        proptest::collection::vec(proptest::collection::vec(-2i64..3, 3), 1..3).prop_map(|rows| {
            let rows: Vec<Vec<BigInt>> = rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
            Lattice::from_generators(3, &rows)
        })
    }

    fn unimodular(seed: &[i64]) -> [[i64; 3]; 3] {
        // product of an upper and a lower unitriangular matrix
        let u = [[1, seed[0], seed[1]], [0, 1, seed[2]], [0, 0, 1]];
        let l = [[1, 0, 0], [seed[3], 1, 0], [seed[4], seed[5], 1]];
        let mut out = [[0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = (0..3).map(|k| u[i][k] * l[k][j]).sum();
            }
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn lattice_ideal_contains_lattice_binomials(
            l in arb_lattice(),
            combos in proptest::collection::vec(proptest::collection::vec(-2i64..3, 2), 100),
        ) {
            let r = ring(&["x", "y", "z"]);
            let ideal = lattice_ideal(&l, &r).unwrap();
            for g in ideal.groebner_basis().unwrap() {
                prop_assert_eq!(g.len(), 2);
                let mut cs: Vec<Rational> = g.terms().iter().map(|(_, c)| c.clone()).collect();
                cs.sort();
                prop_assert_eq!(cs, vec![rat(-1), rat(1)]);
            }
            for c in combos {
                let mut v = vec![BigInt::zero(); 3];
                for (b, k) in l.basis().iter().zip(&c) {
                    for i in 0..3 {
                        v[i] += &b[i] * k;
                    }
                }
                prop_assert!(ideal.contains(&binomial(&r, &v)).unwrap());
            }
            prop_assert!(ideal_equal(&ideal.saturate(&parse_poly("x*y*z", &r).unwrap()).unwrap(), &ideal).unwrap());
        }

        #[test]
        fn realization_round_trip(points in proptest::collection::vec(proptest::collection::vec(-2i64..3, 2), 1..5)) {
            let p: Vec<Vec<BigInt>> = points.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let g = build_group(&realize_as_matrix(&p).unwrap()).unwrap();
            prop_assert!(lattice_equal(&g.relation_lattice, &kernel(&IntMatrix::from_columns(2, &p))).unwrap());
        }

        #[test]
        fn volume_is_affine_unimodular_invariant(
            points in proptest::collection::vec(proptest::collection::vec(-2i64..3, 3), 1..7),
            seed in proptest::collection::vec(-1i64..2, 6),
            shift in proptest::collection::vec(-3i64..4, 3),
        ) {
            let g = unimodular(&seed);
            let moved: Vec<Vec<BigInt>> = points
                .iter()
                .map(|p| (0..3).map(|i| BigInt::from((0..3).map(|k| g[i][k] * p[k]).sum::<i64>() + shift[i])).collect())
                .collect();
            let orig: Vec<Vec<BigInt>> = points.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
            prop_assert_eq!(degree_by_volume(&orig).unwrap(), degree_by_volume(&moved).unwrap());
        }
    }
}
