use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{Signed, Zero};

use super::lattice::Lattice;
use super::matrix::IntMatrix;

fn row_combine(m: &mut IntMatrix, target: usize, src: usize, factor: &BigInt) {
    // row_target -= factor * row_src
    for j in 0..m.cols() {
        let d = factor * &m[(src, j)];
        m[(target, j)] -= d;
    }
}

/// Applies the unimodular 2×2 transform `[[s, t], [u, v]]` to rows `a` and `b`.
fn row_mix(m: &mut IntMatrix, a: usize, b: usize, s: &BigInt, t: &BigInt, u: &BigInt, v: &BigInt) {
    for j in 0..m.cols() {
        let x = m[(a, j)].clone();
        let y = m[(b, j)].clone();
        m[(a, j)] = s * &x + t * &y;
        m[(b, j)] = u * &x + v * &y;
    }
}

/// Row Hermite normal form: returns `(H, U)` with `H = U·M` and `U` unimodular.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = m.rows();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut r = 0;
    for c in 0..m.cols() {
        if r == rows {
            break;
        }
        for i in r + 1..rows {
            if h[(i, c)].is_zero() {
                continue;
            }
            if h[(r, c)].is_zero() {
                h.swap_rows(r, i);
                u.swap_rows(r, i);
                continue;
            }
            let x = h[(r, c)].clone();
            let y = h[(i, c)].clone();
            let e = x.extended_gcd(&y);
            let (g, s, t) = (e.gcd, e.x, e.y);
            let uu = -(&y / &g);
            let vv = &x / &g;
            row_mix(&mut h, r, i, &s, &t, &uu, &vv);
            row_mix(&mut u, r, i, &s, &t, &uu, &vv);
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            for j in 0..h.cols() {
                h[(r, j)] = -h[(r, j)].clone();
            }
            for j in 0..u.cols() {
                u[(r, j)] = -u[(r, j)].clone();
            }
        }
        let pivot = h[(r, c)].clone();
        for i in 0..r {
            let q = h[(i, c)].div_floor(&pivot);
            if !q.is_zero() {
                row_combine(&mut h, i, r, &q);
                row_combine(&mut u, i, r, &q);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Shape predicate for the row Hermite normal form documented at module level.
pub fn is_hnf(h: &IntMatrix) -> bool {
    let mut last_pivot: Option<usize> = None;
    let mut seen_zero_row = false;
    for i in 0..h.rows() {
        let pivot = (0..h.cols()).find(|&j| !h[(i, j)].is_zero());
        match pivot {
            None => seen_zero_row = true,
            Some(p) => {
                if seen_zero_row || last_pivot.is_some_and(|lp| p <= lp) || !h[(i, p)].is_positive() {
                    return false;
                }
                for k in 0..i {
                    let e = &h[(k, p)];
                    if e.is_negative() || e >= &h[(i, p)] {
                        return false;
                    }
                }
                last_pivot = Some(p);
            }
        }
    }
    true
}

/// Rank over the rationals (number of nonzero rows of the Hermite form).
pub fn rank(m: &IntMatrix) -> usize {
    let (h, _) = hnf(m);
    (0..h.rows()).filter(|&i| h.row(i).iter().any(|x| !x.is_zero())).count()
}

/// The full integer kernel `{v ∈ ℤ^cols : M·v = 0}`.
///
/// Uses `U·Mᵀ = H`: the rows of `U` facing zero rows of `H` span the left
/// kernel of `Mᵀ`, and they form a saturated basis because `U` is unimodular.
pub fn kernel(m: &IntMatrix) -> Lattice {
    let (h, u) = hnf(&m.transpose());
    let gens: Vec<Vec<BigInt>> = (0..h.rows())
        .filter(|&i| h.row(i).iter().all(Zero::is_zero))
        .map(|i| u.row_vec(i))
        .collect();
    Lattice::from_generators(m.cols(), &gens)
}

/// Invariant factors `d_1 | d_2 | …` (nonzero diagonal of the Smith normal
/// form), obtained by alternating Hermite forms of the matrix and its
/// transpose until the result is diagonal.
pub fn smith_invariants(m: &IntMatrix) -> Vec<BigInt> {
    let mut cur = m.clone();
    loop {
        let (h, _) = hnf(&cur);
        let (h2, _) = hnf(&h.transpose());
        let diagonal = (0..h2.rows())
            .all(|i| (0..h2.cols()).all(|j| i == j || h2[(i, j)].is_zero()));
        cur = h2;
        if diagonal {
            break;
        }
    }
    let k = cur.rows().min(cur.cols());
    let mut d: Vec<BigInt> = (0..k).map(|i| cur[(i, i)].abs()).filter(|x| !x.is_zero()).collect();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}
