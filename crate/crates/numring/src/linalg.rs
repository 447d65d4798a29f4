//! Integer linear algebra over column lattices.
//!
//! The central routine is [`triangularize`]: unimodular column operations
//! bring any integer matrix into column echelon (Hermite) form. Kernels,
//! ranks, lattice membership, exact solving and congruence sublattices all
//! derive from it. The LLL-based kernel-image algorithm in [`crate::lattice`]
//! is the theory-faithful counterpart; this module is the fast path used in
//! inner loops, and the two are tested against each other.

use crate::exact::{ext_gcd, gcd, Int};
use crate::mat::IntMat;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

/// Result of column Hermite reduction `h = m * u`.
pub struct Echelon {
    /// Column echelon form; the first `rank` columns are the pivot columns.
    pub h: IntMat,
    /// Unimodular transform with `m * u = h`.
    pub u: IntMat,
    pub rank: usize,
    /// Pivot row of each pivot column, strictly increasing.
    pub pivot_rows: Vec<usize>,
}

/// Unimodular column reduction to canonical column Hermite form.
///
/// Pivots are positive; in each pivot row the entries of earlier columns are
/// reduced into `[0, pivot)` and later columns carry zeros. Zero columns are
/// compacted to the right.
pub fn triangularize(m: &IntMat) -> Echelon {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut u = IntMat::identity(cols);
    let mut rank = 0;
    let mut pivot_rows = Vec::new();
    for row in 0..rows {
        if rank == cols {
            break;
        }
        // Gcd-combine all columns >= rank on this row into column `rank`.
        let mut any = false;
        for j in rank..cols {
            if h[(row, j)].is_zero() {
                continue;
            }
            if !any {
                h.swap_cols(rank, j);
                u.swap_cols(rank, j);
                any = true;
                continue;
            }
            let a = h[(row, rank)].clone();
            let b = h[(row, j)].clone();
            let (g, x, y) = ext_gcd(&a, &b);
            let (bq, aq) = (-(&b / &g), &a / &g);
            h.combine_cols(rank, j, &x, &y, &bq, &aq);
            u.combine_cols(rank, j, &x, &y, &bq, &aq);
        }
        if !any {
            continue;
        }
        if h[(row, rank)].is_negative() {
            h.negate_col(rank);
            u.negate_col(rank);
        }
        pivot_rows.push(row);
        rank += 1;
    }
    // Normalization pass: each pivot row carries zeros to the right of its
    // pivot already; reduce the entries in earlier columns into [0, pivot).
    for (k, &row) in pivot_rows.iter().enumerate() {
        let p = h[(row, k)].clone();
        for j in 0..k {
            let q = h[(row, j)].div_floor(&p);
            if !q.is_zero() {
                h.addmul_col(j, k, &(-&q));
                u.addmul_col(j, k, &(-q));
            }
        }
    }
    Echelon {
        h,
        u,
        rank,
        pivot_rows,
    }
}

/// Canonical Hermite basis of the column span (pivot columns only).
pub fn hermite_basis(m: &IntMat) -> IntMat {
    let e = triangularize(m);
    e.h.col_slice(0, e.rank)
}

/// Basis of `{x : m x = 0}` as columns.
pub fn integer_kernel(m: &IntMat) -> IntMat {
    let e = triangularize(m);
    e.u.col_slice(e.rank, m.cols())
}

/// `(kappa, iota)` with `im(kappa) = ker(m)` and `(kappa | iota)` a basis of
/// the domain. The fast counterpart of the LLL kernel-image split.
pub fn kernel_complement(m: &IntMat) -> (IntMat, IntMat) {
    let e = triangularize(m);
    (
        e.u.col_slice(e.rank, m.cols()),
        e.u.col_slice(0, e.rank),
    )
}

/// Basis of the saturation `(Q L) ∩ Z^n` of the column span of `m`.
pub fn saturation(m: &IntMat) -> IntMat {
    let perp = integer_kernel(&m.transpose());
    integer_kernel(&perp.transpose())
}

pub fn rank(m: &IntMat) -> usize {
    triangularize(m).rank
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &IntMat) -> Int {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    if n == 0 {
        return Int::one();
    }
    let mut a = m.clone();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[(r, k)].is_zero()) else {
                return Int::zero();
            };
            a.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
            a[(i, k)] = Int::zero();
        }
        prev = a[(k, k)].clone();
    }
    sign * a[(n - 1, n - 1)].clone()
}

/// One integer solution of `m x = b`, if any.
pub fn solve(m: &IntMat, b: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(m.rows(), b.len());
    let e = triangularize(m);
    let y = solve_echelon(&e, b)?;
    Some(e.u.mul_vec(&y))
}

/// Does the column span of `sub` lie inside the column span of `ambient`?
pub fn span_subset(sub: &IntMat, ambient: &IntMat) -> bool {
    assert_eq!(sub.rows(), ambient.rows());
    let e = triangularize(ambient);
    for j in 0..sub.cols() {
        if solve_echelon(&e, &sub.col(j)).is_none() {
            return false;
        }
    }
    true
}

fn solve_echelon(e: &Echelon, b: &[Int]) -> Option<Vec<Int>> {
    let mut y = vec![Int::zero(); e.h.cols()];
    let mut residual = b.to_vec();
    for (k, &row) in e.pivot_rows.iter().enumerate() {
        let p = &e.h[(row, k)];
        let (q, r) = residual[row].div_rem(p);
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for i in 0..e.h.rows() {
                let t = &e.h[(i, k)] * &q;
                residual[i] -= t;
            }
        }
        y[k] = q;
    }
    if residual.iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(y)
}

/// Equality of column spans.
pub fn span_eq(a: &IntMat, b: &IntMat) -> bool {
    hermite_basis(a) == hermite_basis(b)
}

/// Basis of `{x in Z^n : a x ≡ 0 (mod s)}` for `s > 0`.
///
/// The lattice always contains `s Z^n`, so the returned basis is square.
pub fn congruence_kernel(a: &IntMat, s: &Int) -> IntMat {
    assert!(s.is_positive());
    let n = a.cols();
    let mut basis = IntMat::identity(n);
    for row in 0..a.rows() {
        // Condition on y (where x = basis * y): w . y ≡ 0 (mod s), with
        // w the current row pulled back through the basis.
        let w: Vec<Int> = (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| (&a[(row, i)] * &basis[(i, j)]).mod_floor(s))
                    .sum::<Int>()
                    .mod_floor(s)
            })
            .collect();
        if w.iter().all(|x| x.is_zero()) {
            continue;
        }
        // Unimodular column ops condensing w to (g, 0, ..., 0).
        let mut t = IntMat::identity(n);
        let mut w = w;
        for j in 1..n {
            if w[j].is_zero() {
                continue;
            }
            let (g, x, y) = ext_gcd(&w[0], &w[j]);
            let (bq, aq) = (-(&w[j] / &g), &w[0] / &g);
            t.combine_cols(0, j, &x, &y, &bq, &aq);
            w[0] = g;
            w[j] = Int::zero();
        }
        let g = gcd(&w[0], s);
        let d = s / &g;
        basis = basis.mul(&t);
        if !d.is_one() {
            for i in 0..n {
                let v = &basis[(i, 0)] * &d;
                basis[(i, 0)] = v;
            }
        }
        // Keep entries small; the lattice contains sZ^n so Hermite pivots
        // divide s.
        basis = hermite_basis(&basis.hstack(&IntMat::identity(n).scale(s)));
        assert_eq!(basis.cols(), n);
    }
    basis
}

/// The projection of `ker([a | b])` onto the `a`-block of coordinates,
/// i.e. generators of `{x : a x ∈ im(b)}`.
pub fn preimage_lattice(a: &IntMat, b: &IntMat) -> IntMat {
    assert_eq!(a.rows(), b.rows());
    let stacked = a.hstack(b);
    let ker = integer_kernel(&stacked);
    let gens = ker.row_slice(0, a.cols());
    hermite_basis(&gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn echelon_invariants() {
        let m = IntMat::from_i64_rows(&[&[4, 6, 2], &[2, 8, 10]]);
        let e = triangularize(&m);
        assert_eq!(m.mul(&e.u), e.h);
        assert_eq!(det(&e.u).abs(), int(1));
        assert_eq!(e.rank, 2);
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = IntMat::from_i64_rows(&[&[1, 2], &[2, 4]]);
        let k = integer_kernel(&m);
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        // kernel is (2, -1) up to sign
        assert_eq!(k.col(0)[0].abs(), int(2));
        assert_eq!(k.col(0)[1].abs(), int(1));
    }

    #[test]
    fn solve_roundtrip() {
        let m = IntMat::from_i64_rows(&[&[2, 0], &[0, 3]]);
        assert_eq!(solve(&m, &[int(4), int(9)]), Some(vec![int(2), int(3)]));
        assert_eq!(solve(&m, &[int(1), int(0)]), None);
    }

    #[test]
    fn congruence_kernel_basic() {
        // x + y ≡ 0 mod 4 in Z^2
        let a = IntMat::from_i64_rows(&[&[1, 1]]);
        let l = congruence_kernel(&a, &int(4));
        // index should be 4
        assert_eq!(det(&l).abs(), int(4));
        for j in 0..2 {
            let c = l.col(j);
            assert!(((&c[0] + &c[1]) % int(4)).is_zero());
        }
    }

    #[test]
    fn bareiss_det() {
        let m = IntMat::from_i64_rows(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(det(&m), int(2 * (3 * 4 - 1) - 1 * 4));
    }

    #[test]
    fn span_operations() {
        let a = IntMat::from_i64_rows(&[&[2, 0], &[0, 2]]);
        let b = IntMat::from_i64_rows(&[&[2, 2], &[2, -2]]);
        assert!(span_subset(&b, &a));
        assert!(!span_subset(&a, &b));
        assert!(span_eq(&a, &IntMat::from_i64_rows(&[&[0, 2], &[2, 2]])));
    }
}
