//! Factor refinement over the integers: minimal coprime bases, power-product
//! identity testing, multiplicative relation kernels over Q*, and `rex`.
//!
//! None of this factors anything into primes. The graph algorithm refines a
//! list of integers into pairwise coprime factors using nothing but gcds,
//! which is what makes identities like `2^1000000 = 4^500000` decidable
//! without ever writing the numbers down.

use crate::exact::{gcd, Int, Rat};
use crate::lattice;
use crate::mat::IntMat;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

/// Minimal coprime basis of a list of positive integers, with the exponent
/// matrix expressing every input over the basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoprimeBasis {
    /// Pairwise coprime integers, all > 1, ascending.
    pub elems: Vec<Int>,
    /// `expo[i][j]` is the exponent of `elems[j]` in `inputs[i]`.
    pub expo: Vec<Vec<u32>>,
}

impl CoprimeBasis {
    /// Exponent vector of an arbitrary positive integer over this basis,
    /// or `None` if it does not factor over the basis.
    pub fn factor_over(&self, a: &Int) -> Option<Vec<u32>> {
        assert!(a.is_positive());
        let mut rem = a.clone();
        let mut expo = vec![0u32; self.elems.len()];
        for (j, c) in self.elems.iter().enumerate() {
            while (&rem % c).is_zero() {
                rem /= c;
                expo[j] += 1;
            }
        }
        if rem.is_one() {
            Some(expo)
        } else {
            None
        }
    }
}

/// The graph algorithm for coprime basis factorization.
///
/// Maintains a graph whose edges mark pairs not yet known to be coprime.
/// Each step picks an edge, splits off the gcd as a new vertex, and deletes
/// vertices that reach label 1. The edge picked is always the one whose two
/// labels have the largest product (ties by vertex insertion order); the
/// iteration count is bounded by `B^3` with `B = log2(product of inputs)`.
pub fn coprime_basis_factor(inputs: &[Int]) -> CoprimeBasis {
    assert!(inputs.iter().all(|a| a.is_positive()), "inputs must be > 0");

    struct Vertex {
        label: Int,
        expo: Vec<u32>,
        alive: bool,
    }
    let m = inputs.len();
    let mut verts: Vec<Vertex> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (i, a) in inputs.iter().enumerate() {
        if a.is_one() {
            continue;
        }
        let mut expo = vec![0u32; m];
        expo[i] = 1;
        let v = verts.len();
        for u in 0..v {
            edges.push((u, v));
        }
        verts.push(Vertex {
            label: a.clone(),
            expo,
            alive: true,
        });
    }

    while !edges.is_empty() {
        // Deterministic edge choice: largest product of labels, then oldest.
        let mut best = 0;
        let mut best_prod = &verts[edges[0].0].label * &verts[edges[0].1].label;
        for (k, &(u, v)) in edges.iter().enumerate().skip(1) {
            let p = &verts[u].label * &verts[v].label;
            if p > best_prod {
                best_prod = p;
                best = k;
            }
        }
        let (a, b) = edges.remove(best);
        let w = gcd(&verts[a].label, &verts[b].label);
        if w.is_one() {
            continue;
        }
        // New vertex labeled gcd, adjacent to a, b and their common neighbors.
        let c = verts.len();
        let neighbor = |edges: &Vec<(usize, usize)>, x: usize, y: usize| {
            edges
                .iter()
                .any(|&(p, q)| (p, q) == (x, y) || (p, q) == (y, x))
        };
        let mut adj: Vec<(usize, usize)> = vec![(a, c), (b, c)];
        for n in 0..c {
            if verts[n].alive && n != a && n != b && neighbor(&edges, n, a) && neighbor(&edges, n, b)
            {
                adj.push((n, c));
            }
        }
        edges.extend(adj);
        // Exponents: u^e -> (u/w)^e * w^e, likewise for v.
        let expo_c: Vec<u32> = (0..m)
            .map(|i| verts[a].expo[i] + verts[b].expo[i])
            .collect();
        verts.push(Vertex {
            label: w.clone(),
            expo: expo_c,
            alive: true,
        });
        verts[a].label = &verts[a].label / &w;
        verts[b].label = &verts[b].label / &w;
        // Delete label-1 vertices in the order a, b, c.
        for s in [a, b, c] {
            if verts[s].alive && verts[s].label.is_one() {
                verts[s].alive = false;
                edges.retain(|&(p, q)| p != s && q != s);
            }
        }
    }

    let mut basis: Vec<(Int, Vec<u32>)> = verts
        .into_iter()
        .filter(|v| v.alive)
        .map(|v| (v.label, v.expo))
        .collect();
    basis.sort_by(|x, y| x.0.cmp(&y.0));
    let elems: Vec<Int> = basis.iter().map(|(c, _)| c.clone()).collect();
    let expo: Vec<Vec<u32>> = (0..m)
        .map(|i| basis.iter().map(|(_, e)| e[i]).collect())
        .collect();
    let out = CoprimeBasis { elems, expo };
    debug_assert!(reconstructs(inputs, &out));
    out
}

fn reconstructs(inputs: &[Int], cb: &CoprimeBasis) -> bool {
    inputs.iter().enumerate().all(|(i, a)| {
        let mut prod = Int::one();
        for (j, c) in cb.elems.iter().enumerate() {
            prod *= c.pow(cb.expo[i][j]);
        }
        prod == *a
    })
}

/// Signed exponent vectors of nonzero rationals over one common basis.
///
/// Returns the basis together with, per input, the exponent vector of
/// `|q_i|` (numerator minus denominator exponents) and the sign bit.
pub fn rational_exponents(qs: &[Rat]) -> (Vec<Int>, Vec<Vec<i64>>, Vec<bool>) {
    assert!(qs.iter().all(|q| !q.is_zero()), "inputs must be nonzero");
    let mut pieces: Vec<Int> = Vec::new();
    for q in qs {
        pieces.push(q.numer().abs());
        pieces.push(q.denom().clone());
    }
    let cb = coprime_basis_factor(&pieces);
    let k = cb.elems.len();
    let vectors: Vec<Vec<i64>> = (0..qs.len())
        .map(|i| {
            (0..k)
                .map(|j| cb.expo[2 * i][j] as i64 - cb.expo[2 * i + 1][j] as i64)
                .collect()
        })
        .collect();
    let signs = qs.iter().map(|q| q.is_negative()).collect();
    (cb.elems, vectors, signs)
}

/// Decides `∏ q_i^{n_i} = 1` in `Q*` without expanding the product.
pub fn power_product_is_one(qs: &[Rat], ns: &[Int]) -> bool {
    assert_eq!(qs.len(), ns.len());
    // Sign pre-pass: the product is positive iff the total exponent on the
    // negative factors is even.
    let (_, vectors, signs) = rational_exponents(qs);
    let mut sign_sum = Int::zero();
    for (i, neg) in signs.iter().enumerate() {
        if *neg {
            sign_sum += &ns[i];
        }
    }
    if !sign_sum.is_even() {
        return false;
    }
    let k = vectors.first().map_or(0, |v| v.len());
    (0..k).all(|j| {
        let total: Int = (0..qs.len())
            .map(|i| &ns[i] * Int::from(vectors[i][j]))
            .sum();
        total.is_zero()
    })
}

/// Basis of the kernel of `Z^m -> Q*`, `(k_i) -> ∏ q_i^{k_i}`.
///
/// Columns of the returned matrix generate all multiplicative relations
/// among the inputs, including the sign torsion coming from negative ones.
pub fn rational_mult_kernel(qs: &[Rat]) -> IntMat {
    let m = qs.len();
    let (_, vectors, signs) = rational_exponents(qs);
    let k = vectors.first().map_or(0, |v| v.len());
    let vm = IntMat::from_fn(k, m, |j, i| Int::from(vectors[i][j]));
    let ker = lattice::kernel_image(&vm).kappa;
    // Impose the sign parity condition on the kernel coordinates.
    let w: Vec<bool> = (0..ker.cols())
        .map(|j| {
            let mut s = Int::zero();
            for i in 0..m {
                if signs[i] {
                    s += &ker[(i, j)];
                }
            }
            s.is_odd()
        })
        .collect();
    let cols = ker.cols();
    let out = match w.iter().position(|&odd| odd) {
        None => ker,
        Some(j0) => {
            let mut columns: Vec<Vec<Int>> = Vec::new();
            for j in 0..cols {
                if j == j0 {
                    continue;
                }
                let mut c = ker.col(j);
                if w[j] {
                    let base = ker.col(j0);
                    for (x, b) in c.iter_mut().zip(base) {
                        *x -= b;
                    }
                }
                columns.push(c);
            }
            let mut dbl = ker.col(j0);
            for x in dbl.iter_mut() {
                *x += x.clone();
            }
            columns.push(dbl);
            IntMat::from_cols(columns)
        }
    };
    debug_assert!((0..out.cols()).all(|j| power_product_is_one(qs, &out.col(j))));
    out
}

/// `∏_p p^(gcd of p-adic valuations of the inputs)`, computed from a coprime
/// basis rather than a prime factorization. `gcd {} = 0`, so `rex(a) = a`.
pub fn rex(inputs: &[Int]) -> Int {
    assert!(inputs.iter().all(|a| a.is_positive()));
    let cb = coprime_basis_factor(inputs);
    let mut out = Int::one();
    for (j, c) in cb.elems.iter().enumerate() {
        let mut g = 0u32;
        for i in 0..inputs.len() {
            g = num_integer::gcd(g, cb.expo[i][j]);
        }
        out *= c.pow(g);
    }
    out
}
