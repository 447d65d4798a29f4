//! Exact-rational quadratic lattices.
//!
//! Lattices are encoded by their Gram matrix, so every computation here is
//! basis-free linear algebra over Q. The LLL routine produces a c-reduced
//! basis in the two-condition sense (size-reduced Gram-Schmidt coefficients
//! plus the Lovász condition `c*q(b*_{k+1}) >= q(b*_k)`), and the
//! kernel-image algorithm runs one 2-reduced LLL call on the weighted form
//! `q(x) = |x|^2 + w*|phi(x)|^2` to split a basis of Z^n into kernel and
//! image-complement parts.

use crate::exact::{ext_gcd, Int, Rat};
use crate::mat::{IntMat, RatMat};
use num_traits::{One, Signed, Zero};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeError {
    NotPositiveDefinite,
    NotSymmetric,
    DimensionMismatch,
    Cancelled,
}

impl std::fmt::Display for LatticeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LatticeError::NotPositiveDefinite => write!(f, "Gram matrix is not positive definite"),
            LatticeError::NotSymmetric => write!(f, "Gram matrix is not symmetric"),
            LatticeError::DimensionMismatch => write!(f, "dimension mismatch"),
            LatticeError::Cancelled => write!(f, "operation cancelled"),
        }
    }
}

impl std::error::Error for LatticeError {}

/// Free Z-module with a symmetric positive-definite rational Gram form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadLattice {
    gram: RatMat,
}

impl QuadLattice {
    /// Validates symmetry and positive-definiteness (via Gram-Schmidt).
    pub fn new(gram: RatMat) -> Result<Self, LatticeError> {
        if gram.rows() != gram.cols() {
            return Err(LatticeError::DimensionMismatch);
        }
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        let lat = QuadLattice { gram };
        gram_schmidt(&lat)?;
        Ok(lat)
    }

    /// Gram matrix of the standard inner product restricted to the columns
    /// of `basis`.
    pub fn from_basis_columns(basis: &RatMat) -> Result<Self, LatticeError> {
        Self::new(basis.transpose().mul(basis))
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &RatMat {
        &self.gram
    }

    /// Gram matrix of the sublattice spanned by the columns of `u`.
    pub fn transform(&self, u: &IntMat) -> QuadLattice {
        let ur = u.to_rat();
        QuadLattice {
            gram: ur.transpose().mul(&self.gram).mul(&ur),
        }
    }

    pub fn det(&self) -> Rat {
        self.gram.det()
    }
}

/// Gram-Schmidt square norms and coefficients, all exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramSchmidtData {
    /// `q(b_i^*)`, all positive.
    pub qstar: Vec<Rat>,
    /// Strictly lower-triangular mu matrix (`mu[(i,j)]` for `j < i`).
    pub mu: RatMat,
}

impl GramSchmidtData {
    /// The product of the `q(b_i^*)`, which equals `det(L)`.
    pub fn det(&self) -> Rat {
        let mut d = Rat::one();
        for q in &self.qstar {
            d *= q.clone();
        }
        d
    }
}

/// Exact Gram-Schmidt on Gram data.
pub fn gram_schmidt(lat: &QuadLattice) -> Result<GramSchmidtData, LatticeError> {
    gram_schmidt_raw(&lat.gram)
}

fn gram_schmidt_raw(gram: &RatMat) -> Result<GramSchmidtData, LatticeError> {
    let n = gram.rows();
    let mut mu = RatMat::zeros(n, n);
    let mut qstar: Vec<Rat> = Vec::with_capacity(n);
    // c[i][j] = <b_i, b_j^*>
    let mut c = RatMat::zeros(n, n);
    for i in 0..n {
        for j in 0..i {
            let mut v = gram[(i, j)].clone();
            for k in 0..j {
                let t = &mu[(j, k)] * &c[(i, k)];
                v -= t;
            }
            mu[(i, j)] = &v / &qstar[j];
            c[(i, j)] = v;
        }
        let mut q = gram[(i, i)].clone();
        for k in 0..i {
            let t = &mu[(i, k)] * &c[(i, k)];
            q -= t;
        }
        if !q.is_positive() {
            return Err(LatticeError::NotPositiveDefinite);
        }
        c[(i, i)] = q.clone();
        qstar.push(q);
    }
    Ok(GramSchmidtData { qstar, mu })
}

/// Options for [`lll_reduce`]. `c` must exceed 4/3; long runs can be
/// interrupted through the cancellation flag.
#[derive(Clone)]
pub struct LllOptions {
    pub c: Rat,
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Default for LllOptions {
    fn default() -> Self {
        LllOptions {
            c: Rat::from_integer(Int::from(2)),
            cancel: None,
        }
    }
}

impl LllOptions {
    pub fn with_c(c: Rat) -> Self {
        LllOptions { c, cancel: None }
    }
}

/// LLL reduction on Gram data.
///
/// Returns a unimodular `U` together with the reduced lattice
/// `L' = U^T L U`, which satisfies both c-reduction conditions exactly.
pub fn lll_reduce(lat: &QuadLattice, opts: &LllOptions) -> Result<(IntMat, QuadLattice), LatticeError> {
    let four_thirds = Rat::new(Int::from(4), Int::from(3));
    assert!(opts.c > four_thirds, "LLL requires c > 4/3");
    let n = lat.rank();
    let mut gram = lat.gram.clone();
    let mut u = IntMat::identity(n);
    if n <= 1 {
        return Ok((u, QuadLattice { gram }));
    }
    let gs = gram_schmidt_raw(&gram)?;
    let mut mu = gs.mu;
    let mut qstar = gs.qstar;

    // b_k -= r * b_j on Gram data, transform and mu rows.
    let size_reduce_step = |gram: &mut RatMat, u: &mut IntMat, mu: &mut RatMat, k: usize, j: usize| {
        let r_rat = &mu[(k, j)];
        let r = round_nearest(r_rat);
        if r.is_zero() {
            return;
        }
        let rr = Rat::from_integer(r.clone());
        // gram: row/col k pick up -r times row/col j
        for t in 0..gram.cols() {
            let v = &gram[(k, t)] - &rr * &gram[(j, t)];
            gram[(k, t)] = v;
        }
        for t in 0..gram.rows() {
            let v = &gram[(t, k)] - &rr * &gram[(t, j)];
            gram[(t, k)] = v;
        }
        u.addmul_col(k, j, &(-r));
        for t in 0..j {
            let v = &mu[(k, t)] - &rr * &mu[(j, t)];
            mu[(k, t)] = v;
        }
        let v = &mu[(k, j)] - rr;
        mu[(k, j)] = v;
    };

    let mut k = 1usize;
    let mut steps: u64 = 0;
    while k < n {
        steps += 1;
        if steps % 64 == 0 {
            if let Some(flag) = &opts.cancel {
                if flag.load(Ordering::Relaxed) {
                    return Err(LatticeError::Cancelled);
                }
            }
        }
        for j in (0..k).rev() {
            size_reduce_step(&mut gram, &mut u, &mut mu, k, j);
        }
        // Lovász condition in the two-condition form: c q(b_k^*) >= q(b_{k-1}^*)
        if &opts.c * &qstar[k] >= qstar[k - 1] {
            k += 1;
            continue;
        }
        // swap b_{k-1} and b_k, updating Gram-Schmidt data in place
        let m = mu[(k, k - 1)].clone();
        let b = &qstar[k] + &m * &m * &qstar[k - 1];
        let new_mu_kk1 = &m * &qstar[k - 1] / &b;
        let new_qk = &qstar[k - 1] * &qstar[k] / &b;
        qstar[k - 1] = b;
        qstar[k] = new_qk;
        for j in 0..k - 1 {
            let x = mu[(k - 1, j)].clone();
            let y = mu[(k, j)].clone();
            mu[(k - 1, j)] = y;
            mu[(k, j)] = x;
        }
        mu[(k, k - 1)] = new_mu_kk1.clone();
        for i in k + 1..n {
            let t = mu[(i, k)].clone();
            let v = &mu[(i, k - 1)] - &m * &t;
            mu[(i, k)] = v;
            let w = &t + &new_mu_kk1 * &mu[(i, k)];
            mu[(i, k - 1)] = w;
        }
        gram.mul_assign_swap(k - 1, k);
        u.swap_cols(k - 1, k);
        k = std::cmp::max(k - 1, 1);
    }
    let out = QuadLattice { gram };
    debug_assert!(is_c_reduced(&out, &opts.c).unwrap_or(false));
    Ok((u, out))
}

fn round_nearest(x: &Rat) -> Int {
    // nearest integer, ties toward +infinity
    use num_integer::Integer as _;
    let two = Int::from(2);
    let num = x.numer() * &two + x.denom();
    let den = x.denom() * &two;
    num.div_floor(&den)
}

impl RatMat {
    /// Symmetric swap of indices `a` and `b` (rows and columns).
    fn mul_assign_swap(&mut self, a: usize, b: usize) {
        let n = self.cols();
        for j in 0..n {
            let x = self[(a, j)].clone();
            let y = self[(b, j)].clone();
            self[(a, j)] = y;
            self[(b, j)] = x;
        }
        for i in 0..self.rows() {
            let x = self[(i, a)].clone();
            let y = self[(i, b)].clone();
            self[(i, a)] = y;
            self[(i, b)] = x;
        }
    }
}

/// Exact check of both c-reduction conditions.
pub fn is_c_reduced(lat: &QuadLattice, c: &Rat) -> Result<bool, LatticeError> {
    let gs = gram_schmidt(lat)?;
    let n = lat.rank();
    let half = Rat::new(Int::one(), Int::from(2));
    for i in 0..n {
        for j in 0..i {
            if gs.mu[(i, j)].abs() > half {
                return Ok(false);
            }
        }
    }
    for k in 0..n.saturating_sub(1) {
        if &(c * &gs.qstar[k + 1]) < &gs.qstar[k] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Output of the kernel-image algorithm.
#[derive(Debug, Clone)]
pub struct KernelImage {
    /// Rank of the map.
    pub rank: usize,
    /// `n x (n-r)`; columns form a basis of the kernel.
    pub kappa: IntMat,
    /// `n x r`; `phi * iota` columns form a basis of the image, and
    /// `(kappa | iota)` is a basis of `Z^n`.
    pub iota: IntMat,
}

impl KernelImage {
    pub fn image_basis(&self, phi: &IntMat) -> IntMat {
        phi.mul(&self.iota)
    }
}

/// The kernel-image algorithm: one 2-reduced LLL call on the form
/// `q(x) = |x|^2 + w |phi x|^2` with `w = 2^(n-1) n^(n+1) B^(2n) + 1`.
pub fn kernel_image(phi: &IntMat) -> KernelImage {
    let n = phi.cols();
    if n == 0 {
        return KernelImage {
            rank: 0,
            kappa: IntMat::zeros(0, 0),
            iota: IntMat::zeros(0, 0),
        };
    }
    let b = std::cmp::max(Int::one(), phi.max_abs());
    let omega: Int = (Int::one() << (n as u32 - 1)) * Int::from(n).pow(n as u32 + 1) * b.pow(2 * n as u32)
        + Int::one();
    // Integral Gram matrix I + w * phi^T phi.
    let pp = phi.transpose().mul(phi);
    let mut gram = IntMat::identity(n);
    for i in 0..n {
        for j in 0..n {
            let v = &gram[(i, j)] + &omega * &pp[(i, j)];
            gram[(i, j)] = v;
        }
    }
    let lat = QuadLattice::new(gram.to_rat()).expect("weighted form is positive definite");
    let (u, reduced) = lll_reduce(&lat, &LllOptions::default()).expect("no cancellation");
    let omega_rat = Rat::from_integer(omega);
    let mut split = n;
    for i in 0..n {
        if reduced.gram()[(i, i)] >= omega_rat {
            split = i;
            break;
        }
    }
    // The proof guarantees the small vectors come first.
    for i in 0..n {
        let small = reduced.gram()[(i, i)] < omega_rat;
        assert_eq!(small, i < split, "kernel block is not contiguous");
    }
    let kappa = u.col_slice(0, split);
    let iota = u.col_slice(split, n);
    debug_assert!(phi.mul(&kappa).is_zero());
    KernelImage {
        rank: n - split,
        kappa,
        iota,
    }
}

/// Decides `im(psi) ⊆ im(phi)` for maps into the same free group, by the
/// kernel of the stacked map followed by a surjectivity check.
pub fn image_subset(phi: &IntMat, psi: &IntMat) -> Result<bool, LatticeError> {
    if phi.rows() != psi.rows() {
        return Err(LatticeError::DimensionMismatch);
    }
    if psi.cols() == 0 || psi.is_zero() {
        return Ok(true);
    }
    let stacked = phi.hstack(psi);
    let ker = kernel_image(&stacked).kappa;
    // im(psi) ⊆ im(phi) iff the projection of the kernel onto the psi block
    // surjects onto Z^(cols of psi).
    let proj = ker.row_slice(phi.cols(), stacked.cols());
    Ok(is_surjective_free(&proj))
}

/// Does a map of free groups hit all of its target?
fn is_surjective_free(m: &IntMat) -> bool {
    let e = crate::linalg::triangularize(m);
    if e.rank < m.rows() {
        return false;
    }
    let basis = e.h.col_slice(0, e.rank);
    crate::linalg::det(&basis).abs().is_one()
}

/// One preimage of `b` under `phi`, following the `(a, x) -> phi(a) + x b`
/// construction: `NoSolution` is reported as `None`.
pub fn solve_preimage(phi: &IntMat, b: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(phi.rows(), b.len());
    let bt = IntMat::from_cols(vec![b.to_vec()]);
    let psi = phi.hstack(&bt);
    let ker = kernel_image(&psi).kappa;
    // chi: K -> Z, the last coordinate of the kernel; a solution needs -1 in
    // its image, i.e. the gcd of the last row must be 1.
    let last = ker.row_slice(phi.cols(), phi.cols() + 1);
    let mut g = Int::zero();
    let mut combo: Vec<Int> = vec![Int::zero(); ker.cols()];
    for j in 0..ker.cols() {
        let v = last[(0, j)].clone();
        if v.is_zero() {
            continue;
        }
        if g.is_zero() {
            g = v.abs();
            combo = vec![Int::zero(); ker.cols()];
            combo[j] = v.signum();
        } else {
            let (g2, x, y) = ext_gcd(&g, &v);
            for c in combo.iter_mut() {
                *c *= &x;
            }
            combo[j] += y;
            g = g2;
        }
    }
    if !g.is_one() {
        return None;
    }
    // combo gives chi(k) = +1; negate to reach -1, then read off the a part.
    let mut a = vec![Int::zero(); phi.cols()];
    for j in 0..ker.cols() {
        if combo[j].is_zero() {
            continue;
        }
        for i in 0..phi.cols() {
            let t = &ker[(i, j)] * &combo[j];
            a[i] += t;
        }
    }
    let result: Vec<Int> = a.into_iter().map(|x| -x).collect();
    debug_assert_eq!(phi.mul_vec(&result), b.to_vec());
    Some(result)
}

/// A relation-recovery instance: `t`-approximations `w_i` of hidden vectors
/// `v_i`, stored as the integer matrix `t * w` column by column, plus the
/// threshold `omega`.
///
/// The caller is responsible for the theorem's hypotheses
/// `omega >= 2^(2n+s+1) n^(2n+2) s (B/lambda)^(2n)` and
/// `t >= 2 n s sqrt(omega)/lambda` for the true vectors; with garbage bounds
/// the output is garbage.
#[derive(Debug, Clone)]
pub struct RelationInstance {
    /// `n x s` integer matrix whose column `i` is `t * w_i`.
    pub scaled: IntMat,
    pub t: Int,
    pub omega: Int,
}

impl RelationInstance {
    pub fn ambient_dim(&self) -> usize {
        self.scaled.rows()
    }

    pub fn count(&self) -> usize {
        self.scaled.cols()
    }
}

/// Computes the exact relation module `M = {x : sum x_i v_i = 0}` from
/// `t`-approximations, by one 2-reduced LLL call on the integral form
/// `q(x) = |x|^2 + |sum x_i w_i|^2 t^2` and the threshold test
/// `q(x) <= omega`.
pub fn relation_kernel(inst: &RelationInstance) -> IntMat {
    let s = inst.count();
    if s == 0 {
        return IntMat::zeros(0, 0);
    }
    let wtw = inst.scaled.transpose().mul(&inst.scaled);
    let mut gram = IntMat::identity(s);
    for i in 0..s {
        for j in 0..s {
            let v = &gram[(i, j)] + &wtw[(i, j)];
            gram[(i, j)] = v;
        }
    }
    let lat = QuadLattice::new(gram.to_rat()).expect("positive definite");
    let (u, reduced) = lll_reduce(&lat, &LllOptions::default()).expect("no cancellation");
    let omega = Rat::from_integer(inst.omega.clone());
    let mut split = 0;
    for i in 0..s {
        if reduced.gram()[(i, i)] <= omega {
            split = i + 1;
        } else {
            break;
        }
    }
    for i in 0..s {
        let small = reduced.gram()[(i, i)] <= omega;
        assert_eq!(small, i < split, "relation block is not contiguous");
    }
    u.col_slice(0, split)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::linalg;

    fn qlat(rows: &[&[i64]]) -> QuadLattice {
        QuadLattice::new(IntMat::from_i64_rows(rows).to_rat()).unwrap()
    }

    #[test]
    fn gram_schmidt_examples() {
        let gs = gram_schmidt(&qlat(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(gs.qstar, vec![rat(1, 1), rat(1, 1)]);
        assert!(gs.mu[(1, 0)].is_zero());

        let gs = gram_schmidt(&qlat(&[&[1, 1], &[1, 2]])).unwrap();
        assert_eq!(gs.mu[(1, 0)], rat(1, 1));
        assert_eq!(gs.qstar, vec![rat(1, 1), rat(1, 1)]);

        let gs = gram_schmidt(&qlat(&[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(gs.qstar, vec![rat(2, 1), rat(3, 1)]);
    }

    #[test]
    fn gram_schmidt_rejects_indefinite() {
        let m = IntMat::from_i64_rows(&[&[0, 1], &[1, 0]]).to_rat();
        assert_eq!(
            QuadLattice::new(m).unwrap_err(),
            LatticeError::NotPositiveDefinite
        );
    }

    #[test]
    fn det_product_identity() {
        let lat = qlat(&[&[4, 1, 0], &[1, 5, 2], &[0, 2, 6]]);
        let gs = gram_schmidt(&lat).unwrap();
        assert_eq!(gs.det(), lat.det());
    }

    #[test]
    fn lll_basic_certification() {
        // basis b1=(201,37), b2=(1648,297): notoriously skew
        let b = IntMat::from_i64_rows(&[&[201, 1648], &[37, 297]]);
        let lat = QuadLattice::from_basis_columns(&b.to_rat()).unwrap();
        let c = rat(2, 1);
        let (u, red) = lll_reduce(&lat, &LllOptions::with_c(c.clone())).unwrap();
        assert!(is_c_reduced(&red, &c).unwrap());
        assert_eq!(linalg::det(&u).abs(), int(1));
        assert_eq!(red.det(), lat.det());
        // first reduced vector obeys q(b1) <= 2^(n-1) * lambda_1; brute force
        // search certifies lambda_1 <= 40^2.
        let q1 = red.gram()[(0, 0)].clone();
        assert!(q1 <= rat(2 * 1600, 1));
    }

    #[test]
    fn is_c_reduced_counterexample() {
        // mu = 3/5 violates size reduction
        let lat = qlat(&[&[25, 15], &[15, 25]]);
        assert!(!is_c_reduced(&lat, &rat(2, 1)).unwrap());
        assert!(is_c_reduced(&qlat(&[&[1, 0], &[0, 1]]), &rat(2, 1)).unwrap());
    }

    #[test]
    fn kernel_image_examples() {
        let phi = IntMat::from_i64_rows(&[&[1, 2], &[2, 4]]);
        let ki = kernel_image(&phi);
        assert_eq!(ki.rank, 1);
        assert_eq!(ki.kappa.cols(), 1);
        let k = ki.kappa.col(0);
        assert_eq!(k[0].abs(), int(2));
        assert_eq!(k[1].abs(), int(1));
        let full = ki.kappa.hstack(&ki.iota);
        assert_eq!(linalg::det(&full).abs(), int(1));
        // image basis is +-(1,2)^T
        let im = ki.image_basis(&phi);
        assert_eq!(im.col(0)[0].abs(), int(1));
        assert_eq!(im.col(0)[1].abs(), int(2));

        let id = IntMat::identity(3);
        let ki = kernel_image(&id);
        assert_eq!(ki.rank, 3);
        assert_eq!(ki.kappa.cols(), 0);

        let z = IntMat::zeros(2, 3);
        let ki = kernel_image(&z);
        assert_eq!(ki.rank, 0);
        assert_eq!(ki.kappa.cols(), 3);
        assert_eq!(linalg::det(&ki.kappa).abs(), int(1));
    }

    #[test]
    fn image_subset_examples() {
        let id = IntMat::identity(2);
        let two = id.scale(&int(2));
        assert!(image_subset(&id, &two).unwrap());
        assert!(!image_subset(&two, &id).unwrap());
        assert!(image_subset(&two, &IntMat::zeros(2, 2)).unwrap());
        assert!(matches!(
            image_subset(&id, &IntMat::zeros(3, 1)),
            Err(LatticeError::DimensionMismatch)
        ));
    }

    #[test]
    fn preimage_examples() {
        let phi = IntMat::from_i64_rows(&[&[2]]);
        assert_eq!(solve_preimage(&phi, &[int(6)]), Some(vec![int(3)]));
        assert_eq!(solve_preimage(&phi, &[int(3)]), None);

        let phi = IntMat::from_i64_rows(&[&[1, 2], &[2, 4]]);
        let a = solve_preimage(&phi, &[int(3), int(6)]).unwrap();
        assert_eq!(phi.mul_vec(&a), vec![int(3), int(6)]);
    }

    #[test]
    fn relation_kernel_exact_cases() {
        // v = (1, -1) known exactly: w = v, huge t
        let t = int(1_000_000);
        let scaled = IntMat::from_cols(vec![vec![t.clone()], vec![-t.clone()]]);
        let inst = RelationInstance {
            scaled,
            t: t.clone(),
            omega: int(1_000),
        };
        let m = relation_kernel(&inst);
        assert_eq!(m.cols(), 1);
        assert_eq!(m.col(0)[0].abs(), int(1));
        assert_eq!(m.col(0)[0], m.col(0)[1]);

        // v1=(1,0), v2=(0,1): no relations
        let scaled = IntMat::from_fn(2, 2, |i, j| if i == j { t.clone() } else { int(0) });
        let inst = RelationInstance {
            scaled,
            t,
            omega: int(1_000),
        };
        assert_eq!(relation_kernel(&inst).cols(), 0);
    }

    #[test]
    fn lll_randomized_certification() {
        // deterministic LCG so the test is reproducible
        let mut state = 0x12345678u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 19) as i64 - 9
        };
        let c = rat(2, 1);
        for trial in 0..50 {
            let n = 2 + (trial % 4);
            // random full-rank basis -> Gram
            let mut b;
            loop {
                b = IntMat::from_fn(n, n, |_, _| int(next()));
                if !linalg::det(&b).is_zero() {
                    break;
                }
            }
            let lat = QuadLattice::from_basis_columns(&b.to_rat()).unwrap();
            let (u, red) = lll_reduce(&lat, &LllOptions::with_c(c.clone())).unwrap();
            assert!(is_c_reduced(&red, &c).unwrap(), "trial {trial}");
            assert_eq!(linalg::det(&u).abs(), int(1));
            assert_eq!(red.det(), lat.det());
            assert_eq!(red, lat.transform(&u));
        }
    }
}
