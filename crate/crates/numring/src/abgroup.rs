//! Finitely generated abelian groups presented as cokernels of integer
//! matrices.
//!
//! A group is `Z^n / im(rel)` for a relation matrix `rel` whose columns
//! span the relation lattice; elements are ambient vectors, morphisms are
//! integer matrices between ambient free groups that carry relations into
//! relations. Everything reduces to integer linear algebra on column spans.

use crate::exact::{ext_gcd, Int};
use crate::linalg;
use crate::mat::IntMat;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

pub type Element = Vec<Int>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FgGroup {
    ambient: usize,
    rel: IntMat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NotAMorphism;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InfiniteGroup;

impl FgGroup {
    /// Group `Z^ambient / im(rel)`. The relation matrix need not have
    /// independent columns.
    pub fn new(ambient: usize, rel: IntMat) -> Self {
        assert_eq!(rel.rows(), ambient, "relation matrix has wrong height");
        FgGroup { ambient, rel }
    }

    pub fn free(n: usize) -> Self {
        FgGroup {
            ambient: n,
            rel: IntMat::zeros(n, 0),
        }
    }

    pub fn cyclic(d: &Int) -> Self {
        FgGroup {
            ambient: 1,
            rel: IntMat::from_rows(vec![vec![d.clone()]]),
        }
    }

    /// `∏ Z/d_i` as a block-diagonal presentation.
    pub fn from_invariants(ds: &[Int]) -> Self {
        let n = ds.len();
        FgGroup {
            ambient: n,
            rel: IntMat::from_fn(n, n, |i, j| if i == j { ds[i].clone() } else { Int::zero() }),
        }
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn relations(&self) -> &IntMat {
        &self.rel
    }

    pub fn zero_element(&self) -> Element {
        vec![Int::zero(); self.ambient]
    }

    pub fn element_eq(&self, x: &Element, y: &Element) -> bool {
        let diff: Vec<Int> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        linalg::solve(&self.rel, &diff).is_some()
    }

    pub fn is_zero_element(&self, x: &Element) -> bool {
        linalg::solve(&self.rel, x).is_some()
    }

    /// Canonical representative: coordinates in pivot rows of the relation
    /// Hermite basis are reduced into `[0, pivot)`.
    pub fn reduce(&self, x: &Element) -> Element {
        let e = linalg::triangularize(&self.rel);
        let mut v = x.to_vec();
        for (k, &row) in e.pivot_rows.iter().enumerate() {
            let p = &e.h[(row, k)];
            let q = v[row].div_floor(p);
            if !q.is_zero() {
                for i in 0..self.ambient {
                    let t = &e.h[(i, k)] * &q;
                    v[i] -= t;
                }
            }
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupMorphism {
    pub src: FgGroup,
    pub dst: FgGroup,
    pub phi: IntMat,
}

/// Decides whether `phi` represents a morphism `src -> dst`, i.e. whether
/// `im(phi . rel_src) ⊆ im(rel_dst)`.
pub fn morphism_check(
    src: &FgGroup,
    dst: &FgGroup,
    phi: IntMat,
) -> Result<GroupMorphism, NotAMorphism> {
    if phi.rows() != dst.ambient || phi.cols() != src.ambient {
        return Err(NotAMorphism);
    }
    let carried = phi.mul(&src.rel);
    if !linalg::span_subset(&carried, &dst.rel) {
        return Err(NotAMorphism);
    }
    Ok(GroupMorphism {
        src: src.clone(),
        dst: dst.clone(),
        phi,
    })
}

impl GroupMorphism {
    pub fn identity(g: &FgGroup) -> Self {
        GroupMorphism {
            src: g.clone(),
            dst: g.clone(),
            phi: IntMat::identity(g.ambient),
        }
    }

    pub fn zero(src: &FgGroup, dst: &FgGroup) -> Self {
        GroupMorphism {
            src: src.clone(),
            dst: dst.clone(),
            phi: IntMat::zeros(dst.ambient, src.ambient),
        }
    }

    pub fn apply(&self, x: &Element) -> Element {
        self.phi.mul_vec(x)
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &GroupMorphism) -> GroupMorphism {
        assert_eq!(other.dst.ambient, self.src.ambient, "composition mismatch");
        GroupMorphism {
            src: other.src.clone(),
            dst: self.dst.clone(),
            phi: self.phi.mul(&other.phi),
        }
    }

    pub fn sub(&self, other: &GroupMorphism) -> GroupMorphism {
        GroupMorphism {
            src: self.src.clone(),
            dst: self.dst.clone(),
            phi: self.phi.sub(&other.phi),
        }
    }

    pub fn is_zero_morphism(&self) -> bool {
        linalg::span_subset(&self.phi, &self.dst.rel)
    }

    pub fn eq_morphism(&self, other: &GroupMorphism) -> bool {
        self.sub(other).is_zero_morphism()
    }
}

/// Generators of `{x in Z^(src ambient) : phi(x) ∈ im(rel_dst)}`, the full
/// preimage of the relation lattice.
fn relation_preimage(f: &GroupMorphism) -> IntMat {
    linalg::preimage_lattice(&f.phi, &f.dst.rel)
}

/// Injective `k : K -> A` with `im(k) = ker(f)` and injective `i : I -> B`
/// with `im(i) = im(f)`.
pub fn kernel_image_of(f: &GroupMorphism) -> (GroupMorphism, GroupMorphism) {
    // Kernel: basis of {x : phi x ∈ im(rel_dst)}, presented modulo rel_src.
    let k1 = relation_preimage(f);
    let k_rel = linalg::preimage_lattice(&k1, &f.src.rel);
    let kernel = GroupMorphism {
        src: FgGroup::new(k1.cols(), k_rel),
        dst: f.src.clone(),
        phi: k1,
    };
    // Image: basis of im(phi) + im(rel_dst), presented modulo rel_dst.
    let i1 = linalg::hermite_basis(&f.phi.hstack(&f.dst.rel));
    let i_rel = linalg::preimage_lattice(&i1, &f.dst.rel);
    let image = GroupMorphism {
        src: FgGroup::new(i1.cols(), i_rel),
        dst: f.dst.clone(),
        phi: i1,
    };
    (kernel, image)
}

pub fn is_injective(f: &GroupMorphism) -> bool {
    let k1 = relation_preimage(f);
    linalg::span_subset(&k1, &f.src.rel)
}

pub fn is_surjective(f: &GroupMorphism) -> bool {
    let stacked = f.phi.hstack(&f.dst.rel);
    let e = linalg::triangularize(&stacked);
    if e.rank < f.dst.ambient {
        return false;
    }
    linalg::det(&e.h.col_slice(0, e.rank)).abs().is_one()
}

pub fn is_isomorphism(f: &GroupMorphism) -> bool {
    is_injective(f) && is_surjective(f)
}

/// One `a` with `f(a) = b` up to relations, or `None`.
pub fn preimage(f: &GroupMorphism, b: &Element) -> Option<Element> {
    assert_eq!(b.len(), f.dst.ambient);
    let stacked = f.phi.hstack(&f.dst.rel);
    let sol = linalg::solve(&stacked, b)?;
    Some(sol[..f.src.ambient].to_vec())
}

/// Discrete logarithm: some `n >= 1` with `n a = b` in `A`, if one exists.
pub fn discrete_log(a_group: &FgGroup, a: &Element, b: &Element) -> Option<Int> {
    let f = GroupMorphism {
        src: FgGroup::free(1),
        dst: a_group.clone(),
        phi: IntMat::from_cols(vec![a.clone()]),
    };
    let n = preimage(&f, b)?[0].clone();
    match element_order(a_group, a) {
        Some(ord) => {
            let m = n.mod_floor(&ord);
            Some(if m.is_zero() { ord } else { m })
        }
        None => {
            if n.is_positive() {
                Some(n)
            } else {
                None
            }
        }
    }
}

pub struct Product {
    pub group: FgGroup,
    pub incl_a: GroupMorphism,
    pub incl_b: GroupMorphism,
    pub proj_a: GroupMorphism,
    pub proj_b: GroupMorphism,
}

pub fn direct_product(a: &FgGroup, b: &FgGroup) -> Product {
    let n = a.ambient + b.ambient;
    let rel = IntMat::from_fn(n, a.rel.cols() + b.rel.cols(), |i, j| {
        if i < a.ambient && j < a.rel.cols() {
            a.rel[(i, j)].clone()
        } else if i >= a.ambient && j >= a.rel.cols() {
            b.rel[(i - a.ambient, j - a.rel.cols())].clone()
        } else {
            Int::zero()
        }
    });
    let group = FgGroup::new(n, rel);
    let ia = IntMat::from_fn(n, a.ambient, |i, j| {
        if i == j {
            Int::one()
        } else {
            Int::zero()
        }
    });
    let ib = IntMat::from_fn(n, b.ambient, |i, j| {
        if i == j + a.ambient {
            Int::one()
        } else {
            Int::zero()
        }
    });
    Product {
        incl_a: GroupMorphism {
            src: a.clone(),
            dst: group.clone(),
            phi: ia.clone(),
        },
        incl_b: GroupMorphism {
            src: b.clone(),
            dst: group.clone(),
            phi: ib.clone(),
        },
        proj_a: GroupMorphism {
            src: group.clone(),
            dst: a.clone(),
            phi: ia.transpose(),
        },
        proj_b: GroupMorphism {
            src: group.clone(),
            dst: b.clone(),
            phi: ib.transpose(),
        },
        group,
    }
}

/// `#A`, or `None` when infinite; uses `#coker = |det|` on a triangular
/// relation basis.
pub fn group_order(a: &FgGroup) -> Option<Int> {
    let e = linalg::triangularize(&a.rel);
    if e.rank < a.ambient {
        return None;
    }
    Some(linalg::det(&e.h.col_slice(0, e.rank)).abs())
}

/// Order of an element, or `None` when infinite.
pub fn element_order(a: &FgGroup, x: &Element) -> Option<Int> {
    assert_eq!(x.len(), a.ambient);
    let xm = IntMat::from_cols(vec![x.clone()]);
    let lat = linalg::preimage_lattice(&xm, &a.rel);
    if lat.cols() == 0 {
        return None;
    }
    Some(lat[(0, 0)].abs())
}

/// Exponent of a finite group together with a witness of that order.
pub fn group_exponent(a: &FgGroup) -> Result<(Int, Element), InfiniteGroup> {
    if group_order(a).is_none() {
        return Err(InfiniteGroup);
    }
    let mut exp = Int::one();
    let mut witness = a.zero_element();
    for i in 0..a.ambient {
        let mut g = a.zero_element();
        g[i] = Int::one();
        let ord = element_order(a, &g).expect("finite group");
        (exp, witness) = combine_orders(a, (&exp, &witness), (&ord, &g));
    }
    debug_assert_eq!(element_order(a, &witness), Some(exp.clone()));
    Ok((exp, witness))
}

/// Given elements of orders `r`, `s`, produce one of order `lcm(r, s)`.
/// The coprime splitting of the lcm comes from a coprime basis of `{r, s}`,
/// never from a prime factorization.
fn combine_orders(
    a: &FgGroup,
    (r, x): (&Int, &Element),
    (s, y): (&Int, &Element),
) -> (Int, Element) {
    if (r % s).is_zero() {
        return (r.clone(), x.clone());
    }
    if (s % r).is_zero() {
        return (s.clone(), y.clone());
    }
    let cb = crate::coprime::coprime_basis_factor(&[r.clone(), s.clone()]);
    let re = cb.factor_over(r).expect("r factors over its own basis");
    let se = cb.factor_over(s).expect("s factors over its own basis");
    let mut rp = Int::one();
    let mut sp = Int::one();
    for (j, c) in cb.elems.iter().enumerate() {
        if re[j] >= se[j] {
            rp *= c.pow(re[j]);
        } else {
            sp *= c.pow(se[j]);
        }
    }
    let cx = r / &rp;
    let cy = s / &sp;
    let z: Element = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| xi * &cx + yi * &cy)
        .collect();
    let lcm = &rp * &sp;
    debug_assert_eq!(element_order(a, &z), Some(lcm.clone()));
    (lcm, z)
}

/// A homomorphism group `(H, e)`: `H` is isomorphic to `Hom(A, B)` and the
/// evaluation matrix `e` sends ambient coordinates of `H` to `dst x src`
/// matrices (stored column-major).
pub struct HomGroup {
    pub group: FgGroup,
    pub eval: IntMat,
    pub src_ambient: usize,
    pub dst_ambient: usize,
}

impl HomGroup {
    /// The matrix represented by an ambient element of `H`.
    pub fn matrix_of(&self, h: &Element) -> IntMat {
        let v = self.eval.mul_vec(h);
        IntMat::from_fn(self.dst_ambient, self.src_ambient, |i, j| {
            v[j * self.dst_ambient + i].clone()
        })
    }

    pub fn morphism_of(&self, a: &FgGroup, b: &FgGroup, h: &Element) -> GroupMorphism {
        morphism_check(a, b, self.matrix_of(h)).expect("hom elements are morphisms")
    }

    /// Ambient coordinates of `H` representing a given morphism matrix.
    pub fn coords_of(&self, m: &IntMat) -> Option<Element> {
        let v: Vec<Int> = (0..self.src_ambient)
            .flat_map(|j| (0..self.dst_ambient).map(move |i| m[(i, j)].clone()))
            .collect();
        linalg::solve(&self.eval, &v)
    }
}

/// Hom of a free group `Z^k` into `B`: ambient `k * b1` with block-diagonal
/// relations.
fn hom_from_free(k: usize, b: &FgGroup) -> FgGroup {
    let b1 = b.ambient;
    let b0 = b.rel.cols();
    let rel = IntMat::from_fn(k * b1, k * b0, |row, col| {
        let (jr, i) = (row / b1, row % b1);
        let (jc, t) = (col / b0.max(1), col % b0.max(1));
        if b0 == 0 {
            Int::zero()
        } else if jr == jc {
            b.rel[(i, t)].clone()
        } else {
            Int::zero()
        }
    });
    FgGroup::new(k * b1, rel)
}

/// `Hom(A, B)` via `Hom(A, B) ≅ ker(alpha^* : Hom(Z^a1, B) -> Hom(Z^a0, B))`.
pub fn hom_group(a: &FgGroup, b: &FgGroup) -> HomGroup {
    let (a1, b1) = (a.ambient, b.ambient);
    let a0 = a.rel.cols();
    let f1 = hom_from_free(a1, b);
    let f0 = hom_from_free(a0, b);
    // alpha^*(phi) = phi . alpha, in column-major blocks.
    let alpha_star = IntMat::from_fn(a0 * b1, a1 * b1, |row, col| {
        let (j0, r) = (row / b1, row % b1);
        let (i, r2) = (col / b1, col % b1);
        if r == r2 {
            a.rel[(i, j0)].clone()
        } else {
            Int::zero()
        }
    });
    let f = GroupMorphism {
        src: f1,
        dst: f0,
        phi: alpha_star,
    };
    let (k, _) = kernel_image_of(&f);
    HomGroup {
        group: k.src,
        eval: k.phi,
        src_ambient: a1,
        dst_ambient: b1,
    }
}

/// A tensor product `T ≅ A ⊗ B` with the inducing bilinear map.
pub struct TensorGroup {
    pub group: FgGroup,
    a_ambient: usize,
    b_ambient: usize,
}

impl TensorGroup {
    /// Image of `(a, b)` under the bilinear map `A x B -> T`.
    pub fn bilinear(&self, a: &Element, b: &Element) -> Element {
        assert_eq!(a.len(), self.a_ambient);
        assert_eq!(b.len(), self.b_ambient);
        let mut out = vec![Int::zero(); self.a_ambient * self.b_ambient];
        for i in 0..self.a_ambient {
            for j in 0..self.b_ambient {
                out[i * self.b_ambient + j] = &a[i] * &b[j];
            }
        }
        out
    }
}

pub fn tensor_group(a: &FgGroup, b: &FgGroup) -> TensorGroup {
    let (a1, b1) = (a.ambient, b.ambient);
    let mut cols: Vec<Vec<Int>> = Vec::new();
    for c in 0..a.rel.cols() {
        let u = a.rel.col(c);
        for j in 0..b1 {
            let mut v = vec![Int::zero(); a1 * b1];
            for i in 0..a1 {
                v[i * b1 + j] = u[i].clone();
            }
            cols.push(v);
        }
    }
    for c in 0..b.rel.cols() {
        let u = b.rel.col(c);
        for i in 0..a1 {
            let mut v = vec![Int::zero(); a1 * b1];
            for j in 0..b1 {
                v[i * b1 + j] = u[j].clone();
            }
            cols.push(v);
        }
    }
    let rel = if cols.is_empty() {
        IntMat::zeros(a1 * b1, 0)
    } else {
        IntMat::from_cols(cols)
    };
    TensorGroup {
        group: FgGroup::new(a1 * b1, rel),
        a_ambient: a1,
        b_ambient: b1,
    }
}

/// Outcome of the split-exactness test for `0 -> A -f-> B -g-> C -> 0`.
pub enum SplitResult {
    NotExact,
    ExactNotSplit,
    Split {
        /// `l : B -> A` with `l ∘ f = id_A`.
        left_inverse: GroupMorphism,
        /// `s : C -> B` with `g ∘ s = id_C`.
        right_inverse: GroupMorphism,
    },
}

/// Decides exactness and splitness of `0 -> A -> B -> C -> 0`, producing a
/// verified retraction/section pair when split. The split test solves for a
/// preimage of `id_C` under `g_* : Hom(C, B) -> Hom(C, C)`.
pub fn split_exact(f: &GroupMorphism, g: &GroupMorphism) -> SplitResult {
    assert_eq!(f.dst.ambient, g.src.ambient, "f and g do not compose");
    if !is_injective(f) || !is_surjective(g) {
        return SplitResult::NotExact;
    }
    if !g.compose(f).is_zero_morphism() {
        return SplitResult::NotExact;
    }
    let kg = relation_preimage(g);
    if !linalg::span_subset(&kg, &f.phi.hstack(&f.dst.rel)) {
        return SplitResult::NotExact;
    }

    let c = &g.dst;
    let b = &g.src;
    let hom_cb = hom_group(c, b);
    let hom_cc = hom_group(c, c);
    // g_* column by column: push each generator of Hom(C,B) through g and
    // express the result in Hom(C,C) coordinates.
    let mut cols: Vec<Vec<Int>> = Vec::new();
    for j in 0..hom_cb.group.ambient_rank() {
        let mut h = vec![Int::zero(); hom_cb.group.ambient_rank()];
        h[j] = Int::one();
        let m = hom_cb.matrix_of(&h);
        let gm = g.phi.mul(&m);
        let coords = hom_cc
            .coords_of(&gm)
            .expect("g composed with a morphism C->B represents a morphism C->C");
        cols.push(coords);
    }
    let g_star_phi = if cols.is_empty() {
        IntMat::zeros(hom_cc.group.ambient_rank(), 0)
    } else {
        IntMat::from_cols(cols)
    };
    let g_star = morphism_check(&hom_cb.group, &hom_cc.group, g_star_phi)
        .expect("composition with g is functorial");
    let id_coords = hom_cc
        .coords_of(&IntMat::identity(c.ambient))
        .expect("identity is a morphism");
    let Some(h_sec) = preimage(&g_star, &id_coords) else {
        return SplitResult::ExactNotSplit;
    };
    let section = hom_cb.morphism_of(c, b, &h_sec);
    debug_assert!(g.compose(&section).eq_morphism(&GroupMorphism::identity(c)));

    // Left inverse of f: invert the isomorphism (f, s) : A x C -> B on the
    // ambient generators of B.
    let a = &f.src;
    let theta = f.phi.hstack(&section.phi);
    let solve_block = theta.hstack(&b.rel);
    let mut lcols: Vec<Vec<Int>> = Vec::new();
    for i in 0..b.ambient {
        let mut e = vec![Int::zero(); b.ambient];
        e[i] = Int::one();
        let sol = linalg::solve(&solve_block, &e).expect("(f, s) is onto");
        lcols.push(sol[..a.ambient].to_vec());
    }
    let l_phi = if lcols.is_empty() {
        IntMat::zeros(a.ambient, 0)
    } else {
        IntMat::from_cols(lcols)
    };
    let left = morphism_check(b, a, l_phi).expect("retraction is a morphism");
    debug_assert!(left.compose(f).eq_morphism(&GroupMorphism::identity(a)));
    SplitResult::Split {
        left_inverse: left,
        right_inverse: section,
    }
}

/// Injection of the torsion subgroup, computed by the double-perp
/// construction: the saturation of the relation lattice is exactly the set
/// of ambient vectors with torsion image.
pub fn torsion_subgroup(a: &FgGroup) -> GroupMorphism {
    let t1 = linalg::saturation(&a.rel);
    let t_rel = linalg::preimage_lattice(&t1, &a.rel);
    GroupMorphism {
        src: FgGroup::new(t1.cols(), t_rel),
        dst: a.clone(),
        phi: t1,
    }
}

/// `A ≅ Z^r x ∏ Z/n_k` with explicit inverse projections.
pub struct StructureDecomposition {
    pub free_rank: usize,
    /// Invariant factors, each > 1, with `n_m | ... | n_1`.
    pub invariants: Vec<Int>,
    /// The standard model `Z^r x ∏ Z/n_k` (free coordinates first).
    pub parts: FgGroup,
    pub to_parts: GroupMorphism,
    pub from_parts: GroupMorphism,
}

/// Structure theorem: torsion splits off through a unimodular basis adapted
/// to the saturated relation lattice, then cyclic factors peel off the
/// torsion part by repeated exponent-witness extraction.
pub fn structure_decompose(a: &FgGroup) -> StructureDecomposition {
    let n = a.ambient;
    // Unimodular W = [kappa | iota] with im(kappa) = saturation of im(rel).
    let t1 = linalg::saturation(&a.rel);
    let (kappa, iota) =
        linalg::kernel_complement(&linalg::integer_kernel(&t1.transpose()).transpose());
    let s = kappa.cols();
    let r = n - s;
    let w = kappa.hstack(&iota);
    debug_assert_eq!(linalg::det(&w).abs(), Int::one());
    let w_inv = int_inverse_unimodular(&w);
    // Relations in the new coordinates live inside the torsion block.
    let rho = w_inv.mul(&a.rel);
    debug_assert!(rho.row_slice(s, n).is_zero());
    let t_group = FgGroup::new(s, rho.row_slice(0, s));

    // Peel off cyclic factors from the torsion part.
    let mut invariants: Vec<Int> = Vec::new();
    let mut gens: Vec<Element> = Vec::new(); // in T coordinates
    let mut retractions: Vec<Vec<Int>> = Vec::new(); // rows, in T coordinates
    let mut cur = t_group.clone();
    while group_order(&cur).expect("torsion part is finite") > Int::one() {
        let (e, wit) = group_exponent(&cur).expect("finite");
        let l = solve_retraction(&cur, &wit, &e);
        invariants.push(e);
        gens.push(wit.clone());
        retractions.push(l);
        let quotient_rel = cur.rel.hstack(&IntMat::from_cols(vec![wit]));
        cur = FgGroup::new(s, quotient_rel);
    }
    // Adjust generators so that earlier retractions vanish on later ones.
    for j in 0..gens.len() {
        for k in j + 1..gens.len() {
            let lj_ak: Int = retractions[j]
                .iter()
                .zip(&gens[k])
                .map(|(u, v)| u * v)
                .sum();
            let c = lj_ak.mod_floor(&invariants[j]);
            if !c.is_zero() {
                let adjusted: Vec<Int> = gens[k]
                    .iter()
                    .zip(&gens[j])
                    .map(|(x, y)| x - &c * y)
                    .collect();
                gens[k] = adjusted;
            }
        }
    }
    for win in invariants.windows(2) {
        debug_assert!((&win[0] % &win[1]).is_zero(), "invariant chain broken");
    }

    let m = invariants.len();
    let parts = {
        let rel = IntMat::from_fn(r + m, m, |i, j| {
            if i == r + j {
                invariants[j].clone()
            } else {
                Int::zero()
            }
        });
        FgGroup::new(r + m, rel)
    };

    // to_parts: free coordinates are the iota-rows of W^{-1}; torsion rows
    // are the retractions composed with the kappa-rows.
    let w_inv_torsion = w_inv.row_slice(0, s);
    let w_inv_free = w_inv.row_slice(s, n);
    let to_phi = IntMat::from_fn(r + m, n, |i, j| {
        if i < r {
            w_inv_free[(i, j)].clone()
        } else {
            (0..s)
                .map(|t| &retractions[i - r][t] * &w_inv_torsion[(t, j)])
                .sum()
        }
    });
    // from_parts: free columns come from iota, torsion columns are the
    // adjusted generators carried back through kappa.
    let from_phi = IntMat::from_fn(n, r + m, |i, j| {
        if j < r {
            iota[(i, j)].clone()
        } else {
            (0..s).map(|t| &kappa[(i, t)] * &gens[j - r][t]).sum()
        }
    });
    let to_parts = morphism_check(a, &parts, to_phi).expect("projection is a morphism");
    let from_parts = morphism_check(&parts, a, from_phi).expect("section is a morphism");
    debug_assert!(to_parts
        .compose(&from_parts)
        .eq_morphism(&GroupMorphism::identity(&parts)));
    debug_assert!(from_parts
        .compose(&to_parts)
        .eq_morphism(&GroupMorphism::identity(a)));
    StructureDecomposition {
        free_rank: r,
        invariants,
        parts,
        to_parts,
        from_parts,
    }
}

/// Solves for a retraction row `l` with `l . rel ≡ 0` and `l(w) ≡ 1 mod e`.
fn solve_retraction(g: &FgGroup, witness: &Element, e: &Int) -> Vec<Int> {
    let s = g.ambient_rank();
    let m = g.rel.cols();
    // unknowns (l, u, v): rel^T l + e u = 0, w^T l + e v = 1
    let relt = g.rel.transpose();
    let wrow = IntMat::from_rows(vec![witness.clone()]);
    let lhs_top = relt
        .hstack(&IntMat::identity(m).scale(e))
        .hstack(&IntMat::zeros(m, 1));
    let lhs_bot = wrow
        .hstack(&IntMat::zeros(1, m))
        .hstack(&IntMat::from_rows(vec![vec![e.clone()]]));
    let lhs = lhs_top.vstack(&lhs_bot);
    let mut target = vec![Int::zero(); m + 1];
    target[m] = Int::one();
    let sol = linalg::solve(&lhs, &target).expect("retraction exists for an exponent witness");
    sol[..s].to_vec()
}

/// Exact integer inverse of a unimodular matrix.
fn int_inverse_unimodular(w: &IntMat) -> IntMat {
    let inv = w.to_rat().inverse().expect("unimodular matrix");
    IntMat::from_fn(w.rows(), w.cols(), |i, j| {
        assert!(inv[(i, j)].is_integer());
        inv[(i, j)].to_integer()
    })
}

/// Cyclic decomposition refined against a set `S`: moduli are pairwise
/// coprime or powers of a common integer, and each either divides a power
/// of an element of `S` or is coprime to all of them.
pub struct RefinedDecomposition {
    pub free_rank: usize,
    pub moduli: Vec<Int>,
    pub parts: FgGroup,
    pub to_parts: GroupMorphism,
    pub from_parts: GroupMorphism,
}

pub fn structure_refine(a: &FgGroup, s: &[Int]) -> RefinedDecomposition {
    let dec = structure_decompose(a);
    let mut basis_inputs: Vec<Int> = s.to_vec();
    basis_inputs.extend(dec.invariants.iter().cloned());
    basis_inputs.retain(|x| x.is_positive());
    let cb = crate::coprime::coprime_basis_factor(&basis_inputs);
    let r = dec.free_rank;

    // Split each invariant into coprime-basis power factors with CRT maps.
    let mut moduli: Vec<Int> = Vec::new();
    let mut to_rows: Vec<(usize, Int)> = Vec::new();
    let mut from_cols: Vec<(usize, Int)> = Vec::new();
    for (k, nk) in dec.invariants.iter().enumerate() {
        let expo = cb.factor_over(nk).expect("invariant factors over basis");
        let factors: Vec<Int> = cb
            .elems
            .iter()
            .zip(&expo)
            .filter(|(_, e)| **e > 0)
            .map(|(c, e)| c.pow(*e))
            .collect();
        for f in &factors {
            let cof = nk / f;
            let (g, inv, _) = ext_gcd(&cof, f);
            assert!(g.is_one());
            let u = (&cof * inv).mod_floor(nk);
            moduli.push(f.clone());
            to_rows.push((k, Int::one()));
            from_cols.push((k, u));
        }
    }

    let total = moduli.len();
    let parts = {
        let rel = IntMat::from_fn(r + total, total, |i, j| {
            if i == r + j {
                moduli[j].clone()
            } else {
                Int::zero()
            }
        });
        FgGroup::new(r + total, rel)
    };
    let m = dec.invariants.len();
    let split = IntMat::from_fn(r + total, r + m, |i, j| {
        if i < r {
            if i == j {
                Int::one()
            } else {
                Int::zero()
            }
        } else if j >= r && to_rows[i - r].0 == j - r {
            to_rows[i - r].1.clone()
        } else {
            Int::zero()
        }
    });
    let unsplit = IntMat::from_fn(r + m, r + total, |i, j| {
        if i < r {
            if i == j {
                Int::one()
            } else {
                Int::zero()
            }
        } else if j >= r && from_cols[j - r].0 == i - r {
            from_cols[j - r].1.clone()
        } else {
            Int::zero()
        }
    });
    let to_phi = split.mul(&dec.to_parts.phi);
    let from_phi = dec.from_parts.phi.mul(&unsplit);
    let to_parts = morphism_check(a, &parts, to_phi).expect("refined projection");
    let from_parts = morphism_check(&parts, a, from_phi).expect("refined section");
    debug_assert!(from_parts
        .compose(&to_parts)
        .eq_morphism(&GroupMorphism::identity(a)));
    debug_assert!(to_parts
        .compose(&from_parts)
        .eq_morphism(&GroupMorphism::identity(&parts)));
    RefinedDecomposition {
        free_rank: r,
        moduli,
        parts,
        to_parts,
        from_parts,
    }
}


#[cfg(test)]
mod tests {
    use super::test_oracles::snf_invariants;
    use super::*;
    use crate::exact::int;

    fn zmod(d: i64) -> FgGroup {
        FgGroup::cyclic(&int(d))
    }

    fn elt(vals: &[i64]) -> Element {
        vals.iter().map(|&v| int(v)).collect()
    }

    #[test]
    fn morphism_check_examples() {
        let a = zmod(6);
        assert!(morphism_check(&a, &a, IntMat::identity(1)).is_ok());
        // phi = 1 : Z/2 -> Z/4 is not a morphism, phi = 2 is
        let z2 = zmod(2);
        let z4 = zmod(4);
        assert!(morphism_check(&z2, &z4, IntMat::from_i64_rows(&[&[1]])).is_err());
        assert!(morphism_check(&z2, &z4, IntMat::from_i64_rows(&[&[2]])).is_ok());
    }

    #[test]
    fn kernel_image_examples() {
        // f : Z -> Z/4, 1 -> 2: kernel 2Z, image ≅ Z/2
        let f =
            morphism_check(&FgGroup::free(1), &zmod(4), IntMat::from_i64_rows(&[&[2]])).unwrap();
        let (k, i) = kernel_image_of(&f);
        assert!(is_injective(&k));
        assert!(is_injective(&i));
        assert_eq!(group_order(&k.src), None); // 2Z is infinite
        assert_eq!(group_order(&i.src), Some(int(2)));

        // f = x2 : Z/4 -> Z/4: kernel and image both Z/2
        let f = morphism_check(&zmod(4), &zmod(4), IntMat::from_i64_rows(&[&[2]])).unwrap();
        let (k, i) = kernel_image_of(&f);
        assert_eq!(group_order(&k.src), Some(int(2)));
        assert_eq!(group_order(&i.src), Some(int(2)));

        // zero morphism: kernel is everything
        let f = GroupMorphism::zero(&zmod(4), &zmod(2));
        let (k, i) = kernel_image_of(&f);
        assert_eq!(group_order(&k.src), Some(int(4)));
        assert_eq!(group_order(&i.src), Some(int(1)));
    }

    #[test]
    fn jectivity_examples() {
        let id = GroupMorphism::identity(&zmod(6));
        assert!(is_injective(&id) && is_surjective(&id));

        let f = morphism_check(
            &FgGroup::free(1),
            &FgGroup::free(1),
            IntMat::from_i64_rows(&[&[2]]),
        )
        .unwrap();
        assert!(is_injective(&f));
        assert!(!is_surjective(&f));

        let f = morphism_check(&zmod(2), &zmod(4), IntMat::from_i64_rows(&[&[2]])).unwrap();
        assert!(is_injective(&f));
        assert!(!is_surjective(&f));

        let f = morphism_check(&zmod(4), &zmod(2), IntMat::from_i64_rows(&[&[1]])).unwrap();
        assert!(!is_injective(&f));
        assert!(is_surjective(&f));
    }

    #[test]
    fn preimage_and_dlog() {
        let a = zmod(7);
        let n = discrete_log(&a, &elt(&[3]), &elt(&[6])).unwrap();
        assert!(a.element_eq(&vec![int(3) * &n], &elt(&[6])));

        let f = morphism_check(&zmod(4), &zmod(4), IntMat::from_i64_rows(&[&[2]])).unwrap();
        assert_eq!(preimage(&f, &elt(&[1])), None);
        let got = preimage(&f, &elt(&[2])).unwrap();
        assert!(f.dst.element_eq(&f.apply(&got), &elt(&[2])));
    }

    #[test]
    fn product_and_order() {
        let p = direct_product(&zmod(2), &zmod(3));
        assert_eq!(group_order(&p.group), Some(int(6)));
        assert!(p
            .proj_a
            .compose(&p.incl_a)
            .eq_morphism(&GroupMorphism::identity(&zmod(2))));
        let p = direct_product(&zmod(5), &FgGroup::trivial());
        assert_eq!(group_order(&p.group), Some(int(5)));
        let p = direct_product(&FgGroup::free(1), &zmod(2));
        assert_eq!(group_order(&p.group), None);
        let d = structure_decompose(&p.group);
        assert_eq!(d.free_rank, 1);
        assert_eq!(d.invariants, vec![int(2)]);

        let g = FgGroup::new(2, IntMat::from_i64_rows(&[&[2, 0], &[0, 3]]));
        assert_eq!(group_order(&g), Some(int(6)));
        assert_eq!(group_order(&FgGroup::free(1)), None);
        assert_eq!(group_order(&FgGroup::trivial()), Some(int(1)));
    }

    #[test]
    fn element_order_and_exponent() {
        let z6 = zmod(6);
        assert_eq!(element_order(&z6, &elt(&[2])), Some(int(3)));
        assert_eq!(element_order(&z6, &elt(&[0])), Some(int(1)));
        assert_eq!(element_order(&FgGroup::free(1), &elt(&[1])), None);

        let g = FgGroup::from_invariants(&[int(2), int(4)]);
        let (e, w) = group_exponent(&g).unwrap();
        assert_eq!(e, int(4));
        assert_eq!(element_order(&g, &w), Some(int(4)));

        assert!(group_exponent(&FgGroup::free(2)).is_err());
    }

    #[test]
    fn hom_examples() {
        // Hom(Z, B) ≅ B
        let b = FgGroup::from_invariants(&[int(4), int(2)]);
        let h = hom_group(&FgGroup::free(1), &b);
        assert_eq!(group_order(&h.group), Some(int(8)));

        // #Hom(Z/a, Z/b) = gcd(a, b)
        for a in 2..12i64 {
            for b in 2..12i64 {
                let h = hom_group(&zmod(a), &zmod(b));
                assert_eq!(
                    group_order(&h.group),
                    Some(crate::exact::gcd(&int(a), &int(b))),
                    "a={a} b={b}"
                );
            }
        }
    }

    #[test]
    fn hom_evaluation_is_additive() {
        let a = FgGroup::from_invariants(&[int(4), int(6)]);
        let b = FgGroup::from_invariants(&[int(8)]);
        let h = hom_group(&a, &b);
        let dim = h.group.ambient_rank();
        let h1: Element = (0..dim).map(|i| int((i as i64 % 3) - 1)).collect();
        let h2: Element = (0..dim).map(|i| int(i as i64 % 2)).collect();
        let x = elt(&[1, 2]);
        let m1 = h.matrix_of(&h1);
        let m2 = h.matrix_of(&h2);
        let sum: Element = h1.iter().zip(&h2).map(|(p, q)| p + q).collect();
        let msum = h.matrix_of(&sum);
        let lhs = msum.mul_vec(&x);
        let rhs: Element = m1
            .mul_vec(&x)
            .iter()
            .zip(m2.mul_vec(&x))
            .map(|(p, q)| p + q)
            .collect();
        assert!(b.element_eq(&lhs, &rhs));
    }

    #[test]
    fn tensor_examples() {
        let b = FgGroup::from_invariants(&[int(6)]);
        let t = tensor_group(&FgGroup::free(1), &b);
        assert_eq!(group_order(&t.group), Some(int(6)));

        for a in 2..12i64 {
            for b in 2..12i64 {
                let t = tensor_group(&zmod(a), &zmod(b));
                assert_eq!(
                    group_order(&t.group),
                    Some(crate::exact::gcd(&int(a), &int(b))),
                    "a={a} b={b}"
                );
            }
        }
        let t = tensor_group(&zmod(4), &zmod(6));
        let v = t.bilinear(&elt(&[1]), &elt(&[1]));
        assert_eq!(element_order(&t.group, &v), Some(int(2)));
    }

    #[test]
    fn split_exact_examples() {
        // 0 -> Z/2 -> Z/2 x Z/3 -> Z/3 -> 0 splits
        let b = FgGroup::from_invariants(&[int(2), int(3)]);
        let f = morphism_check(&zmod(2), &b, IntMat::from_i64_rows(&[&[1], &[0]])).unwrap();
        let g = morphism_check(&b, &zmod(3), IntMat::from_i64_rows(&[&[0, 1]])).unwrap();
        match split_exact(&f, &g) {
            SplitResult::Split {
                left_inverse,
                right_inverse,
            } => {
                assert!(left_inverse
                    .compose(&f)
                    .eq_morphism(&GroupMorphism::identity(&zmod(2))));
                assert!(g
                    .compose(&right_inverse)
                    .eq_morphism(&GroupMorphism::identity(&zmod(3))));
            }
            _ => panic!("expected split"),
        }

        // 0 -> Z/2 -> Z/4 -> Z/2 -> 0 exact but not split
        let f = morphism_check(&zmod(2), &zmod(4), IntMat::from_i64_rows(&[&[2]])).unwrap();
        let g = morphism_check(&zmod(4), &zmod(2), IntMat::from_i64_rows(&[&[1]])).unwrap();
        assert!(matches!(split_exact(&f, &g), SplitResult::ExactNotSplit));

        // g not surjective onto its stated target: not exact
        let f = morphism_check(&zmod(2), &zmod(4), IntMat::from_i64_rows(&[&[2]])).unwrap();
        let g = morphism_check(&zmod(4), &zmod(4), IntMat::from_i64_rows(&[&[2]])).unwrap();
        assert!(matches!(split_exact(&f, &g), SplitResult::NotExact));
    }

    #[test]
    fn torsion_examples() {
        let t = torsion_subgroup(&FgGroup::free(1));
        assert_eq!(group_order(&t.src), Some(int(1)));

        // coker((2),(0)) ≅ Z/2 x Z: torsion Z/2
        let g = FgGroup::new(2, IntMat::from_i64_rows(&[&[2], &[0]]));
        let t = torsion_subgroup(&g);
        assert_eq!(group_order(&t.src), Some(int(2)));
        assert!(is_injective(&t));

        let g = FgGroup::from_invariants(&[int(4), int(6)]);
        let t = torsion_subgroup(&g);
        assert_eq!(group_order(&t.src), Some(int(24)));

        // A/T is torsion-free
        let g = FgGroup::new(2, IntMat::from_i64_rows(&[&[2], &[0]]));
        let t = torsion_subgroup(&g);
        let quot = FgGroup::new(2, t.phi.hstack(g.relations()));
        let d = structure_decompose(&quot);
        assert!(d.invariants.is_empty());
        assert_eq!(d.free_rank, 1);
    }

    #[test]
    fn structure_examples() {
        let g = FgGroup::new(2, IntMat::from_i64_rows(&[&[2, 0], &[0, 3]]));
        let d = structure_decompose(&g);
        assert_eq!(d.free_rank, 0);
        assert_eq!(d.invariants, vec![int(6)]);

        let g = FgGroup::free(2);
        let d = structure_decompose(&g);
        assert_eq!(d.free_rank, 2);
        assert!(d.invariants.is_empty());

        let g = FgGroup::from_invariants(&[int(2), int(4), int(8)]);
        let d = structure_decompose(&g);
        assert_eq!(d.invariants, vec![int(8), int(4), int(2)]);
    }

    #[test]
    fn structure_refined_example() {
        let d = structure_refine(&zmod(12), &[int(2)]);
        let mut moduli = d.moduli.clone();
        moduli.sort();
        assert_eq!(moduli, vec![int(3), int(4)]);
    }

    #[test]
    fn structure_matches_snf_oracle() {
        let mut state = 0xdeadbeefu64;
        let mut next = move |bound: i64| {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 33) as i64 % (2 * bound + 1)) - bound
        };
        for trial in 0..60 {
            let n = 1 + (trial % 5);
            let m = 1 + ((trial * 7 + 3) % 6);
            let rel = IntMat::from_fn(n, m, |_, _| int(next(50)));
            let g = FgGroup::new(n, rel.clone());
            let d = structure_decompose(&g);
            let mut inv = d.invariants.clone();
            inv.sort();
            let oracle = snf_invariants(&rel);
            assert_eq!(inv, oracle, "trial {trial}");
            assert_eq!(d.free_rank, n - linalg::rank(&rel), "trial {trial}");
        }
    }

    #[test]
    fn order_multiplicativity() {
        for a in 1..8i64 {
            for b in 1..8i64 {
                let p = direct_product(&zmod(a), &zmod(b));
                assert_eq!(group_order(&p.group), Some(int(a * b)));
            }
        }
    }
}
