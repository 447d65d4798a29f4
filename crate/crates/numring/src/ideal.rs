//! Fractional ideals over an order, blowups and coprime bases for ideals.
//!
//! A fractional ideal is stored as a full-rank integer basis in canonical
//! column Hermite form over the order basis, divided by a positive
//! denominator. Sums, products, intersections and quotients are lattice
//! computations in `K = Q ⊗ R`; the blowup `Bl(I) = I^(n-1) : I^(n-1)`
//! turns non-invertible ideals into invertible ones over a minimal larger
//! order, and the graph algorithm refines a family of ideals into a
//! pairwise coprime basis over that order.

use crate::exact::{gcd, Int, Rat};
use crate::linalg;
use crate::mat::{IntMat, RatMat};
use crate::order::{mult_matrix_int, Order, OrderRef, KElement};
use num_traits::{One, Signed, Zero};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealError {
    NotFullRank,
    MixedOrders,
    NotIntegral,
}

impl std::fmt::Display for IdealError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IdealError::NotFullRank => write!(f, "module does not span K"),
            IdealError::MixedOrders => write!(f, "ideals belong to different orders"),
            IdealError::NotIntegral => write!(f, "ideal is not integral"),
        }
    }
}

impl std::error::Error for IdealError {}

/// Full-rank lattice in `K`, as `basis / den` with the basis in canonical
/// Hermite form. Used both for fractional ideals (tagged with their order)
/// and for the raw subgroup arithmetic behind blowups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KModule {
    pub basis: IntMat,
    pub den: Int,
}

impl KModule {
    /// Span of integer generator columns over `den`; `None` if not full rank.
    pub fn from_gens(gens: &IntMat, den: &Int) -> Option<KModule> {
        assert!(den.is_positive());
        let h = linalg::hermite_basis(gens);
        if h.cols() < gens.rows() {
            return None;
        }
        Some(KModule {
            basis: h,
            den: den.clone(),
        }
        .normalized())
    }

    pub fn standard(n: usize) -> KModule {
        KModule {
            basis: IntMat::identity(n),
            den: Int::one(),
        }
    }

    fn normalized(mut self) -> KModule {
        let g = gcd(&self.den, &self.basis.content());
        if !g.is_one() && !g.is_zero() {
            self.basis = self.basis.div_exact(&g);
            self.den = &self.den / &g;
        }
        self.basis = linalg::hermite_basis(&self.basis);
        self
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// `|det(basis)| / den^n`: the generalized index `[Z^n : M]^{±1}`.
    pub fn norm_index(&self) -> Rat {
        let n = self.rank() as u32;
        Rat::new(linalg::det(&self.basis).abs(), self.den.pow(n))
    }

    pub fn contains(&self, num: &[Int], den: &Int) -> bool {
        // x = num/den in the module iff basis * c = num * (self.den/den) solvable
        let scaled: Option<Vec<Int>> = {
            let l = crate::exact::lcm(&self.den, den);
            let f = &l / den;
            if (&l / &self.den).is_one() {
                Some(num.iter().map(|x| x * &f).collect())
            } else {
                // need num * self.den / den integral after scaling
                let fs = &l / &self.den;
                let v: Vec<Int> = num.iter().map(|x| x * &f).collect();
                // solve basis * fs-scaled? handle uniformly below
                return linalg::solve(&self.basis.scale(&fs), &v).is_some();
            }
        };
        match scaled {
            Some(v) => linalg::solve(&self.basis, &v).is_some(),
            None => false,
        }
    }

    pub fn contains_element(&self, x: &KElement) -> bool {
        self.contains(&x.num, &x.den)
    }

    pub fn subset_of(&self, other: &KModule) -> bool {
        (0..self.rank()).all(|j| other.contains(&self.basis.col(j), &self.den))
    }

    /// Sum of lattices.
    pub fn add(&self, other: &KModule) -> KModule {
        let l = crate::exact::lcm(&self.den, &other.den);
        let fa = &l / &self.den;
        let fb = &l / &other.den;
        let gens = self.basis.scale(&fa).hstack(&other.basis.scale(&fb));
        KModule::from_gens(&gens, &l).expect("sum of full-rank modules")
    }

    /// Product lattice: span of pairwise products, multiplication taken in
    /// the given ambient order's fraction field.
    pub fn mul(&self, ambient: &Order, other: &KModule) -> KModule {
        let n = self.rank();
        let mut cols: Vec<Vec<Int>> = Vec::with_capacity(n * n);
        for i in 0..n {
            let a = self.basis.col(i);
            for j in 0..n {
                let b = other.basis.col(j);
                cols.push(ambient.mul_int(&a, &b));
            }
        }
        let gens = IntMat::from_cols(cols);
        KModule::from_gens(&gens, &(&self.den * &other.den)).expect("product of full-rank modules")
    }

    pub fn intersect(&self, other: &KModule) -> KModule {
        let l = crate::exact::lcm(&self.den, &other.den);
        let fa = &l / &self.den;
        let fb = &l / &other.den;
        let ba = self.basis.scale(&fa);
        let bb = other.basis.scale(&fb);
        let ker = linalg::integer_kernel(&ba.hstack(&bb.neg()));
        let u = ker.row_slice(0, self.rank());
        let gens = ba.mul(&u);
        KModule::from_gens(&gens, &l).expect("intersection of full-rank modules")
    }

    /// Quotient `self : other = {x in K : x * other ⊆ self}`.
    pub fn quotient(&self, ambient: &Order, other: &KModule) -> KModule {
        let n = self.rank();
        let det_i = linalg::det(&self.basis);
        let det_j = linalg::det(&other.basis).abs();
        // every solution has denominator dividing e = den_self * |det_other|
        let e = &self.den * &det_j;
        let adj = adjugate(&self.basis);
        // stack the constraints d_self * adj(B_I) * M_gj (mod m)
        let mut rows: Vec<IntMat> = Vec::new();
        for j in 0..n {
            let g = other.basis.col(j);
            let mg = mult_matrix_int(ambient, &g);
            rows.push(adj.mul(&mg).scale(&self.den));
        }
        let mut stacked = rows[0].clone();
        for r in &rows[1..] {
            stacked = stacked.vstack(r);
        }
        let m = (&det_i * &e * &other.den).abs();
        let sol = linalg::congruence_kernel(&stacked, &m);
        KModule::from_gens(&sol, &e).expect("quotient of full-rank modules")
    }

    /// `self^k` with renormalization after every multiplication; `k = 0`
    /// yields the multiplier ring `self : self`.
    pub fn power(&self, ambient: &Order, k: usize) -> KModule {
        if k == 0 {
            return self.quotient(ambient, self);
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mul(ambient, self);
        }
        acc
    }

    pub fn scale_rat(&self, c: &Rat) -> KModule {
        KModule {
            basis: self.basis.scale(c.numer()),
            den: &self.den * c.denom(),
        }
        .normalized()
    }

    /// Trace-form discriminant of the lattice (an integer for rings).
    pub fn discriminant(&self, ambient: &Order) -> Rat {
        let n = self.rank();
        let gram = RatMat::from_fn(n, n, |i, j| {
            let p = ambient.mul_int(&self.basis.col(i), &self.basis.col(j));
            let x = KElement::new(p, &self.den * &self.den);
            crate::order::trace(ambient, &x)
        });
        gram.det()
    }
}

fn adjugate(m: &IntMat) -> IntMat {
    let n = m.rows();
    let d = linalg::det(m);
    assert!(!d.is_zero());
    let inv = m.to_rat().inverse().expect("nonsingular");
    IntMat::from_fn(n, n, |i, j| {
        let v = &inv[(i, j)] * Rat::from_integer(d.clone());
        assert!(v.is_integer());
        v.to_integer()
    })
}

/// Fractional ideal: a full-rank `R`-submodule of `K`, canonically
/// normalized.
#[derive(Debug, Clone)]
pub struct FracIdeal {
    pub order: OrderRef,
    pub module: KModule,
}

impl PartialEq for FracIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.same_order(other) && self.module == other.module
    }
}
impl Eq for FracIdeal {}

impl FracIdeal {
    fn same_order(&self, other: &FracIdeal) -> bool {
        Arc::ptr_eq(&self.order, &other.order) || *self.order == *other.order
    }

    pub fn basis(&self) -> &IntMat {
        &self.module.basis
    }

    pub fn den(&self) -> &Int {
        &self.module.den
    }

    pub fn is_integral(&self) -> bool {
        self.module.den.is_one()
    }

    pub fn contains(&self, x: &KElement) -> bool {
        self.module.contains_element(x)
    }
}

/// Canonical `R`-module generated by `gens / den`: closes the span under
/// multiplication by the order basis, then Hermite-normalizes.
pub fn ideal_normalize(order: &OrderRef, gens: &IntMat, den: &Int) -> Result<FracIdeal, IdealError> {
    assert!(den.is_positive());
    let n = order.rank();
    assert_eq!(gens.rows(), n);
    let mut cols: Vec<Vec<Int>> = Vec::new();
    for j in 0..gens.cols() {
        let g = gens.col(j);
        for i in 0..n {
            let mut e = vec![Int::zero(); n];
            e[i] = Int::one();
            cols.push(order.mul_int(&e, &g));
        }
    }
    if cols.is_empty() {
        return Err(IdealError::NotFullRank);
    }
    let module =
        KModule::from_gens(&IntMat::from_cols(cols), den).ok_or(IdealError::NotFullRank)?;
    Ok(FracIdeal {
        order: order.clone(),
        module,
    })
}

/// `R` as an ideal over itself.
pub fn unit_ideal(order: &OrderRef) -> FracIdeal {
    FracIdeal {
        order: order.clone(),
        module: KModule::standard(order.rank()),
    }
}

/// The principal ideal `xR`.
pub fn principal_ideal(order: &OrderRef, x: &KElement) -> Result<FracIdeal, IdealError> {
    let m = mult_matrix_int(order, &x.num);
    ideal_normalize(order, &m, &x.den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdealOp {
    Sum,
    Product,
    Quotient,
    Intersect,
}

pub fn ideal_arith(op: IdealOp, a: &FracIdeal, b: &FracIdeal) -> Result<FracIdeal, IdealError> {
    if !a.same_order(b) {
        return Err(IdealError::MixedOrders);
    }
    let module = match op {
        IdealOp::Sum => a.module.add(&b.module),
        IdealOp::Product => a.module.mul(&a.order, &b.module),
        IdealOp::Quotient => a.module.quotient(&a.order, &b.module),
        IdealOp::Intersect => a.module.intersect(&b.module),
    };
    Ok(FracIdeal {
        order: a.order.clone(),
        module,
    })
}

/// `det(basis)/den^n` as a positive rational; equals `#(R/I)` for integral
/// ideals.
pub fn ideal_norm_index(a: &FracIdeal) -> Rat {
    a.module.norm_index()
}

/// Result of a blowup: the new order `S` with its own table, the embedding
/// of the old basis into `S`-coordinates, and `S` as a module in the old
/// coordinates.
#[derive(Debug, Clone)]
pub struct Blowup {
    pub order: OrderRef,
    /// Column `i` holds the `S`-coordinates of the old basis vector `e_i`.
    pub embedding: IntMat,
    pub module: KModule,
}

/// Builds an order from a full-rank subring module of `K`.
pub fn order_from_module(root: &Order, m: &KModule) -> Blowup {
    let n = root.rank();
    let b = m.basis.to_rat();
    let binv = b.inverse().expect("full rank");
    let den_rat = Rat::from_integer(m.den.clone());
    // coordinates of an element of K (root coords, num/den) over the module
    let coords = |num: &[Int], den: &Int| -> Vec<Int> {
        let v: Vec<Rat> = num
            .iter()
            .map(|x| Rat::new(x.clone(), den.clone()) * &den_rat)
            .collect();
        let c = binv.mul_vec(&v);
        c.into_iter()
            .map(|q| {
                assert!(q.is_integer(), "module is not closed as a ring");
                q.to_integer()
            })
            .collect()
    };
    let mut table = Vec::with_capacity(n * n * n);
    let den2 = &m.den * &m.den;
    for i in 0..n {
        for j in 0..n {
            let p = root.mul_int(&m.basis.col(i), &m.basis.col(j));
            table.extend(coords(&p, &den2));
        }
    }
    let one = coords(root.one_coords(), &Int::one());
    let order = Order::from_parts_unchecked(n, one, table);
    let embedding = IntMat::from_fn(n, n, |i, j| {
        let mut e = vec![Int::zero(); n];
        e[j] = Int::one();
        coords(&e, &Int::one())[i].clone()
    });
    Blowup {
        order: Arc::new(order),
        embedding,
        module: m.clone(),
    }
}

/// Blowup of a module inside `K`: `Bl(I) = I^(n-1) : I^(n-1)` (with the
/// multiplier-ring convention `I^0 = I : I` in rank 1).
pub fn blowup_module(root: &Order, m: &KModule) -> KModule {
    let k = root.rank().saturating_sub(1);
    let j = m.power(root, k);
    j.quotient(root, &j)
}

/// Blowup of a fractional ideal: the minimal order over which it becomes
/// invertible, per `Bl(I) = I^(n-1):I^(n-1)`.
pub fn blowup(ideal: &FracIdeal) -> Blowup {
    let root = &ideal.order;
    let s = blowup_module(root, &ideal.module);
    order_from_module(root, &s)
}

/// Rebase a module given in root coordinates to the coordinates of a blowup
/// order.
pub fn rebase_to(bl: &Blowup, m: &KModule) -> KModule {
    let b = bl.module.basis.to_rat();
    let binv = b.inverse().expect("full rank");
    let n = m.rank();
    let mut cols: Vec<Vec<Rat>> = Vec::new();
    for j in 0..n {
        let v: Vec<Rat> = m
            .basis
            .col(j)
            .iter()
            .map(|x| {
                Rat::new(x.clone(), m.den.clone()) * Rat::from_integer(bl.module.den.clone())
            })
            .collect();
        cols.push(binv.mul_vec(&v));
    }
    // clear denominators across all columns
    let mut den = Int::one();
    for c in &cols {
        for q in c {
            den = crate::exact::lcm(&den, q.denom());
        }
    }
    let gens = IntMat::from_cols(
        cols.into_iter()
            .map(|c| {
                c.into_iter()
                    .map(|q| (q * Rat::from_integer(den.clone())).to_integer())
                    .collect()
            })
            .collect(),
    );
    KModule::from_gens(&gens, &den).expect("full rank preserved")
}

/// Two-generator blowup via the explicit `p_j` basis: for `gamma = a/b`
/// with primitive minimal polynomial `f = a_d X^d + ... + a_0`,
/// `Bl(aR + bR) = R + p_1 R + ... + p_(d-1) R` with
/// `p_j = a_d g^j + a_(d-1) g^(j-1) + ... + a_(d-j)`.
pub fn blowup_pair(order: &OrderRef, alpha: &KElement, beta: &KElement) -> Blowup {
    assert!(!alpha.is_zero() && !beta.is_zero());
    let gamma = order
        .div(alpha, beta)
        .expect("beta is regular in a domain");
    if order.as_rational(&gamma).is_some() {
        // Bl(aR + bR) = R
        return order_from_module(order, &KModule::standard(order.rank()));
    }
    let f = crate::order::min_poly(order, &gamma).primitive_integer();
    let d = f.degree();
    let n = order.rank();
    let mut gens: Vec<Vec<Int>> = Vec::new();
    for i in 0..n {
        let mut e = vec![Int::zero(); n];
        e[i] = Int::one();
        gens.push(e);
    }
    // p_j = sum_{t=0..j} a_{d-t} gamma^{j-t}
    let mut den = Int::one();
    let mut pjs: Vec<KElement> = Vec::new();
    for j in 1..d {
        let mut p = order.scale(
            &Rat::from_integer(f.coeff(d - j)),
            &order.one_element(),
        );
        let mut gp = order.one_element();
        for t in (0..j).rev() {
            gp = order.mul(&gp, &gamma);
            let term = order.scale(&Rat::from_integer(f.coeff(d - t)), &gp);
            p = order.add(&p, &term);
        }
        den = crate::exact::lcm(&den, &p.den);
        pjs.push(p);
    }
    let mut cols: Vec<Vec<Int>> = Vec::new();
    for g in &gens {
        cols.push(g.iter().map(|x| x * &den).collect());
    }
    for p in &pjs {
        let f = &den / &p.den;
        for i in 0..n {
            let mut e = vec![Int::zero(); n];
            e[i] = Int::one();
            let prod = order.mul_int(&p.num, &e);
            cols.push(prod.iter().map(|x| x * &f).collect());
        }
    }
    let m = KModule::from_gens(&IntMat::from_cols(cols), &den).expect("blowup has full rank");
    order_from_module(order, &m)
}

/// Invertibility test by the multiplier-ring criterion
/// `(R : I) : (R : I) = R`.
pub fn is_invertible(ideal: &FracIdeal) -> bool {
    let unit = KModule::standard(ideal.order.rank());
    let j = unit.quotient(&ideal.order, &ideal.module);
    let m = j.quotient(&ideal.order, &j);
    m == unit
}

/// Output of the coprime basis algorithm for ideals.
#[derive(Debug)]
pub struct IdealCoprimeBasis {
    /// The minimal order over which the inputs admit a coprime basis.
    pub order: Blowup,
    /// Pairwise coprime invertible proper ideals of that order.
    pub basis: Vec<FracIdeal>,
    /// `expo[i][j]`: exponent of basis `j` in (the extension of) input `i`.
    pub expo: Vec<Vec<u32>>,
}

/// The graph algorithm over ideals: like the integer version but with
/// `gcd` replaced by ideal sum, and with the base order growing through
/// blowups until every intermediate ideal is invertible.
pub fn ideal_coprime_basis(
    order: &OrderRef,
    inputs: &[FracIdeal],
) -> Result<IdealCoprimeBasis, IdealError> {
    let n = order.rank();
    for x in inputs {
        if !x.is_integral() {
            return Err(IdealError::NotIntegral);
        }
    }
    let root: &Order = order;
    let mut s = KModule::standard(n);
    let mut disc = s.discriminant(root);
    let grow = |s_old: &KModule, m: &KModule, disc_old: &Rat| -> (KModule, Rat) {
        let extended = s_old.mul(root, m);
        let s_new = blowup_module(root, &extended);
        let disc_new = s_new.discriminant(root);
        // Index bookkeeping: Δ(old) = [new : old]^2 Δ(new) exactly.
        let idx = s_new.norm_index() / s_old.norm_index();
        let idx = (Rat::one() / idx).reduced();
        assert!(idx.is_integer(), "blowup shrank the ring");
        assert_eq!(
            disc_old.clone(),
            &idx * &idx * disc_new.clone(),
            "blowup index bookkeeping violated"
        );
        (s_new, disc_new)
    };

    struct Vertex {
        label: KModule,
        expo: Vec<u32>,
        alive: bool,
    }
    let m_inputs = inputs.len();
    let mut verts: Vec<Vertex> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();

    // initial pass: make every input invertible over a common order
    for x in inputs {
        (s, disc) = grow(&s.clone(), &x.module, &disc.clone());
    }
    for (i, x) in inputs.iter().enumerate() {
        let label = s.mul(root, &x.module);
        if label == s {
            continue;
        }
        let mut expo = vec![0u32; m_inputs];
        expo[i] = 1;
        let v = verts.len();
        for u in 0..v {
            edges.push((u, v));
        }
        verts.push(Vertex {
            label,
            expo,
            alive: true,
        });
    }

    while !edges.is_empty() {
        // largest product of norms, ties by insertion order
        let norm_of = |v: &Vertex| -> Rat { v.label.norm_index() };
        let mut best = 0;
        let mut best_key = norm_of(&verts[edges[0].0]) * norm_of(&verts[edges[0].1]);
        for (k, &(u, v)) in edges.iter().enumerate().skip(1) {
            let key = norm_of(&verts[u]) * norm_of(&verts[v]);
            if key > best_key {
                best_key = key;
                best = k;
            }
        }
        let (a, b) = edges.remove(best);
        let c0 = verts[a].label.add(&verts[b].label);
        if s.subset_of(&c0) && c0.subset_of(&s) {
            // the two ideals are already coprime over S
            continue;
        }
        (s, disc) = grow(&s.clone(), &c0, &disc.clone());
        let c_label = s.mul(root, &c0);
        if c_label == s {
            continue;
        }
        let c_inv = s.quotient(root, &c_label);
        let c = verts.len();
        let neighbor = |edges: &Vec<(usize, usize)>, x: usize, y: usize| {
            edges
                .iter()
                .any(|&(p, q)| (p, q) == (x, y) || (p, q) == (y, x))
        };
        let mut adj: Vec<(usize, usize)> = vec![(a, c), (b, c)];
        for v in 0..c {
            if verts[v].alive && v != a && v != b && neighbor(&edges, v, a) && neighbor(&edges, v, b)
            {
                adj.push((v, c));
            }
        }
        edges.extend(adj);
        let expo_c: Vec<u32> = (0..m_inputs)
            .map(|i| verts[a].expo[i] + verts[b].expo[i])
            .collect();
        verts.push(Vertex {
            label: c_label,
            expo: expo_c,
            alive: true,
        });
        verts[a].label = verts[a].label.mul(root, &c_inv);
        verts[b].label = verts[b].label.mul(root, &c_inv);
        for t in [a, b, c] {
            if verts[t].alive {
                let extended = s.mul(root, &verts[t].label);
                if extended == s {
                    verts[t].alive = false;
                    edges.retain(|&(p, q)| p != t && q != t);
                }
            }
        }
    }

    let bl = order_from_module(root, &s);
    let mut basis_mods: Vec<(KModule, Vec<u32>)> = verts
        .into_iter()
        .filter(|v| v.alive)
        .map(|v| (s.mul(root, &v.label), v.expo))
        .collect();
    // deterministic output order: by norm then basis entries
    basis_mods.sort_by(|x, y| {
        x.0.norm_index()
            .cmp(&y.0.norm_index())
            .then_with(|| format!("{:?}", x.0.basis).cmp(&format!("{:?}", y.0.basis)))
    });
    let basis: Vec<FracIdeal> = basis_mods
        .iter()
        .map(|(m, _)| FracIdeal {
            order: bl.order.clone(),
            module: rebase_to(&bl, m),
        })
        .collect();
    let expo: Vec<Vec<u32>> = (0..m_inputs)
        .map(|i| basis_mods.iter().map(|(_, e)| e[i]).collect())
        .collect();
    Ok(IdealCoprimeBasis {
        order: bl,
        basis,
        expo,
    })
}
