//! Legendre, Jacobi and Kronecker symbols, signs of automorphisms of finite
//! abelian groups, and the Jacobi symbol for ideals in an order.
//!
//! The Jacobi symbol is computed along a gcd remainder sequence, never by
//! factoring the denominator. The sign of an automorphism of a finite
//! abelian group is computed without enumerating the group: the odd part
//! peels off free layers whose signs are Jacobi symbols of determinants,
//! and the 2-part has nontrivial sign only for `Z/2^k` (k >= 2) and
//! `(Z/2)^2`.

use crate::abgroup::{self, FgGroup, GroupMorphism};
use crate::exact::{gcd, mod_pow, Int};
use crate::ideal::{self, FracIdeal, IdealOp};
use crate::linalg;
use crate::mat::IntMat;
use crate::order::{mult_matrix_int, KElement, OrderRef};
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymbolError {
    NotCoprime,
    NotOddPrime,
    EvenIndex,
    NotAutomorphism,
    InfiniteGroup,
    NotIntegral,
}

impl std::fmt::Display for SymbolError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SymbolError::NotCoprime => write!(f, "arguments are not coprime"),
            SymbolError::NotOddPrime => write!(f, "modulus must be an odd prime"),
            SymbolError::EvenIndex => write!(f, "ideal index must be odd"),
            SymbolError::NotAutomorphism => write!(f, "map is not an automorphism"),
            SymbolError::InfiniteGroup => write!(f, "group must be finite"),
            SymbolError::NotIntegral => write!(f, "ideal must be integral"),
        }
    }
}

impl std::error::Error for SymbolError {}

pub type Sign = i8;

/// Legendre symbol via Euler's criterion, `a^((p-1)/2) mod p`.
pub fn legendre(a: &Int, p: &Int) -> Result<Sign, SymbolError> {
    if !crate::factor::is_prime(p) || p.is_even() {
        return Err(SymbolError::NotOddPrime);
    }
    if !gcd(a, p).is_one() {
        return Err(SymbolError::NotCoprime);
    }
    let e = (p - Int::one()) / Int::from(2);
    let v = mod_pow(a, &e, p);
    Ok(if v.is_one() { 1 } else { -1 })
}

/// Jacobi symbol `(a/b)` for `b` odd positive and `gcd(a, b) = 1`, by the
/// gcd-sequence recursion; never factors `b`.
pub fn jacobi(a: &Int, b: &Int) -> Result<Sign, SymbolError> {
    if !b.is_positive() || b.is_even() {
        return Err(SymbolError::NotOddPrime);
    }
    if !gcd(a, b).is_one() {
        return Err(SymbolError::NotCoprime);
    }
    let mut sign: Sign = 1;
    let mut x0 = a.mod_floor(b);
    let mut x1 = b.clone();
    // invariant: (a/b) = sign * (x0/x1), x1 odd positive, gcd(x0, x1) = 1
    loop {
        if x1.is_one() {
            return Ok(sign);
        }
        let x2 = x0.mod_floor(&x1);
        if x2.is_zero() {
            // gcd reached x1 > 1: impossible under the coprimality invariant
            unreachable!("coprime inputs cannot share a factor");
        }
        if x2.is_odd() {
            // reciprocity step: (x0/x1) = (-1)^((x1-1)(x2-1)/4) (x1/x2)
            let t = (&x1 - Int::one()) / Int::from(2) * ((&x2 - Int::one()) / Int::from(2));
            if t.is_odd() {
                sign = -sign;
            }
            x0 = x1;
            x1 = x2;
        } else {
            // even remainder: strip the 2-power with the supplementary laws
            let x3 = x1.mod_floor(&x2);
            let u = x2.trailing_zeros().unwrap_or(0);
            let v = &x2 >> u;
            // (-1)^(u (x1^2 - x3^2)/8)
            let sq = (&x1 * &x1 - &x3 * &x3) / Int::from(8);
            if Int::from(u) .is_odd() && sq.is_odd() {
                sign = -sign;
            }
            // (-1)^((v-1)/2 * (x1 - x3)/2)
            let t = (&v - Int::one()) / Int::from(2) * ((&x1 - &x3) / Int::from(2));
            if t.is_odd() {
                sign = -sign;
            }
            x0 = x2;
            x1 = x3;
        }
    }
}

/// Kronecker symbol: writes `b = u * c * 2^k` with `c` odd positive and
/// combines `(a/u) (a/c) (a/2)^k`.
pub fn kronecker(a: &Int, b: &Int) -> Result<Sign, SymbolError> {
    assert!(!b.is_zero(), "Kronecker symbol needs b != 0");
    if !gcd(a, b).is_one() {
        return Err(SymbolError::NotCoprime);
    }
    let mut sign: Sign = 1;
    if b.is_negative() && a.is_negative() {
        sign = -sign; // (a / -1) = a/|a|
    }
    let mut c = b.abs();
    let k = c.trailing_zeros().unwrap_or(0);
    c >>= k;
    if k > 0 {
        // (a/2) = (-1)^((a^2-1)/8), defined since a is odd here
        let t = (a * a - Int::one()) / Int::from(8);
        if Int::from(k).is_odd() && t.is_odd() {
            sign = -sign;
        }
    }
    let j = jacobi(&a.mod_floor(&c), &c)?;
    Ok(sign * j)
}

/// Sign of an automorphism of a finite abelian group, computed through the
/// invariant-factor decomposition.
pub fn automorphism_sign(b: &FgGroup, sigma: &GroupMorphism) -> Result<Sign, SymbolError> {
    if abgroup::group_order(b).is_none() {
        return Err(SymbolError::InfiniteGroup);
    }
    if !abgroup::is_isomorphism(sigma) {
        return Err(SymbolError::NotAutomorphism);
    }
    let dec = abgroup::structure_decompose(b);
    let invariants = dec.invariants.clone();
    let m = invariants.len();
    if m == 0 {
        return Ok(1);
    }
    // conjugate sigma into the decomposition coordinates (torsion block)
    let conj = dec
        .to_parts
        .phi
        .mul(&sigma.phi)
        .mul(&dec.from_parts.phi);
    let mat = IntMat::from_fn(m, m, |i, j| conj[(i, j)].mod_floor(&invariants[i]));
    Ok(sign_on_invariants(&invariants, &mat))
}

/// Sign of an automorphism given on `∏ Z/n_k` (chain order `n_m | ... | n_1`).
fn sign_on_invariants(invariants: &[Int], mat: &IntMat) -> Sign {
    // split into the 2-primary and odd parts; the sign lives entirely on
    // the 2-part unless the 2-part is trivial.
    let m = invariants.len();
    let mut two_parts: Vec<Int> = Vec::new();
    let mut odd_parts: Vec<Int> = Vec::new();
    let mut two_idx: Vec<usize> = Vec::new();
    let mut odd_idx: Vec<usize> = Vec::new();
    for (k, n) in invariants.iter().enumerate() {
        let v = n.trailing_zeros().unwrap_or(0);
        let two = Int::one() << v;
        let odd = n >> v;
        if !two.is_one() {
            two_parts.push(two);
            two_idx.push(k);
        }
        if !odd.is_one() {
            odd_parts.push(odd);
            odd_idx.push(k);
        }
    }
    // Induced matrices: entries reduce componentwise by CRT.
    let restrict = |parts: &[Int], idx: &[usize]| -> IntMat {
        IntMat::from_fn(parts.len(), parts.len(), |i, j| {
            mat[(idx[i], idx[j])].mod_floor(&parts[i])
        })
    };
    if !two_parts.is_empty() {
        // the odd factor contributes sign^(even) = +1
        let m2 = restrict(&two_parts, &two_idx);
        sign_two_group(&two_parts, &m2)
    } else {
        let mo = restrict(&odd_parts, &odd_idx);
        let _ = m;
        sign_odd_group(&odd_parts, &mo)
    }
}

/// Odd order: peel off the free layer `B/n_m B` (a `Z/n_m`-module of rank
/// m, sign = Jacobi symbol of the determinant) and recurse on `n_m B`.
fn sign_odd_group(invariants: &[Int], mat: &IntMat) -> Sign {
    let m = invariants.len();
    if m == 0 {
        return 1;
    }
    let nm = invariants[m - 1].clone();
    // free layer C = B / nm B ≅ (Z/nm)^m
    let det = linalg::det(mat).mod_floor(&nm);
    let s_c = jacobi(&det, &nm).expect("automorphism determinant is a unit");
    // A = nm B ≅ ∏ Z/(n_k/nm) over the indices with n_k > nm, same matrix
    let keep: Vec<usize> = (0..m).filter(|&k| invariants[k] != nm).collect();
    let sub_inv: Vec<Int> = keep.iter().map(|&k| &invariants[k] / &nm).collect();
    let sub_mat = IntMat::from_fn(keep.len(), keep.len(), |i, j| {
        mat[(keep[i], keep[j])].mod_floor(&sub_inv[i])
    });
    let s_a = sign_odd_group(&sub_inv, &sub_mat);
    s_c * s_a
}

/// 2-groups: the sign is -1 only for `Z/2^k` with `k >= 2` (where it is
/// `(-1)^((a-1)/2)` for multiplication by `a`) and for `(Z/2)^2` (where the
/// three nonzero points are permuted and transpositions are odd).
fn sign_two_group(invariants: &[Int], mat: &IntMat) -> Sign {
    match invariants.len() {
        0 => 1,
        1 => {
            let n = &invariants[0];
            if *n == Int::from(2) {
                return 1;
            }
            let a = mat[(0, 0)].mod_floor(n);
            if ((&a - Int::one()) / Int::from(2)).is_odd() {
                -1
            } else {
                1
            }
        }
        2 if invariants[0] == Int::from(2) && invariants[1] == Int::from(2) => {
            // GL_2(F_2) ≅ S_3 acting on the three nonzero vectors; odd
            // permutations are exactly the elements of order 2
            let two = Int::from(2);
            let m2 = IntMat::from_fn(2, 2, |i, j| mat[(i, j)].mod_floor(&two));
            let sq = IntMat::from_fn(2, 2, |i, j| {
                (0..2)
                    .map(|t| &m2[(i, t)] * &m2[(t, j)])
                    .sum::<Int>()
                    .mod_floor(&two)
            });
            let is_id = |m: &IntMat| {
                (0..2).all(|i| (0..2).all(|j| m[(i, j)] == if i == j { Int::one() } else { Int::zero() }))
            };
            if !is_id(&m2) && is_id(&sq) {
                -1
            } else {
                1
            }
        }
        _ => 1,
    }
}

/// Jacobi symbol `(a / b)` for an integral ideal `b` of odd index and `a`
/// coprime to it: the sign of multiplication-by-`a` on the finite group
/// `R/b`.
pub fn jacobi_ideal(
    order: &OrderRef,
    b_ideal: &FracIdeal,
    a: &KElement,
) -> Result<Sign, SymbolError> {
    if !b_ideal.is_integral() {
        return Err(SymbolError::NotIntegral);
    }
    if !a.is_integral_coords() {
        return Err(SymbolError::NotIntegral);
    }
    let index = ideal::ideal_norm_index(b_ideal);
    assert!(index.is_integer());
    if index.to_integer().is_even() {
        return Err(SymbolError::EvenIndex);
    }
    // coprimality: aR + b = R
    let a_r = ideal::principal_ideal(order, a).map_err(|_| SymbolError::NotCoprime)?;
    let sum = ideal::ideal_arith(IdealOp::Sum, &a_r, b_ideal).expect("same order");
    if sum != ideal::unit_ideal(order) {
        return Err(SymbolError::NotCoprime);
    }
    let group = FgGroup::new(order.rank(), b_ideal.basis().clone());
    let phi = mult_matrix_int(order, &a.num);
    let sigma = abgroup::morphism_check(&group, &group, phi)
        .map_err(|_| SymbolError::NotAutomorphism)?;
    automorphism_sign(&group, &sigma)
}
