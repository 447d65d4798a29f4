//! Multiplicative relation kernels in a number field.
//!
//! Three nested kernels, each feeding the next:
//! the kernel of `Z^m -> I(O_K)` on ideals (coprime bases plus one integer
//! kernel), the kernel of `Z^m -> K*/O_K*` on elements (the same, applied
//! to principal ideals), and the full kernel of `Z^m -> K*` (relations
//! among logarithms of the complex embeddings, recovered with the
//! approximate-lattice algorithm and re-verified exactly).
//!
//! Soundness never depends on the floating bootstrap or the precision
//! ladder: every generator that leaves this module has been checked by
//! exact arithmetic in `K`.

use crate::certified::{self, Ball, CBall, RootBox};
use crate::exact::{Int, Rat};
use crate::ideal::{self, FracIdeal, KModule};
use crate::lattice::{self, RelationInstance};
use crate::linalg;
use crate::mat::{IntMat, RatMat};
use crate::order::{self, KElement, OrderRef};
use crate::poly::IntPoly;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug)]
pub enum UnitsError {
    NotCertified(order::OrderError),
    Ideal(ideal::IdealError),
    PrecisionBudgetExceeded,
}

impl std::fmt::Display for UnitsError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            UnitsError::NotCertified(e) => write!(f, "order not certified as a domain: {e}"),
            UnitsError::Ideal(e) => write!(f, "{e}"),
            UnitsError::PrecisionBudgetExceeded => {
                write!(f, "precision ladder exhausted before certification")
            }
        }
    }
}

impl std::error::Error for UnitsError {}

/// Kernel of `(k_i) -> ∏ (O_K a_i)^(k_i)`: write each ideal as a quotient
/// of integral ideals, refine everything into one coprime basis, and take
/// the integer kernel of the exponent differences.
pub fn ideal_power_kernel(order: &OrderRef, ideals: &[FracIdeal]) -> Result<IntMat, UnitsError> {
    let m = ideals.len();
    if m == 0 {
        return Ok(IntMat::zeros(0, 0));
    }
    let mut inputs: Vec<FracIdeal> = Vec::with_capacity(2 * m);
    for a in ideals {
        // numerator: den * a is integral; denominator: den * R
        inputs.push(FracIdeal {
            order: order.clone(),
            module: KModule {
                basis: a.module.basis.clone(),
                den: Int::one(),
            },
        });
        let den = a.module.den.clone();
        inputs.push(FracIdeal {
            order: order.clone(),
            module: KModule {
                basis: IntMat::identity(order.rank()).scale(&den),
                den: Int::one(),
            },
        });
    }
    let cb = ideal::ideal_coprime_basis(order, &inputs).map_err(UnitsError::Ideal)?;
    let k = cb.basis.len();
    // exponent difference matrix: row per basis ideal, column per input
    let diff = IntMat::from_fn(k, m, |j, i| {
        Int::from(cb.expo[2 * i][j] as i64) - Int::from(cb.expo[2 * i + 1][j] as i64)
    });
    Ok(lattice::kernel_image(&diff).kappa)
}

/// Kernel of `(k_i) -> ∏ a_i^(k_i)` modulo units of the maximal order:
/// the ideal-power kernel of the principal ideals.
pub fn unit_class_kernel(order: &OrderRef, alphas: &[KElement]) -> Result<IntMat, UnitsError> {
    assert!(alphas.iter().all(|a| !a.is_zero()));
    let ideals: Vec<FracIdeal> = alphas
        .iter()
        .map(|a| ideal::principal_ideal(order, a).map_err(UnitsError::Ideal))
        .collect::<Result<_, _>>()?;
    ideal_power_kernel(order, &ideals)
}

/// Certified embedding data: a primitive element, its minimal polynomial,
/// isolating root boxes and the power-basis transition matrix.
#[derive(Debug, Clone)]
pub struct EmbeddingData {
    pub theta: KElement,
    pub minpoly: IntPoly,
    pub roots: Vec<RootBox>,
    /// Columns are the order coordinates of `theta^k`.
    pub power_basis: RatMat,
}

/// Certified `t`-approximations of the logarithms of all embeddings.
#[derive(Debug, Clone)]
pub struct LogApproximation {
    pub t: Int,
    /// `logs[j][sigma] = (re, im)` on the `1/t` grid, scaled by `t`.
    pub logs: Vec<Vec<(Int, Int)>>,
    /// `2 pi` on the grid, scaled by `t`.
    pub two_pi: Int,
    pub embeddings: EmbeddingData,
}

fn power_basis_matrix(order: &OrderRef, theta: &KElement) -> RatMat {
    let n = order.rank();
    let mut powers: Vec<Vec<Rat>> = Vec::with_capacity(n);
    let mut cur = order.one_element();
    powers.push(cur.to_rat_coords());
    for _ in 1..n {
        cur = order.mul(&cur, theta);
        powers.push(cur.to_rat_coords());
    }
    RatMat::from_fn(n, n, |i, j| powers[j][i].clone())
}

/// Certified `t`-approximation of `(log sigma(alpha_j))_sigma` for every
/// input, via isolated roots of the minimal polynomial of a primitive
/// element and ball evaluations of logarithm and argument. The precision
/// ladder doubles until every enclosure fits in half a grid cell.
pub fn embed_logs(
    order: &OrderRef,
    alphas: &[KElement],
    t: &Int,
) -> Result<LogApproximation, UnitsError> {
    assert!(t.is_positive());
    assert!(alphas.iter().all(|a| !a.is_zero()));
    let (theta, minpoly) =
        order::primitive_element(order, 8).map_err(UnitsError::NotCertified)?;
    let pb = power_basis_matrix(order, &theta);
    let pb_inv = pb.inverse().expect("primitive element gives a basis");
    let coords: Vec<Vec<Rat>> = alphas
        .iter()
        .map(|a| pb_inv.mul_vec(&a.to_rat_coords()))
        .collect();
    let n = order.rank();
    // target: every log component within 1/(2t)
    let half_cell = Rat::new(Int::one(), Int::from(2) * t);
    let eps = &half_cell / Rat::from_integer(Int::from(4));
    let mut rad = Rat::new(Int::one(), Int::one() << 40);
    if rad > eps {
        rad = eps.clone();
    }
    'ladder: for _attempt in 0..50 {
        let Some(roots) = certified::isolate_roots(&minpoly, &rad) else {
            rad /= Rat::from_integer(Int::from(4));
            continue 'ladder;
        };
        let bits = certified::sqrt_upper(&Rat::one(), 4); // placeholder to satisfy type flow
        let _ = bits;
        let mut logs: Vec<Vec<(Int, Int)>> = Vec::with_capacity(alphas.len());
        for c in &coords {
            let mut per_sigma: Vec<(Int, Int)> = Vec::with_capacity(n);
            for root in &roots {
                let z = root.to_cball();
                // Horner evaluation of sum c_k z^k with compression
                let mut acc = CBall::exact(Rat::zero(), Rat::zero());
                for ck in c.iter().rev() {
                    acc = acc.mul(&z).compress(192);
                    acc.re = acc.re.add(&Ball::exact(ck.clone()));
                }
                let norm2 = acc.norm2();
                if !norm2.lo().is_positive() {
                    rad /= Rat::from_integer(Int::from(4));
                    continue 'ladder;
                }
                let Some(ln_n2) = certified::ln_ball(&norm2, &eps) else {
                    rad /= Rat::from_integer(Int::from(4));
                    continue 'ladder;
                };
                let re_log = ln_n2.scale(&Rat::new(Int::one(), Int::from(2)));
                let im_log = if root.is_real() && acc.im.c.is_zero() && acc.im.r.is_zero() {
                    if acc.re.lo().is_positive() {
                        Ball::zero()
                    } else {
                        certified::pi(&eps)
                    }
                } else {
                    match certified::atan2_ball(&acc.im, &acc.re, &eps) {
                        Some(b) => b,
                        None => {
                            rad /= Rat::from_integer(Int::from(4));
                            continue 'ladder;
                        }
                    }
                };
                if re_log.r > half_cell || im_log.r > half_cell {
                    rad /= Rat::from_integer(Int::from(4));
                    continue 'ladder;
                }
                per_sigma.push((round_to_grid(&re_log.c, t), round_to_grid(&im_log.c, t)));
            }
            logs.push(per_sigma);
        }
        let two_pi_ball = certified::pi(&eps).scale(&Rat::from_integer(Int::from(2)));
        if two_pi_ball.r > half_cell {
            rad /= Rat::from_integer(Int::from(4));
            continue 'ladder;
        }
        let two_pi = round_to_grid(&two_pi_ball.c, t);
        return Ok(LogApproximation {
            t: t.clone(),
            logs,
            two_pi,
            embeddings: EmbeddingData {
                theta,
                minpoly,
                roots,
                power_basis: pb,
            },
        });
    }
    Err(UnitsError::PrecisionBudgetExceeded)
}

fn round_to_grid(v: &Rat, t: &Int) -> Int {
    let scaled = v * Rat::from_integer(t.clone());
    let num = scaled.numer() * Int::from(2) + scaled.denom();
    let den = scaled.denom() * Int::from(2);
    num.div_floor(&den)
}

fn rat_ceil(q: &Rat) -> Int {
    let (n, d) = (q.numer(), q.denom());
    let f = n.div_floor(d);
    if &(Rat::from_integer(f.clone())) == q {
        f
    } else {
        f + Int::one()
    }
}

/// Exactly decides `∏ alpha_i^(k_i) = 1` in `K` by binary powering of the
/// positive and negative parts.
pub fn verify_power_product(order: &OrderRef, alphas: &[KElement], expo: &[Int]) -> bool {
    assert_eq!(alphas.len(), expo.len());
    let mut pos = order.one_element();
    let mut neg = order.one_element();
    for (a, k) in alphas.iter().zip(expo) {
        if k.is_zero() {
            continue;
        }
        let e = k.abs().to_u32().expect("desk-scale exponents");
        let p = order.pow(a, e);
        if k.is_positive() {
            pos = order.mul(&pos, &p);
        } else {
            neg = order.mul(&neg, &p);
        }
    }
    pos == neg
}

/// Kernel of `(k_i) -> ∏ alpha_i^(k_i)` in `K*`.
///
/// Pipeline: unit-class kernel `H`, then relations of the logarithm
/// vectors of the `H`-basis products (plus the `2 pi i` rows) recovered
/// through the approximate-lattice algorithm with `lambda = log 2` and a
/// certified `B`, pulled back through `H`. Every output generator is
/// re-verified by exact arithmetic, so the approximate step can only
/// affect completeness, and the theorem's bounds make it complete.
pub fn multiplicative_kernel(
    order: &OrderRef,
    alphas: &[KElement],
) -> Result<IntMat, UnitsError> {
    let m = alphas.len();
    if m == 0 {
        return Ok(IntMat::zeros(0, 0));
    }
    let h_basis = unit_class_kernel(order, alphas)?;
    let h = h_basis.cols();
    if h == 0 {
        return Ok(IntMat::zeros(m, 0));
    }
    let n = order.rank();
    let big_n = 2 * n; // real dimension of C^X
    let s = h + n;

    // coarse pass: estimate B = max generator norm
    let t0 = Int::one() << 32;
    let coarse = embed_logs(order, alphas, &t0)?;
    let col_sum_max: Int = (0..h)
        .map(|i| (0..m).map(|j| h_basis[(j, i)].abs()).sum())
        .max()
        .unwrap_or_else(Int::one)
        .max(Int::one());
    let mut b_bound = Rat::new(Int::from(7), Int::one()); // covers the 2 pi rows
    for i in 0..h {
        let mut norm2 = Rat::zero();
        for sigma in 0..n {
            for part in 0..2 {
                let mut v = Rat::zero();
                for j in 0..m {
                    let g = if part == 0 {
                        &coarse.logs[j][sigma].0
                    } else {
                        &coarse.logs[j][sigma].1
                    };
                    v += Rat::new(&h_basis[(j, i)] * g, t0.clone());
                }
                let slack = Rat::new(col_sum_max.clone(), t0.clone());
                let vv = v.abs() + slack;
                norm2 += &vv * &vv;
            }
        }
        let upper = certified::sqrt_upper(&norm2, 20);
        if upper > b_bound {
            b_bound = upper;
        }
    }
    // round B up to a power of two
    let mut b_pow = Rat::one();
    while b_pow < b_bound {
        b_pow *= Rat::from_integer(Int::from(2));
    }
    // lambda >= log 2, certified lower bound
    let ln2 = certified::ln2(&Rat::new(Int::one(), Int::from(1_000_000_000)));
    let lambda_lo = ln2.lo();
    let ratio = &b_pow / &lambda_lo;
    let mut ratio_pow = Rat::one();
    for _ in 0..big_n {
        ratio_pow = &ratio_pow * &ratio * &ratio;
    }
    let omega_rat = Rat::from_integer(Int::one() << (2 * big_n + s + 1) as u32)
        * Rat::from_integer(Int::from(big_n as u64).pow(2 * big_n as u32 + 2))
        * Rat::from_integer(Int::from(s as u64))
        * ratio_pow;
    let omega = rat_ceil(&omega_rat);
    let sqrt_omega = certified::sqrt_upper(&Rat::from_integer(omega.clone()), 8);
    let t_req = rat_ceil(
        &(Rat::from_integer(Int::from((2 * big_n * s) as u64)) * &sqrt_omega / &lambda_lo),
    );

    // fine pass with enough headroom to re-round onto the t_req grid
    let t_fine = &t_req * Int::from(4) * &col_sum_max;
    let fine = embed_logs(order, alphas, &t_fine)?;

    // relation instance columns: h combined log vectors, then the 2 pi
    // rows, in coordinates (re_0, im_0, re_1, im_1, ...)
    let mut cols: Vec<Vec<Int>> = Vec::new();
    for i in 0..h {
        let mut col = Vec::with_capacity(big_n);
        for sigma in 0..n {
            for part in 0..2 {
                let mut v = Int::zero();
                for j in 0..m {
                    let g = if part == 0 {
                        &fine.logs[j][sigma].0
                    } else {
                        &fine.logs[j][sigma].1
                    };
                    v += &h_basis[(j, i)] * g;
                }
                // value v / t_fine, re-rounded onto the t_req grid
                col.push(round_to_grid(&Rat::new(v, t_fine.clone()), &t_req));
            }
        }
        cols.push(col);
    }
    let two_pi_req = round_to_grid(&Rat::new(fine.two_pi.clone(), t_fine.clone()), &t_req);
    for sigma in 0..n {
        let mut col = vec![Int::zero(); big_n];
        col[2 * sigma + 1] = two_pi_req.clone();
        cols.push(col);
    }
    let inst = RelationInstance {
        scaled: IntMat::from_cols(cols),
        t: t_req,
        omega,
    };
    let relations = lattice::relation_kernel(&inst);

    // pull back through H and verify each generator exactly
    let h_part = relations.row_slice(0, h);
    let pulled = h_basis.mul(&h_part);
    let out = linalg::hermite_basis(&pulled);
    for j in 0..out.cols() {
        if !verify_power_product(order, alphas, &out.col(j)) {
            return Err(UnitsError::PrecisionBudgetExceeded);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::order::samples;
    use std::sync::Arc;

    fn arc(o: order::Order) -> OrderRef {
        Arc::new(o)
    }

    fn kel(coords: &[i64]) -> KElement {
        KElement::from_int_coords(coords.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn ideal_power_kernel_examples() {
        let zz = arc(samples::zz());
        // (2), (4): kernel (2, -1)
        let i2 = ideal::principal_ideal(&zz, &kel(&[2])).unwrap();
        let i4 = ideal::principal_ideal(&zz, &kel(&[4])).unwrap();
        let k = ideal_power_kernel(&zz, &[i2, i4]).unwrap();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.col(0)[0].abs(), int(2));
        assert_eq!(k.col(0)[1].abs(), int(1));

        // (4500), (5400): independent
        let a = ideal::principal_ideal(&zz, &kel(&[4500])).unwrap();
        let b = ideal::principal_ideal(&zz, &kel(&[5400])).unwrap();
        let k = ideal_power_kernel(&zz, &[a, b]).unwrap();
        assert_eq!(k.cols(), 0);

        // single ideal R: kernel Z
        let r = ideal::unit_ideal(&zz);
        let k = ideal_power_kernel(&zz, &[r]).unwrap();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.col(0)[0].abs(), int(1));
    }

    #[test]
    fn unit_class_kernel_examples() {
        // 1 + sqrt2 is a unit: kernel Z
        let z2 = arc(samples::z_sqrt(2));
        let k = unit_class_kernel(&z2, &[kel(&[1, 1])]).unwrap();
        assert_eq!(k.cols(), 1);

        // rationals 2, 4
        let zz = arc(samples::zz());
        let k = unit_class_kernel(&zz, &[kel(&[2]), kel(&[4])]).unwrap();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.col(0)[0].abs(), int(2));

        // alpha = 1
        let k = unit_class_kernel(&zz, &[kel(&[1])]).unwrap();
        assert_eq!(k.cols(), 1);
    }

    #[test]
    fn embed_logs_examples() {
        // alpha = 2 in Q: log 2 within 1/t
        let zz = arc(samples::zz());
        let t = int(1_000_000);
        let logs = embed_logs(&zz, &[kel(&[2])], &t).unwrap();
        let re = Rat::new(logs.logs[0][0].0.clone(), t.clone());
        assert!((re - rat(693147, 1_000_000)).abs() < rat(2, 1_000_000));
        assert_eq!(logs.logs[0][0].1, int(0));

        // Z[sqrt2], alpha = 1 + sqrt2: logs are +-0.881374 (real embeddings)
        let z2 = arc(samples::z_sqrt(2));
        let logs = embed_logs(&z2, &[kel(&[1, 1])], &t).unwrap();
        let mut res: Vec<Rat> = (0..2)
            .map(|s| Rat::new(logs.logs[0][s].0.clone(), t.clone()))
            .collect();
        res.sort();
        assert!((res[1].clone() - rat(881373, 1_000_000)).abs() < rat(3, 1_000_000));
        assert!((res[0].clone() + rat(881373, 1_000_000)).abs() < rat(3, 1_000_000));
        // the negative embedding carries argument pi
        let args: Vec<Rat> = (0..2)
            .map(|s| Rat::new(logs.logs[0][s].1.clone(), t.clone()))
            .collect();
        let pi_count = args
            .iter()
            .filter(|a| (a.clone().clone() - rat(3141592, 1_000_000)).abs() < rat(3, 1_000_000))
            .count();
        let zero_count = args.iter().filter(|a| a.is_zero()).count();
        assert_eq!((pi_count, zero_count), (1, 1));

        // alpha = 1: all logs 0
        let logs = embed_logs(&z2, &[kel(&[1, 0])], &t).unwrap();
        for s in 0..2 {
            assert_eq!(logs.logs[0][s], (int(0), int(0)));
        }
    }

    #[test]
    fn multiplicative_kernel_rationals() {
        let zz = arc(samples::zz());
        let k = multiplicative_kernel(&zz, &[kel(&[2]), kel(&[4])]).unwrap();
        assert_eq!(k.cols(), 1);
        let c = k.col(0);
        assert_eq!(c[0].abs(), int(2));
        assert_eq!(c[1].abs(), int(1));
        assert!(verify_power_product(&zz, &[kel(&[2]), kel(&[4])], &c));
    }

    #[test]
    fn multiplicative_kernel_sign_torsion() {
        // alpha = -1: kernel 2Z
        let zz = arc(samples::zz());
        let k = multiplicative_kernel(&zz, &[kel(&[-1])]).unwrap();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.col(0)[0].abs(), int(2));
    }

    #[test]
    fn multiplicative_kernel_fundamental_unit_pair() {
        // (1+sqrt2)(sqrt2-1) = 1: kernel exactly <(1,1)>
        let z2 = arc(samples::z_sqrt(2));
        let alphas = [kel(&[1, 1]), kel(&[-1, 1])];
        let k = multiplicative_kernel(&z2, &alphas).unwrap();
        assert_eq!(k.cols(), 1);
        let c = k.col(0);
        assert_eq!(c[0].abs(), int(1));
        assert_eq!(c[0], c[1]);
        assert!(verify_power_product(&z2, &alphas, &c));
    }

    #[test]
    fn multiplicative_kernel_gaussian_torsion() {
        // alpha = i in Z[i]: kernel 4Z
        let zi = arc(samples::z_sqrt(-1));
        let k = multiplicative_kernel(&zi, &[kel(&[0, 1])]).unwrap();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.col(0)[0].abs(), int(4));
    }

    #[test]
    fn kernel_contained_in_class_kernel() {
        let z2 = arc(samples::z_sqrt(2));
        let alphas = [kel(&[1, 1]), kel(&[0, 1]), kel(&[2, 0])];
        let full = multiplicative_kernel(&z2, &alphas).unwrap();
        let class = unit_class_kernel(&z2, &alphas).unwrap();
        assert!(linalg::span_subset(&full, &class));
    }

    #[test]
    fn verification_rejects_non_relations() {
        let z2 = arc(samples::z_sqrt(2));
        assert!(!verify_power_product(
            &z2,
            &[kel(&[1, 1])],
            &[int(3)]
        ));
        assert!(verify_power_product(
            &z2,
            &[kel(&[1, 1]), kel(&[-1, 1])],
            &[int(5), int(5)]
        ));
    }
}
