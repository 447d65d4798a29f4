//! Arbitrary-precision integer and rational primitives.
//!
//! `Int` and `Rat` are the `num-bigint` / `num-rational` types; both already
//! maintain the invariants we need (canonical zero, reduced fractions with
//! positive denominator). This module adds the handful of number-theoretic
//! operations the rest of the crate is built on.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Extended gcd with a canonical Bézout pair.
///
/// Returns `(g, x, y)` with `g = gcd(a, b) >= 0` and `a*x + b*y = g`.
/// Among all valid pairs the one with minimal `|x|` is chosen (ties resolved
/// towards positive `x`), so outputs are stable enough to golden-test.
pub fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    if a.is_zero() && b.is_zero() {
        return (Int::zero(), Int::zero(), Int::zero());
    }
    if b.is_zero() {
        return (a.abs(), a.signum(), Int::zero());
    }
    if a.is_zero() {
        return (b.abs(), Int::zero(), b.signum());
    }
    // Iterative extended Euclid on |a|, |b|.
    let (mut r0, mut r1) = (a.abs(), b.abs());
    let (mut x0, mut x1) = (Int::one(), Int::zero());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        let x = &x0 - &q * &x1;
        r0 = std::mem::replace(&mut r1, r);
        x0 = std::mem::replace(&mut x1, x);
    }
    let g = r0;
    let mut x = if a.is_negative() { -x0 } else { x0 };
    // Canonicalize: x is determined modulo b/g; take the representative of
    // minimal absolute value, preferring the positive one on ties.
    let m = (b / &g).abs();
    if !m.is_zero() {
        x = x.mod_floor(&m);
        let twice = &x + &x;
        if twice > m || (twice == m && x.is_negative()) {
            x -= &m;
        }
    }
    let y = (&g - a * &x) / b;
    (g, x, y)
}

pub fn gcd(a: &Int, b: &Int) -> Int {
    a.gcd(b)
}

pub fn lcm(a: &Int, b: &Int) -> Int {
    a.lcm(b)
}

/// Least `c >= 0` with `c ≡ a (mod m)` and `c ≡ b (mod n)`, if any.
///
/// Requires `m, n > 1`. Returns `None` exactly when `a ≢ b mod gcd(m, n)`.
pub fn crt_combine(a: &Int, m: &Int, b: &Int, n: &Int) -> Option<Int> {
    assert!(m > &Int::one() && n > &Int::one(), "moduli must exceed 1");
    let (g, x, _) = ext_gcd(m, n);
    let diff = b - a;
    if !(&diff % &g).is_zero() {
        return None;
    }
    let lcm = m / &g * n;
    // c = a + m * t with t ≡ (b - a)/g * (m/g)^{-1} (mod n/g); x is already
    // an inverse of m/g modulo n/g up to the factor g.
    let t = (&diff / &g * &x).mod_floor(&(n / &g));
    Some((a + m * t).mod_floor(&lcm))
}

/// `a^e mod n` for `e >= 0`, `n > 0`, by binary powering.
pub fn mod_pow(a: &Int, e: &Int, n: &Int) -> Int {
    assert!(!e.is_negative(), "exponent must be non-negative");
    assert!(n.is_positive(), "modulus must be positive");
    let base = a.mod_floor(n);
    base.modpow(e, n)
}

/// The remainder chain `(x0, x1, x0 mod x1, ...)` ending in 0.
///
/// The second-to-last entry is `gcd(x0, x1)`. Inputs must be non-negative
/// and not both zero.
pub fn gcd_sequence(x0: &Int, x1: &Int) -> Vec<Int> {
    assert!(!x0.is_negative() && !x1.is_negative());
    assert!(!(x0.is_zero() && x1.is_zero()), "gcd sequence of (0,0)");
    let mut seq = vec![x0.clone(), x1.clone()];
    while !seq.last().unwrap().is_zero() {
        let a = seq[seq.len() - 2].clone();
        let b = seq[seq.len() - 1].clone();
        seq.push(a.mod_floor(&b));
    }
    seq
}

/// Exact integer square root: largest `r` with `r*r <= n`.
pub fn isqrt(n: &Int) -> Int {
    assert!(!n.is_negative());
    n.sqrt()
}

/// Largest `r` with `r^k <= n` (`n >= 0`, `k >= 1`).
pub fn nth_root_floor(n: &Int, k: u32) -> Int {
    assert!(!n.is_negative() && k >= 1);
    n.nth_root(k)
}

/// Number of binary digits of `|n|`, with `l(0) = 1`.
pub fn bit_length(n: &Int) -> u64 {
    if n.is_zero() {
        1
    } else {
        n.abs().bits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ext_gcd_golden() {
        assert_eq!(ext_gcd(&int(0), &int(0)), (int(0), int(0), int(0)));
        assert_eq!(ext_gcd(&int(240), &int(46)), (int(2), int(-9), int(47)));
        assert_eq!(ext_gcd(&int(7), &int(1)), (int(1), int(0), int(1)));
        assert_eq!(ext_gcd(&int(5), &int(0)), (int(5), int(1), int(0)));
    }

    #[test]
    fn crt_golden() {
        assert_eq!(crt_combine(&int(2), &int(3), &int(3), &int(5)), Some(int(8)));
        assert_eq!(crt_combine(&int(1), &int(2), &int(0), &int(4)), None);
        assert_eq!(crt_combine(&int(5), &int(7), &int(5), &int(9)), Some(int(5)));
    }

    #[test]
    fn mod_pow_golden() {
        assert_eq!(mod_pow(&int(2), &int(10), &int(1000)), int(24));
        assert_eq!(mod_pow(&int(17), &int(0), &int(5)), int(1));
        let huge = Int::one() << 64;
        assert_eq!(mod_pow(&int(3), &huge, &int(5)), int(1));
    }

    #[test]
    fn gcd_sequence_golden() {
        let seq = |a: i64, b: i64| {
            gcd_sequence(&int(a), &int(b))
                .iter()
                .map(|x| format!("{x}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        assert_eq!(seq(19, 7), "19,7,5,2,1,0");
        assert_eq!(seq(23, 1), "23,1,0");
        assert_eq!(seq(4500, 5400), "4500,5400,4500,900,0");
    }

    #[test]
    fn mod_pow_matches_naive_small() {
        for a in 0..50i64 {
            for n in 1..50i64 {
                let mut acc = int(1).mod_floor(&int(n));
                for e in 0..20i64 {
                    assert_eq!(mod_pow(&int(a), &int(e), &int(n)), acc, "a={a} e={e} n={n}");
                    acc = (acc * int(a)).mod_floor(&int(n));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn ext_gcd_contract(a in -10_000_000i64..10_000_000, b in -10_000_000i64..10_000_000) {
            let (a, b) = (int(a), int(b));
            let (g, x, y) = ext_gcd(&a, &b);
            prop_assert!(!g.is_negative());
            prop_assert_eq!(&a * &x + &b * &y, g.clone());
            prop_assert_eq!(g.is_zero(), a.is_zero() && b.is_zero());
            if !g.is_zero() {
                prop_assert!((&a % &g).is_zero() && (&b % &g).is_zero());
                let xb = Int::one().max((&b / &g).abs());
                let yb = Int::one().max((&a / &g).abs());
                prop_assert!(x.abs() <= xb, "x={} not minimal for ({},{})", x, a, b);
                prop_assert!(y.abs() <= yb, "y={} too large for ({},{})", y, a, b);
            }
        }

        #[test]
        fn gcd_sequence_contract(a in 0u32..100_000, b in 1u32..100_000) {
            let seq = gcd_sequence(&int(a as i64), &int(b as i64));
            prop_assert!(seq.last().unwrap().is_zero());
            prop_assert_eq!(seq[seq.len() - 2].clone(), gcd(&int(a as i64), &int(b as i64)));
            for w in seq.windows(3) {
                prop_assert_eq!(w[0].mod_floor(&w[1]), w[2].clone());
            }
        }
    }
}
