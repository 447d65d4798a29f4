//! Desk-scale factoring oracle.
//!
//! Several problems in this crate (computing radicals of integers, testing
//! square-freeness, deciding maximality of an order) provably reduce to
//! integer factorization, for which no fast algorithm is known. This module
//! is the quarantined stand-in that lets the reductions be exercised at desk
//! scale. Callers outside `maxorder`, `finring` and the test suites should
//! not reach for it; each permitted call site is marked "paper-hard" in its
//! doc comment.
//!
//! The oracle runs bounded trial division followed by a bounded Pollard rho
//! stage and reports [`OracleError::BudgetExceeded`] when a cofactor
//! survives both.

use crate::exact::{gcd, nth_root_floor, Int};
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone)]
pub struct OracleConfig {
    /// Trial division covers all primes up to this bound.
    pub trial_bound: u64,
    /// Iteration budget for each Pollard rho attempt.
    pub rho_iterations: u64,
    /// Number of rho attempts (with distinct polynomial offsets).
    pub rho_attempts: u32,
    /// Miller-Rabin rounds used above the deterministic 64-bit range.
    pub mr_rounds: u32,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            trial_bound: 1 << 20,
            rho_iterations: 1 << 18,
            rho_attempts: 8,
            mr_rounds: 32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// A composite cofactor survived the configured effort bound.
    BudgetExceeded { cofactor: Int },
}

impl std::fmt::Display for OracleError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OracleError::BudgetExceeded { cofactor } => {
                write!(f, "factoring budget exceeded on cofactor {cofactor}")
            }
        }
    }
}

impl std::error::Error for OracleError {}

/// Full prime factorization of `n > 0` as `(prime, exponent)` pairs, primes
/// ascending.
pub fn factor(n: &Int) -> Result<Vec<(Int, u32)>, OracleError> {
    factor_with(&OracleConfig::default(), n)
}

pub fn factor_with(cfg: &OracleConfig, n: &Int) -> Result<Vec<(Int, u32)>, OracleError> {
    assert!(n.is_positive(), "factor oracle needs n > 0");
    let mut factors: Vec<(Int, u32)> = Vec::new();
    let mut rem = n.clone();
    let push = |p: Int, k: u32, factors: &mut Vec<(Int, u32)>| {
        if let Some(last) = factors.iter_mut().find(|(q, _)| *q == p) {
            last.1 += k;
        } else {
            factors.push((p, k));
        }
    };

    // Trial division. Stop early once the remaining cofactor is 1 or prime.
    let mut p = 2u64;
    while p <= cfg.trial_bound {
        let pi = Int::from(p);
        if (&pi * &pi) > rem {
            break;
        }
        if (&rem % &pi).is_zero() {
            let mut k = 0;
            while (&rem % &pi).is_zero() {
                rem /= &pi;
                k += 1;
            }
            push(pi, k, &mut factors);
        }
        p = if p == 2 { 3 } else { p + 2 };
    }

    let mut stack = vec![rem];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime_with(cfg, &m) {
            push(m, 1, &mut factors);
            continue;
        }
        // Perfect powers first: rho behaves poorly on them.
        if let Some((base, k)) = perfect_power(&m) {
            for _ in 0..k {
                stack.push(base.clone());
            }
            continue;
        }
        match pollard_rho(cfg, &m) {
            Some(d) => {
                stack.push(&m / &d);
                stack.push(d);
            }
            None => return Err(OracleError::BudgetExceeded { cofactor: m }),
        }
    }

    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(factors)
}

/// Largest square-free divisor of `n > 0`.
pub fn rad(n: &Int) -> Result<Int, OracleError> {
    rad_with(&OracleConfig::default(), n)
}

pub fn rad_with(cfg: &OracleConfig, n: &Int) -> Result<Int, OracleError> {
    let mut r = Int::one();
    for (p, _) in factor_with(cfg, n)? {
        r *= p;
    }
    Ok(r)
}

pub fn is_squarefree(n: &Int) -> Result<bool, OracleError> {
    is_squarefree_with(&OracleConfig::default(), n)
}

pub fn is_squarefree_with(cfg: &OracleConfig, n: &Int) -> Result<bool, OracleError> {
    Ok(factor_with(cfg, n)?.iter().all(|(_, k)| *k == 1))
}

/// Primality test: deterministic Miller-Rabin bases below 2^64, configured
/// rounds of pseudo-random bases above.
pub fn is_prime(n: &Int) -> bool {
    is_prime_with(&OracleConfig::default(), n)
}

pub fn is_prime_with(cfg: &OracleConfig, n: &Int) -> bool {
    if n <= &Int::one() {
        return false;
    }
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    if n.is_even() {
        return false;
    }
    // Pseudo-random bases derived from a fixed splitmix stream keep the
    // answer deterministic across runs.
    let mut state = 0x9e3779b97f4a7c15u64;
    for _ in 0..cfg.mr_rounds {
        state = splitmix(state);
        let a = Int::from(2u64 + state % (1u64 << 62));
        if !miller_rabin_round(n, &a) {
            return false;
        }
    }
    true
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    // Deterministic for all 64-bit inputs with this base set.
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'base: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod_u64(r, a, m);
        }
        a = mul_mod_u64(a, a, m);
        e >>= 1;
    }
    r
}

fn miller_rabin_round(n: &Int, a: &Int) -> bool {
    let n1: Int = n - 1;
    let s: u64 = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    let mut x = a.modpow(&d, n);
    if x.is_one() || x == n1 {
        return true;
    }
    for _ in 0..s.saturating_sub(1) {
        x = (&x * &x) % n;
        if x == n1 {
            return true;
        }
    }
    false
}

/// Returns `(b, k)` with `n = b^k`, `k >= 2`, if `n` is a perfect power.
pub fn perfect_power(n: &Int) -> Option<(Int, u32)> {
    if n <= &Int::one() {
        return None;
    }
    let bits = n.bits() as u32;
    for k in (2..=bits).rev() {
        let b = nth_root_floor(n, k);
        if b <= Int::one() {
            continue;
        }
        if b.pow(k) == *n {
            return Some((b, k));
        }
    }
    None
}

fn pollard_rho(cfg: &OracleConfig, n: &Int) -> Option<Int> {
    // Brent's variant with batched gcds.
    for attempt in 1..=cfg.rho_attempts {
        let c = Int::from(attempt);
        let mut x = Int::from(2 + attempt as u64);
        let mut y = x.clone();
        let mut acc = Int::one();
        let mut count = 0u64;
        while count < cfg.rho_iterations {
            x = (&x * &x + &c) % n;
            y = (&y * &y + &c) % n;
            y = (&y * &y + &c) % n;
            let diff = (&x - &y).abs();
            if diff.is_zero() {
                break; // cycle without a factor; next attempt
            }
            acc = (acc * diff) % n;
            count += 1;
            if count % 64 == 0 {
                let g = gcd(&acc, n);
                if g > Int::one() && &g < n {
                    return Some(g);
                }
                if g == *n {
                    break;
                }
            }
        }
        let g = gcd(&acc, n);
        if g > Int::one() && &g < n {
            return Some(g);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn fac(n: i64) -> Vec<(i64, u32)> {
        factor(&int(n))
            .unwrap()
            .into_iter()
            .map(|(p, k)| (p.to_i64().unwrap(), k))
            .collect()
    }

    #[test]
    fn factor_golden() {
        assert_eq!(fac(12), vec![(2, 2), (3, 1)]);
        assert_eq!(fac(1), vec![]);
        assert_eq!(fac(9907), vec![(9907, 1)]);
        assert_eq!(rad(&int(12)).unwrap(), int(6));
        assert_eq!(rad(&int(1)).unwrap(), int(1));
    }

    #[test]
    fn rad_properties() {
        for n in 1..500i64 {
            let n = int(n);
            let r = rad(&n).unwrap();
            // rad(n)^2 divides n * rad(n)
            assert!(((&n * &r) % (&r * &r)).is_zero());
            assert!(is_squarefree(&r).unwrap());
        }
        // multiplicative on coprime arguments
        for a in 1..60i64 {
            for b in 1..60i64 {
                if gcd(&int(a), &int(b)).is_one() {
                    assert_eq!(
                        rad(&int(a * b)).unwrap(),
                        rad(&int(a)).unwrap() * rad(&int(b)).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn primality_agrees_with_sieve() {
        let mut sieve = vec![true; 2000];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..2000 {
            if sieve[i] {
                for j in (i * i..2000).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for n in 0..2000 {
            assert_eq!(is_prime(&int(n as i64)), sieve[n], "n={n}");
        }
    }

    #[test]
    fn rho_splits_semiprime() {
        // 1009 * 1013, above the reach of a tiny trial bound
        let cfg = OracleConfig {
            trial_bound: 10,
            ..OracleConfig::default()
        };
        let fs = factor_with(&cfg, &int(1009 * 1013)).unwrap();
        assert_eq!(fs.len(), 2);
    }

    #[test]
    fn budget_error_reported() {
        let cfg = OracleConfig {
            trial_bound: 10,
            rho_iterations: 2,
            rho_attempts: 1,
            mr_rounds: 8,
        };
        // product of two 11-digit primes; rho with 2 iterations cannot split it
        let n = int(10000000019) * int(10000000033);
        assert!(matches!(
            factor_with(&cfg, &n),
            Err(OracleError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn perfect_power_detection() {
        assert_eq!(perfect_power(&int(1024)), Some((int(2), 10)));
        assert_eq!(perfect_power(&int(3u64.pow(7) as i64)), Some((int(3), 7)));
        assert_eq!(perfect_power(&int(12)), None);
    }
}
