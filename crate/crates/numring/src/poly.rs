//! Univariate polynomials over `Int` and `Rat`, just enough for minimal
//! polynomials, characteristic polynomials and certified root bounds.

use crate::exact::{gcd, Int, Rat};
use num_traits::{One, Signed, Zero};

/// Integer polynomial, coefficients low degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct IntPoly {
    pub coeffs: Vec<Int>,
}

impl std::fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "IntPoly({})", self)
    }
}

impl std::fmt::Display for IntPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*X"),
                _ => format!("{c}*X^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<Int>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        assert!(!self.is_zero(), "degree of zero polynomial");
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &Int {
        self.coeffs.last().expect("leading of zero polynomial")
    }

    pub fn coeff(&self, i: usize) -> Int {
        self.coeffs.get(i).cloned().unwrap_or_else(Int::zero)
    }

    pub fn content(&self) -> Int {
        let mut g = Int::zero();
        for c in &self.coeffs {
            g = gcd(&g, c);
        }
        g
    }

    /// Divide by the content and make the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        IntPoly::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        IntPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * Int::from(i as u64 + 1))
                .collect(),
        )
    }

    pub fn eval_rat(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rat::from_integer(c.clone());
        }
        acc
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .map(|c| Rat::from_integer(c.clone()))
                .collect(),
        )
    }

    /// True when `gcd(f, f') = 1` over the rationals.
    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.degree() == 0 {
            return true;
        }
        let g = self.to_rat().gcd(&self.derivative().to_rat());
        g.degree() == 0
    }
}

/// Rational polynomial, coefficients low degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatPoly {
    pub coeffs: Vec<Rat>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        assert!(!self.is_zero());
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn monic(&self) -> Self {
        assert!(!self.is_zero());
        let l = self.coeffs.last().unwrap().clone();
        RatPoly::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    /// Remainder of `self` modulo `d`.
    pub fn rem(&self, d: &RatPoly) -> RatPoly {
        assert!(!d.is_zero());
        let dd = d.degree();
        let dl = d.coeffs.last().unwrap();
        let mut r = self.coeffs.clone();
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        while r.len() > dd {
            let lead = r.last().unwrap().clone();
            let q = &lead / dl;
            let shift = r.len() - 1 - dd;
            for (i, c) in d.coeffs.iter().enumerate() {
                let t = &q * c;
                r[shift + i] -= t;
            }
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        RatPoly::new(r)
    }

    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = std::mem::replace(&mut b, r);
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Clear denominators and divide by content.
    pub fn primitive_integer(&self) -> IntPoly {
        let mut den = Int::one();
        for c in &self.coeffs {
            den = crate::exact::lcm(&den, c.denom());
        }
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|c| {
                    let v = c * Rat::from_integer(den.clone());
                    v.to_integer()
                })
                .collect(),
        )
        .primitive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_check() {
        assert!(IntPoly::from_i64(&[-2, 0, 1]).is_squarefree()); // X^2 - 2
        assert!(!IntPoly::from_i64(&[1, 2, 1]).is_squarefree()); // (X+1)^2
        assert!(IntPoly::from_i64(&[0, -1, 0, 1]).is_squarefree()); // X^3 - X
    }

    #[test]
    fn primitive_scaling() {
        let p = IntPoly::from_i64(&[2, -4, -6]);
        assert_eq!(p.primitive(), IntPoly::from_i64(&[-1, 2, 3]));
    }

    #[test]
    fn gcd_of_rationals() {
        // gcd((X-1)(X-2), (X-1)(X-3)) = X-1
        let a = IntPoly::from_i64(&[2, -3, 1]).to_rat();
        let b = IntPoly::from_i64(&[3, -4, 1]).to_rat();
        let g = a.gcd(&b);
        assert_eq!(g.degree(), 1);
        assert_eq!(g.coeff(0), Rat::from_integer(Int::from(-1)));
    }
}
