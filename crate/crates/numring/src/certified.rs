//! Certified rational enclosures for the handful of transcendental values
//! the unit-kernel pipeline needs: logarithms and arguments of algebraic
//! numbers, and 2*pi.
//!
//! Everything is ball arithmetic over exact rationals with dyadic
//! compression to keep denominators bounded. Root isolation starts from a
//! floating-point Durand-Kerner sweep and certifies with the classical
//! containment bound `min_dist(z, roots) <= n |f(z)/f'(z)|` plus pairwise
//! disjointness of the discs.

use crate::exact::{Int, Rat};
use crate::poly::IntPoly;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `c ± r` with `r >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub c: Rat,
    pub r: Rat,
}

impl Ball {
    pub fn exact(c: Rat) -> Ball {
        Ball { c, r: Rat::zero() }
    }

    pub fn new(c: Rat, r: Rat) -> Ball {
        assert!(!r.is_negative());
        Ball { c, r }
    }

    pub fn zero() -> Ball {
        Ball::exact(Rat::zero())
    }

    pub fn lo(&self) -> Rat {
        &self.c - &self.r
    }

    pub fn hi(&self) -> Rat {
        &self.c + &self.r
    }

    pub fn abs_upper(&self) -> Rat {
        self.c.abs() + &self.r
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo().is_positive() && !self.hi().is_negative()
    }

    pub fn add(&self, other: &Ball) -> Ball {
        Ball {
            c: &self.c + &other.c,
            r: &self.r + &other.r,
        }
    }

    pub fn sub(&self, other: &Ball) -> Ball {
        Ball {
            c: &self.c - &other.c,
            r: &self.r + &other.r,
        }
    }

    pub fn neg(&self) -> Ball {
        Ball {
            c: -self.c.clone(),
            r: self.r.clone(),
        }
    }

    pub fn mul(&self, other: &Ball) -> Ball {
        let r = self.c.abs() * &other.r + other.c.abs() * &self.r + &self.r * &other.r;
        Ball {
            c: &self.c * &other.c,
            r,
        }
    }

    pub fn scale(&self, q: &Rat) -> Ball {
        Ball {
            c: &self.c * q,
            r: &self.r * q.abs(),
        }
    }

    /// Reciprocal of a sign-definite ball.
    pub fn recip(&self) -> Option<Ball> {
        if self.contains_zero() {
            return None;
        }
        let lo = self.lo();
        let hi = self.hi();
        let (a, b) = (hi.recip(), lo.recip());
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let two = Rat::from_integer(Int::from(2));
        Some(Ball {
            c: (&a + &b) / &two,
            r: (&b - &a) / &two,
        })
    }

    pub fn div(&self, other: &Ball) -> Option<Ball> {
        Some(self.mul(&other.recip()?))
    }

    /// Rounds the center to a dyadic with `bits` fractional bits, folding
    /// the rounding error into the radius (also dyadically rounded up).
    pub fn compress(&self, bits: u32) -> Ball {
        let s = Int::one() << bits;
        let sr = Rat::from_integer(s.clone());
        let (c, e) = round_dyadic(&self.c, &s);
        // round the radius up
        let rs = (&self.r + &e) * &sr;
        let rn = rs.numer().div_floor(rs.denom()) + Int::one();
        Ball {
            c,
            r: Rat::new(rn, s),
        }
    }
}

fn round_dyadic(q: &Rat, s: &Int) -> (Rat, Rat) {
    let scaled = q * Rat::from_integer(s.clone());
    let n = scaled.numer().div_floor(scaled.denom());
    let c = Rat::new(n, s.clone());
    let e = (q - &c).abs();
    (c, e)
}

/// Rational `u` with `u >= sqrt(q)`, within `2^-bits` relative slack.
pub fn sqrt_upper(q: &Rat, bits: u32) -> Rat {
    assert!(!q.is_negative());
    if q.is_zero() {
        return Rat::zero();
    }
    let s = Int::one() << bits;
    let v = q * Rat::from_integer(&s * &s);
    let n = v.numer().div_floor(v.denom()) + Int::one();
    Rat::new(n.sqrt() + Int::one(), s)
}

/// Rational `l` with `0 <= l <= sqrt(q)`.
pub fn sqrt_lower(q: &Rat, bits: u32) -> Rat {
    assert!(!q.is_negative());
    if q.is_zero() {
        return Rat::zero();
    }
    let s = Int::one() << bits;
    let v = q * Rat::from_integer(&s * &s);
    let n = v.numer().div_floor(v.denom());
    if n.is_negative() {
        return Rat::zero();
    }
    Rat::new(n.sqrt(), s)
}

fn precision_for(eps: &Rat) -> u32 {
    // enough fractional bits that a few hundred roundings stay below eps
    let inv = eps.recip();
    let bits = crate::exact::bit_length(&inv.to_integer_trunc()) as u32;
    bits + 40
}

trait RatTrunc {
    fn to_integer_trunc(&self) -> Int;
}

impl RatTrunc for Rat {
    fn to_integer_trunc(&self) -> Int {
        self.numer() / self.denom()
    }
}

/// `atanh` power series on a small ball (`|x| <= 1/2` required).
fn atanh_series(x: &Ball, eps: &Rat) -> Ball {
    let bits = precision_for(eps);
    debug_assert!(x.abs_upper() <= Rat::new(Int::from(1), Int::from(2)) + Rat::new(Int::one(), Int::from(100)));
    let x2 = x.mul(x).compress(bits);
    let mut term = x.clone();
    let mut sum = Ball::zero();
    let mut k = 0u32;
    loop {
        let contrib = term.scale(&Rat::new(Int::one(), Int::from(2 * k as i64 + 1)));
        sum = sum.add(&contrib).compress(bits);
        // alternating-free tail bound: sum_{i>k} |x|^{2i+1}/(2i+1)
        //   <= |x|^{2k+3} / (1 - |x|^2)
        let xa = x.abs_upper();
        let tail = xa.clone().pow(2 * k as i32 + 3)
            / (Rat::one() - &xa * &xa);
        if &tail * Rat::from_integer(Int::from(4)) < *eps {
            sum.r += tail;
            return sum;
        }
        term = term.mul(&x2).compress(bits);
        k += 1;
        assert!(k < 10_000, "atanh series failed to converge");
    }
}

/// Certified `ln 2`.
pub fn ln2(eps: &Rat) -> Ball {
    // ln 2 = 2 atanh(1/3)
    let third = Ball::exact(Rat::new(Int::one(), Int::from(3)));
    atanh_series(&third, eps).scale(&Rat::from_integer(Int::from(2)))
}

/// Certified natural logarithm of a ball bounded away from zero.
pub fn ln_ball(x: &Ball, eps: &Rat) -> Option<Ball> {
    let lo = x.lo();
    if !lo.is_positive() {
        return None;
    }
    // |ln(c ± r) - ln c| <= r / lo
    let spread = &x.r / &lo;
    let v = ln_rat(&x.c, eps);
    Some(Ball {
        c: v.c,
        r: v.r + spread,
    })
}

/// Certified `ln q` for rational `q > 0`.
pub fn ln_rat(q: &Rat, eps: &Rat) -> Ball {
    assert!(q.is_positive());
    // argument reduction to m in [1, 2)
    let mut k: i64 = 0;
    let mut m = q.clone();
    let two = Rat::from_integer(Int::from(2));
    let one = Rat::one();
    while m >= two {
        m /= &two;
        k += 1;
    }
    while m < one {
        m *= &two;
        k -= 1;
    }
    let sub_eps = eps / Rat::from_integer(Int::from(4 * (1 + k.abs())));
    let mut out = if m.is_one() {
        Ball::zero()
    } else {
        // ln m = 2 atanh((m-1)/(m+1)), argument in (0, 1/3)
        let x = Ball::exact((&m - &one) / (&m + &one));
        atanh_series(&x, &sub_eps).scale(&two)
    };
    if k != 0 {
        let l2 = ln2(&sub_eps);
        out = out.add(&l2.scale(&Rat::from_integer(Int::from(k))));
    }
    out
}

/// Certified pi via Machin's formula.
pub fn pi(eps: &Rat) -> Ball {
    // pi = 16 atan(1/5) - 4 atan(1/239)
    let sub = eps / Rat::from_integer(Int::from(32));
    let a = atan_series(&Ball::exact(Rat::new(Int::one(), Int::from(5))), &sub);
    let b = atan_series(&Ball::exact(Rat::new(Int::one(), Int::from(239))), &sub);
    a.scale(&Rat::from_integer(Int::from(16)))
        .sub(&b.scale(&Rat::from_integer(Int::from(4))))
}

/// `atan` power series on a small ball (`|x| <= 0.7` required).
fn atan_series(x: &Ball, eps: &Rat) -> Ball {
    let bits = precision_for(eps);
    let x2 = x.mul(x).compress(bits);
    let mut term = x.clone();
    let mut sum = Ball::zero();
    let mut k = 0u32;
    loop {
        let coeff = Rat::new(
            if k % 2 == 0 { Int::one() } else { -Int::one() },
            Int::from(2 * k as i64 + 1),
        );
        sum = sum.add(&term.scale(&coeff)).compress(bits);
        let xa = x.abs_upper();
        let tail = xa.pow(2 * k as i32 + 3) / Rat::from_integer(Int::from(2 * k as i64 + 3));
        if &tail * Rat::from_integer(Int::from(4)) < *eps {
            sum.r += tail;
            return sum;
        }
        term = term.mul(&x2).compress(bits);
        k += 1;
        assert!(k < 10_000, "atan series failed to converge");
    }
}

/// Certified `atan` on an arbitrary ball (must be reasonably narrow).
pub fn atan_ball(x: &Ball, eps: &Rat) -> Ball {
    if x.c.is_negative() {
        return atan_ball(&x.neg(), eps).neg();
    }
    let p7 = Rat::new(Int::from(65), Int::from(100));
    let p16 = Rat::new(Int::from(16), Int::from(10));
    let p15 = Rat::new(Int::from(15), Int::from(10));
    if x.hi() <= p7 {
        return atan_series(x, eps);
    }
    if x.hi() <= p16 && x.lo() >= Rat::new(Int::from(55), Int::from(100)) {
        // atan t = pi/4 + atan((t-1)/(t+1)); shifted argument stays small
        let one = Ball::exact(Rat::one());
        let shifted = x.sub(&one).div(&x.add(&one)).expect("t + 1 > 1.5");
        let quarter_pi = pi(eps).scale(&Rat::new(Int::one(), Int::from(4)));
        return quarter_pi.add(&atan_series(&shifted, eps));
    }
    if x.lo() >= p15 {
        // atan t = pi/2 - atan(1/t)
        let half_pi = pi(eps).scale(&Rat::new(Int::one(), Int::from(2)));
        let inv = x.recip().expect("bounded away from zero");
        return half_pi.sub(&atan_ball(&inv, eps));
    }
    // the ball is too wide to classify; return a safe but useless enclosure
    Ball::new(Rat::zero(), Rat::from_integer(Int::from(2)))
}

/// Certified principal-branch argument of a complex ball; `None` when the
/// box does not fit inside an open half-plane (caller must refine).
pub fn atan2_ball(im: &Ball, re: &Ball, eps: &Rat) -> Option<Ball> {
    let div = |a: &Ball, b: &Ball| a.div(b);
    if re.lo().is_positive() {
        return Some(atan_ball(&div(im, re)?, eps));
    }
    if im.lo().is_positive() {
        let half_pi = pi(eps).scale(&Rat::new(Int::one(), Int::from(2)));
        return Some(half_pi.sub(&atan_ball(&div(re, im)?, eps)));
    }
    if im.hi().is_negative() {
        let half_pi = pi(eps).scale(&Rat::new(Int::one(), Int::from(2)));
        return Some(half_pi.neg().sub(&atan_ball(&div(re, im)?, eps)));
    }
    None
}

/// Complex ball as a coordinate rectangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CBall {
    pub re: Ball,
    pub im: Ball,
}

impl CBall {
    pub fn exact(re: Rat, im: Rat) -> CBall {
        CBall {
            re: Ball::exact(re),
            im: Ball::exact(im),
        }
    }

    pub fn add(&self, other: &CBall) -> CBall {
        CBall {
            re: self.re.add(&other.re),
            im: self.im.add(&other.im),
        }
    }

    pub fn mul(&self, other: &CBall) -> CBall {
        CBall {
            re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        }
    }

    pub fn scale(&self, q: &Rat) -> CBall {
        CBall {
            re: self.re.scale(q),
            im: self.im.scale(q),
        }
    }

    pub fn compress(&self, bits: u32) -> CBall {
        CBall {
            re: self.re.compress(bits),
            im: self.im.compress(bits),
        }
    }

    pub fn norm2(&self) -> Ball {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn is_exactly_real(&self) -> bool {
        self.im.c.is_zero() && self.im.r.is_zero()
    }
}

/// Isolating disc for one root: exact dyadic center, certified radius,
/// exact realness flag.
#[derive(Debug, Clone)]
pub struct RootBox {
    pub re: Rat,
    pub im: Rat,
    pub rad: Rat,
}

impl RootBox {
    pub fn to_cball(&self) -> CBall {
        CBall {
            re: Ball::new(self.re.clone(), self.rad.clone()),
            im: Ball::new(self.im.clone(), if self.im.is_zero() { Rat::zero() } else { self.rad.clone() }),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

/// Isolates all complex roots of a square-free integer polynomial into
/// pairwise disjoint discs of radius at most `target`. Returns `None` when
/// the floating-point bootstrap fails to separate the roots (callers retry
/// with a smaller target or give up).
pub fn isolate_roots(f: &IntPoly, target: &Rat) -> Option<Vec<RootBox>> {
    let n = f.degree();
    if n == 0 {
        return Some(vec![]);
    }
    let approx = durand_kerner(f)?;
    // snap near-real approximations onto the axis
    let snapped: Vec<(f64, f64)> = approx
        .iter()
        .map(|&(re, im)| {
            if im.abs() < 1e-9 * (1.0 + re.abs()) {
                (re, 0.0)
            } else {
                (re, im)
            }
        })
        .collect();
    let mut boxes: Vec<RootBox> = Vec::new();
    for &(re, im) in &snapped {
        let b = polish_root(f, re, im, target)?;
        boxes.push(b);
    }
    // certification: pairwise disjoint discs, each containing >= 1 root
    for i in 0..boxes.len() {
        for j in 0..i {
            let dx = &boxes[i].re - &boxes[j].re;
            let dy = &boxes[i].im - &boxes[j].im;
            let d2 = &dx * &dx + &dy * &dy;
            let rr = &boxes[i].rad + &boxes[j].rad;
            if d2 <= &rr * &rr {
                return None;
            }
        }
    }
    Some(boxes)
}

fn durand_kerner(f: &IntPoly) -> Option<Vec<(f64, f64)>> {
    let n = f.degree();
    let lead = f.leading().to_f64()?;
    let coeffs: Vec<f64> = f
        .coeffs
        .iter()
        .map(|c| c.to_f64().map(|v| v / lead))
        .collect::<Option<Vec<_>>>()?;
    // starting points on a spiral
    let mut zs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let ang = 0.7 + 2.0 * std::f64::consts::PI * (k as f64) / (n as f64);
            let rad = 0.5 + 1.3 * ((k % 3) as f64) / 3.0 + 1.0;
            (rad * ang.cos(), rad * ang.sin())
        })
        .collect();
    let eval = |z: (f64, f64)| -> (f64, f64) {
        let mut acc = (0.0f64, 0.0f64);
        for c in coeffs.iter().rev() {
            let re = acc.0 * z.0 - acc.1 * z.1 + c;
            let im = acc.0 * z.1 + acc.1 * z.0;
            acc = (re, im);
        }
        acc
    };
    for _ in 0..600 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let fi = eval(zs[i]);
            let mut den = (1.0f64, 0.0f64);
            for j in 0..n {
                if i == j {
                    continue;
                }
                let dz = (zs[i].0 - zs[j].0, zs[i].1 - zs[j].1);
                den = (den.0 * dz.0 - den.1 * dz.1, den.0 * dz.1 + den.1 * dz.0);
            }
            let nd = den.0 * den.0 + den.1 * den.1;
            if nd < 1e-300 {
                return None;
            }
            let q = (
                (fi.0 * den.0 + fi.1 * den.1) / nd,
                (fi.1 * den.0 - fi.0 * den.1) / nd,
            );
            zs[i] = (zs[i].0 - q.0, zs[i].1 - q.1);
            max_step = max_step.max(q.0.abs() + q.1.abs());
        }
        if max_step < 1e-13 {
            break;
        }
    }
    Some(zs)
}

/// Exact Newton polishing with dyadic compression until the containment
/// radius `n |f(z)/f'(z)|` drops below the target.
fn polish_root(f: &IntPoly, re0: f64, im0: f64, target: &Rat) -> Option<RootBox> {
    let n = Int::from(f.degree() as u64);
    let fr = f.to_rat();
    let dfr = f.derivative().to_rat();
    let real_case = im0 == 0.0;
    let mut z = CBall::exact(f64_to_rat(re0)?, f64_to_rat(im0)?);
    let mut bits: u32 = 64;
    for _round in 0..64 {
        // exact evaluation at the (exact) center
        let zc = CBall::exact(z.re.c.clone(), z.im.c.clone());
        let fv = eval_poly(&fr.coeffs, &zc);
        let dv = eval_poly(&dfr.coeffs, &zc);
        let fn2 = (&fv.re.c * &fv.re.c + &fv.im.c * &fv.im.c).reduced();
        let dn2 = (&dv.re.c * &dv.re.c + &dv.im.c * &dv.im.c).reduced();
        if dn2.is_zero() {
            return None;
        }
        let fu = sqrt_upper(&fn2, 80);
        let dl = sqrt_lower(&dn2, 80);
        if dl.is_zero() {
            return None;
        }
        let rad = Rat::from_integer(n.clone()) * &fu / &dl;
        if &rad <= target {
            return Some(RootBox {
                re: z.re.c.clone(),
                im: z.im.c.clone(),
                rad,
            });
        }
        // Newton step z - f/f' in exact arithmetic, then compress
        let step_den = dn2;
        let conj = CBall::exact(dv.re.c.clone(), -dv.im.c.clone());
        let num = CBall::exact(fv.re.c.clone(), fv.im.c.clone()).mul(&conj);
        let sre = &num.re.c / &step_den;
        let sim = &num.im.c / &step_den;
        let mut nre = &z.re.c - &sre;
        let mut nim = if real_case {
            Rat::zero()
        } else {
            &z.im.c - &sim
        };
        let s = Int::one() << bits;
        nre = round_dyadic(&nre, &s).0;
        if !real_case {
            nim = round_dyadic(&nim, &s).0;
        }
        z = CBall::exact(nre, nim);
        bits = (bits * 2).min(1 << 14);
    }
    None
}

fn eval_poly(coeffs: &[Rat], z: &CBall) -> CBall {
    let mut acc = CBall::exact(Rat::zero(), Rat::zero());
    for c in coeffs.iter().rev() {
        acc = acc.mul(z);
        acc.re = acc.re.add(&Ball::exact(c.clone()));
    }
    acc
}

fn f64_to_rat(v: f64) -> Option<Rat> {
    if !v.is_finite() {
        return None;
    }
    Rat::from_float(v)
}
