use numring::certified::{self, Ball, CBall};
use numring::exact::{int, Int, Rat};
use numring::order::{self, samples, KElement};
use numring::mat::RatMat;
use num_traits::{One, Signed, Zero};
use std::sync::Arc;

fn main() {
    let order = Arc::new(samples::z_sqrt(2));
    let alphas = [KElement::from_int_coords(vec![int(1), int(1)])];
    let t = int(1_000_000);
    let (theta, minpoly) = order::primitive_element(&order, 8).unwrap();
    eprintln!("theta {:?} minpoly {}", theta.num, minpoly);
    let n = order.rank();
    let mut powers: Vec<Vec<Rat>> = Vec::with_capacity(n);
    let mut cur = order.one_element();
    powers.push(cur.to_rat_coords());
    for _ in 1..n {
        cur = order.mul(&cur, &theta);
        powers.push(cur.to_rat_coords());
    }
    let pb = RatMat::from_fn(n, n, |i, j| powers[j][i].clone());
    let pb_inv = pb.inverse().unwrap();
    let coords: Vec<Vec<Rat>> = alphas.iter().map(|a| pb_inv.mul_vec(&a.to_rat_coords())).collect();
    eprintln!("coords {:?}", coords.iter().map(|c| c.iter().map(|q| q.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>());
    let half_cell = Rat::new(Int::one(), Int::from(2) * &t);
    let eps = &half_cell / Rat::from_integer(Int::from(4));
    let mut rad = Rat::new(Int::one(), Int::one() << 40);
    if rad > eps { rad = eps.clone(); }
    for attempt in 0..6 {
        eprintln!("attempt {attempt} rad ~ 2^{}", (rad.denom().bits() as i64) - (rad.numer().bits() as i64));
        let Some(roots) = certified::isolate_roots(&minpoly, &rad) else {
            eprintln!("  isolate failed");
            rad /= Rat::from_integer(Int::from(4));
            continue;
        };
        eprintln!("  got {} roots", roots.len());
        for (ri, root) in roots.iter().enumerate() {
            let z = root.to_cball();
            for c in &coords {
                let mut acc = CBall::exact(Rat::zero(), Rat::zero());
                for ck in c.iter().rev() {
                    acc = acc.mul(&z).compress(192);
                    acc.re = acc.re.add(&Ball::exact(ck.clone()));
                }
                eprintln!("  root {ri}: acc.re.c ~ {}", acc.re.c.to_f64_approx());
                let norm2 = acc.norm2();
                eprintln!("  norm2 lo pos: {}", norm2.lo().is_positive());
                let ln_n2 = certified::ln_ball(&norm2, &eps).unwrap();
                eprintln!("  ln ok, r small: {}", ln_n2.r <= half_cell);
                let im_log = if root.is_real() && acc.im.c.is_zero() && acc.im.r.is_zero() {
                    eprintln!("  real case, re positive: {}", acc.re.lo().is_positive());
                    if acc.re.lo().is_positive() { Ball::zero() } else {
                        eprintln!("  calling pi...");
                        let p = certified::pi(&eps);
                        eprintln!("  pi done");
                        p
                    }
                } else {
                    eprintln!("  complex case atan2...");
                    certified::atan2_ball(&acc.im, &acc.re, &eps).unwrap()
                };
                eprintln!("  im_log r ok: {}", im_log.r <= half_cell);
            }
        }
        eprintln!("  computing two_pi...");
        let two_pi_ball = certified::pi(&eps).scale(&Rat::from_integer(Int::from(2)));
        eprintln!("  all done, two_pi.r ok: {}", two_pi_ball.r <= half_cell);
        return;
    }
}

trait F64Approx { fn to_f64_approx(&self) -> f64; }
impl F64Approx for Rat {
    fn to_f64_approx(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.to_f64().unwrap_or(f64::NAN)
    }
}
