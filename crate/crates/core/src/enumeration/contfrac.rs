//! Certified continued fraction expansions of real algebraic numbers given
//! by an isolating interval with dyadic endpoints.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Result, ThueError};

/// A rational number `num/den` with `den > 0`.
pub type Ratio = (BigInt, BigInt);

/// Partial quotients shared by the expansions of `lo` and `hi`. Every real
/// number strictly between them has these as its leading partial quotients.
/// If `lo == hi` the full (finite) expansion is returned.
pub fn common_prefix(lo: &Ratio, hi: &Ratio) -> Vec<BigInt> {
    let (mut a, mut b) = lo.clone();
    let (mut c, mut d) = hi.clone();
    let mut out = Vec::new();
    loop {
        let qa = a.div_floor(&b);
        let qc = c.div_floor(&d);
        if qa != qc {
            return out;
        }
        let ra = &a - &qa * &b;
        let rc = &c - &qc * &d;
        out.push(qa);
        match (ra.is_zero(), rc.is_zero()) {
            (true, true) => return out,
            // one endpoint ends here, the other continues: the next quotient is unknown
            (true, false) | (false, true) => return out,
            _ => {}
        }
        (a, b) = (b, ra);
        (c, d) = (d, rc);
    }
}

/// Convergents p_k/q_k of a partial quotient list.
pub fn convergents(quotients: &[BigInt]) -> Vec<Ratio> {
    let (mut p0, mut p1) = (BigInt::zero(), BigInt::one());
    let (mut q0, mut q1) = (BigInt::one(), BigInt::zero());
    let mut out = Vec::with_capacity(quotients.len());
    for a in quotients {
        let p = a * &p1 + &p0;
        let q = a * &q1 + &q0;
        (p0, p1) = (p1, p.clone());
        (q0, q1) = (q1, q.clone());
        out.push((p, q));
    }
    out
}

/// Sign of `f(n/2^s)` for `f` given leading coefficient first.
fn sign_at(poly: &[BigInt], n: &BigInt, s: u32) -> i32 {
    // 2^{s·deg} f(n/2^s) = Σ c_k n^{deg-k} 2^{s·k}
    let mut acc = BigInt::zero();
    for (k, c) in poly.iter().enumerate() {
        acc = acc * n + (c << (s as usize * k));
    }
    match acc.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

/// Real root of `poly` isolated in `[lo, hi]·2^-shift`, refined by bisection.
#[derive(Debug, Clone)]
pub struct RealRoot {
    poly: Vec<BigInt>,
    lo: BigInt,
    hi: BigInt,
    shift: u32,
    sign_lo: i32,
    exact: Option<Ratio>,
}

impl RealRoot {
    pub fn new(poly: Vec<BigInt>, lo: BigInt, hi: BigInt, shift: u32) -> Result<Self> {
        let sign_lo = sign_at(&poly, &lo, shift);
        let sign_hi = sign_at(&poly, &hi, shift);
        let mut root = RealRoot { poly, lo, hi, shift, sign_lo, exact: None };
        if sign_lo == 0 {
            root.exact = Some(dyadic_ratio(&root.lo, shift));
        } else if sign_hi == 0 {
            root.exact = Some(dyadic_ratio(&root.hi, shift));
        } else if sign_lo == sign_hi {
            return Err(ThueError::Internal("isolating interval has no sign change".into()));
        }
        Ok(root)
    }

    fn bisect(&mut self, steps: u32) {
        for _ in 0..steps {
            if self.exact.is_some() {
                return;
            }
            let mid = &self.lo + &self.hi;
            self.lo <<= 1;
            self.hi <<= 1;
            self.shift += 1;
            match sign_at(&self.poly, &mid, self.shift) {
                0 => self.exact = Some(dyadic_ratio(&mid, self.shift)),
                s if s == self.sign_lo => self.lo = mid,
                _ => self.hi = mid,
            }
        }
    }

    /// All convergents of the root with denominator at most `q_max`.
    pub fn convergents_up_to(&mut self, q_max: &BigInt) -> Vec<Ratio> {
        loop {
            let quotients = match &self.exact {
                Some(r) => common_prefix(r, r),
                None => common_prefix(&dyadic_ratio(&self.lo, self.shift), &dyadic_ratio(&self.hi, self.shift)),
            };
            let conv = convergents(&quotients);
            let done = self.exact.is_some() || conv.last().is_some_and(|(_, q)| q > q_max);
            if done {
                return conv.into_iter().filter(|(_, q)| q <= q_max).collect();
            }
            self.bisect(32);
            self.detect_rational();
        }
    }

    /// A rational root p/q has q | lead. Once the interval is narrower than
    /// 1/(2·lead²), such a root is a convergent of the midpoint.
    fn detect_rational(&mut self) {
        if self.exact.is_some() {
            return;
        }
        let lead = self.poly[0].abs();
        let width = (&self.hi - &self.lo) * 2 * &lead * &lead;
        if width >= (BigInt::one() << self.shift) {
            return;
        }
        let mid = dyadic_ratio(&(&self.lo + &self.hi), self.shift + 1);
        for (p, q) in convergents(&common_prefix(&mid, &mid)) {
            if q > lead {
                break;
            }
            if eval_rational(&self.poly, &p, &q).is_zero() {
                self.exact = Some((p, q));
                return;
            }
        }
    }
}

/// q^n · f(p/q) for `f` given leading coefficient first.
fn eval_rational(poly: &[BigInt], p: &BigInt, q: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    let mut qpow = BigInt::one();
    for c in poly {
        acc = acc * p + c * &qpow;
        qpow *= q;
    }
    acc
}

fn dyadic_ratio(n: &BigInt, shift: u32) -> Ratio {
    let den = BigInt::one() << shift;
    let g = n.gcd(&den);
    if g.is_zero() {
        return (BigInt::zero(), BigInt::one());
    }
    (n / &g, (den / g).abs())
}

/// Smallest integer ≥ x·2^shift for finite x ≥ 0.
pub fn f64_to_dyadic_ceil(x: f64, shift: u32) -> BigInt {
    if x <= 0.0 {
        return BigInt::zero();
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
    let total = e + shift as i64;
    let m = BigInt::from(mant);
    if total >= 0 {
        m << total as usize
    } else {
        let s = (-total) as usize;
        let q = &m >> s;
        if (&q << s) == m {
            q
        } else {
            q + 1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Ratio {
        (BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn prefix_of_close_rationals() {
        // 1.259 < 2^{1/3} < 1.26
        let q = common_prefix(&r(1259, 1000), &r(126, 100));
        assert_eq!(q, vec![BigInt::from(1), BigInt::from(3), BigInt::from(1)]);
        let q = common_prefix(&r(-3, 2), &r(-3, 2));
        assert_eq!(q, vec![BigInt::from(-2), BigInt::from(2)]);
    }

    #[test]
    fn cube_root_of_two() {
        // t³ - 2 on [1, 2]
        let poly = vec![BigInt::from(1), BigInt::zero(), BigInt::zero(), BigInt::from(-2)];
        let mut root = RealRoot::new(poly, BigInt::from(1), BigInt::from(2), 0).unwrap();
        let conv = root.convergents_up_to(&BigInt::from(1000));
        let want = [(1, 1), (4, 3), (5, 4), (29, 23), (34, 27), (63, 50), (286, 227), (349, 277), (635, 504)];
        let want: Vec<Ratio> = want.iter().map(|&(p, q)| r(p, q)).collect();
        assert_eq!(conv, want);
    }

    #[test]
    fn rational_root_terminates() {
        // t + 1 on [-2, 1]
        let poly = vec![BigInt::from(1), BigInt::from(1)];
        let mut root = RealRoot::new(poly, BigInt::from(-2), BigInt::from(1), 0).unwrap();
        assert_eq!(root.convergents_up_to(&BigInt::from(10)), vec![r(-1, 1)]);
    }

    #[test]
    fn dyadic_ceiling() {
        assert_eq!(f64_to_dyadic_ceil(0.75, 2), BigInt::from(3));
        assert_eq!(f64_to_dyadic_ceil(0.75, 1), BigInt::from(2));
        assert_eq!(f64_to_dyadic_ceil(1e-300, 10), BigInt::from(1));
    }
}
