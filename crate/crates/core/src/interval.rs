//! Closed real intervals with outward rounding.
//!
//! Every arithmetic result is widened by one ulp on each side after the
//! round-to-nearest operation, so the true value of the exact operation on any
//! members of the operands is contained. Transcendental functions are widened
//! by [`LIBM_ULPS`] ulps to cover libm error.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

const LIBM_ULPS: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64, n: u32) -> f64 {
    (0..n).fold(x, |v, _| v.next_down())
}

fn up(x: f64, n: u32) -> f64 {
    (0..n).fold(x, |v, _| v.next_up())
}

/// Exact 2^e as f64 where representable; saturates to 0 / +inf otherwise.
fn pow2(e: i64) -> f64 {
    if e > 1023 {
        f64::INFINITY
    } else if e >= -1022 {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else if e >= -1074 {
        f64::from_bits(1u64 << (e + 1074))
    } else {
        0.0
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(!(lo > hi), "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Tight enclosure of an f64 computed by one correctly rounded operation.
    pub fn around(x: f64) -> Self {
        Interval { lo: x.next_down(), hi: x.next_up() }
    }

    pub fn from_i64(n: i64) -> Self {
        let f = n as f64;
        if f as i64 == n && f.abs() < 9.0e15 {
            Self::point(f)
        } else {
            Self::around(f)
        }
    }

    /// Enclosure of the dyadic number `n · 2^exp`.
    pub fn from_dyadic(n: &BigInt, exp: i64) -> Self {
        if n.is_zero() {
            return Self::point(0.0);
        }
        let mag = n.abs();
        let bits = mag.bits() as i64;
        let (lo, hi, shift) = if bits <= 53 {
            let v = mag.to_f64().unwrap_or(f64::INFINITY);
            (v, v, 0)
        } else {
            let shift = bits - 62;
            let top = (&mag >> shift as usize).to_u64().unwrap_or(u64::MAX);
            ((top as f64).next_down(), ((top + 1) as f64).next_up(), shift)
        };
        let scale = exp + shift;
        let (lo, hi) = if (-1000..=1000).contains(&scale) {
            let s = pow2(scale);
            (lo * s, hi * s)
        } else {
            // split the scaling so intermediate powers stay representable
            let h = scale / 2;
            let (s1, s2) = (pow2(h), pow2(scale - h));
            (lo * s1 * s2, hi * s1 * s2)
        };
        // subnormal results may have lost bits
        let lo = if lo < f64::MIN_POSITIVE { 0.0 } else { lo };
        let hi = if hi < f64::MIN_POSITIVE { f64::MIN_POSITIVE } else { hi };
        if n.is_negative() {
            Interval::new(-hi, -lo)
        } else {
            Interval::new(lo, hi)
        }
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Self::from_dyadic(n, 0)
    }

    pub fn mid(&self) -> f64 {
        if self.lo.is_finite() && self.hi.is_finite() {
            0.5 * self.lo + 0.5 * self.hi
        } else if self.hi.is_finite() {
            self.hi
        } else {
            self.lo
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Half-width relative to the magnitude of the midpoint.
    pub fn rel_width(&self) -> f64 {
        let m = self.mid().abs();
        if m == 0.0 {
            self.width()
        } else {
            self.width() / (2.0 * m)
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Certified `self <= other` for every pair of members.
    pub fn certainly_le(&self, other: &Interval) -> bool {
        self.hi <= other.lo
    }

    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn abs(self) -> Self {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            Interval::new(0.0, self.hi.max(-self.lo))
        }
    }

    /// Clamp the lower end at zero (for quantities known to be nonnegative).
    pub fn nonneg(self) -> Self {
        Interval::new(self.lo.max(0.0), self.hi.max(0.0))
    }

    pub fn sqrt(self) -> Self {
        let s = self.nonneg();
        let lo = if s.lo == 0.0 { 0.0 } else { s.lo.sqrt().next_down().max(0.0) };
        Interval::new(lo, s.hi.sqrt().next_up())
    }

    pub fn square(self) -> Self {
        let a = self.abs();
        Interval::new((a.lo * a.lo).next_down().max(0.0), (a.hi * a.hi).next_up())
    }

    /// Natural log of a nonnegative interval; a zero lower end maps to -inf.
    pub fn ln(self) -> Self {
        let s = self.nonneg();
        let lo = if s.lo == 0.0 { f64::NEG_INFINITY } else { down(s.lo.ln(), LIBM_ULPS) };
        let hi = if s.hi == 0.0 { f64::NEG_INFINITY } else { up(s.hi.ln(), LIBM_ULPS) };
        Interval::new(lo, hi)
    }

    pub fn exp(self) -> Self {
        Interval::new(down(self.lo.exp(), LIBM_ULPS).max(0.0), up(self.hi.exp(), LIBM_ULPS))
    }

    /// `self^e` for a nonnegative base and real exponent.
    pub fn powf(self, e: f64) -> Self {
        let s = self.nonneg();
        let (a, b) = (s.lo.powf(e), s.hi.powf(e));
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Interval::new(down(lo, LIBM_ULPS).max(0.0), up(hi, LIBM_ULPS))
    }

    pub fn powi(self, n: u32) -> Self {
        (0..n).fold(Interval::point(1.0), |acc, _| acc * self)
    }

    pub fn max(self, other: Interval) -> Self {
        Interval::new(self.lo.max(other.lo), self.hi.max(other.hi))
    }

    pub fn min(self, other: Interval) -> Self {
        Interval::new(self.lo.min(other.lo), self.hi.min(other.hi))
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval::new((self.lo + o.lo).next_down(), (self.hi + o.hi).next_up())
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        Interval::new((self.lo - o.hi).next_down(), (self.hi - o.lo).next_up())
    }
}

fn mul_or_zero(a: f64, b: f64) -> f64 {
    // 0 * inf counts as 0 for enclosure purposes
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let c = [
            mul_or_zero(self.lo, o.lo),
            mul_or_zero(self.lo, o.hi),
            mul_or_zero(self.hi, o.lo),
            mul_or_zero(self.hi, o.hi),
        ];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(lo.next_down(), hi.next_up())
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, o: Interval) -> Interval {
        if o.lo <= 0.0 && o.hi >= 0.0 {
            return Interval::new(f64::NEG_INFINITY, f64::INFINITY);
        }
        let c = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(lo.next_down(), hi.next_up())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}
