//! Integer helpers: valuations, modular arithmetic, primality and factoring.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Result, ThueError};

/// Trial division bound used before switching to Pollard rho.
pub const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// Default number of Pollard rho iterations allowed per factor.
pub const DEFAULT_FACTOR_BUDGET: u64 = 5_000_000;

/// p-adic valuation of a nonzero integer. Returns `None` for zero.
pub fn valuation(n: &BigInt, p: &BigInt) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let mut v = 0;
    let mut q = n.abs();
    loop {
        let (d, r) = q.div_rem(p);
        if !r.is_zero() {
            return Some(v);
        }
        q = d;
        v += 1;
    }
}

/// Valuation with zero mapped to `cap`.
pub fn valuation_capped(n: &BigInt, p: &BigInt, cap: u32) -> u32 {
    valuation(n, p).map_or(cap, |v| v.min(cap))
}

pub fn modpow(base: &BigInt, exp: &BigInt, modulus: &BigInt) -> BigInt {
    base.mod_floor(modulus).modpow(exp, modulus)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn modinv(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Extended gcd on i128: returns (g, s, t) with s*a + t*b = g >= 0.
pub fn ext_gcd_i128(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

const SMALL_PRIMES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Miller–Rabin. Deterministic below 3.3·10²⁴ (first 13 prime bases); above
/// that 24 further fixed bases are tried, so the answer is probabilistic.
pub fn is_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for &p in SMALL_PRIMES.iter() {
        let p = BigInt::from(p);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let witness = |a: &BigInt| -> bool {
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            return true;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                return true;
            }
        }
        false
    };
    let mut bases: Vec<BigInt> = SMALL_PRIMES.iter().map(|&p| BigInt::from(p)).collect();
    if n.bits() > 81 {
        let mut a = BigInt::from(0x9E37_79B9_7F4A_7C15u64);
        for _ in 0..24 {
            a = (&a * BigInt::from(6_364_136_223_846_793_005u64) + BigInt::from(1_442_695_040_888_963_407u64))
                % (n - BigInt::from(3));
            bases.push(&a + BigInt::from(2));
        }
    }
    bases.iter().all(witness)
}

/// A prime factorization, sorted by prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(BigInt, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Number of distinct prime factors, ω(n).
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn exponent_of(&self, p: &BigInt) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |(_, e)| *e)
    }
}

/// Factor a positive integer by trial division up to [`TRIAL_DIVISION_BOUND`]
/// followed by Brent's variant of Pollard rho with `budget` iterations per
/// split attempt.
pub fn factorize(n: &BigInt, budget: u64) -> Result<Factorization> {
    if n.sign() != Sign::Plus {
        return Err(ThueError::RejectedInput(format!("cannot factor {n}: not positive")));
    }
    let mut rest = n.clone();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let push = |out: &mut Vec<(BigInt, u32)>, p: BigInt, e: u32| {
        if let Some(slot) = out.iter_mut().find(|(q, _)| *q == p) {
            slot.1 += e;
        } else {
            out.push((p, e));
        }
    };
    let mut p: u64 = 2;
    while p <= TRIAL_DIVISION_BOUND {
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            push(&mut out, bp, e);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![];
    if rest > BigInt::one() {
        stack.push(rest);
    }
    while let Some(c) = stack.pop() {
        if is_prime(&c) {
            push(&mut out, c, 1);
            continue;
        }
        if let Some(r) = perfect_square_root(&c) {
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        let d = pollard_brent(&c, budget)
            .ok_or_else(|| ThueError::FactorizationFailure(format!("Pollard rho budget exhausted on {c}")))?;
        stack.push(&c / &d);
        stack.push(d);
    }
    out.sort();
    Ok(Factorization { factors: out })
}

fn perfect_square_root(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn pollard_brent(n: &BigInt, budget: u64) -> Option<BigInt> {
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    let one = BigInt::one();
    for c in 1u64..20 {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut y = BigInt::from(2);
        let mut r: u64 = 1;
        let mut q = one.clone();
        let mut g = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut spent = 0u64;
        let m = 128u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    q = (&q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
            spent += r;
            if spent > budget {
                return None;
            }
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}

/// Sum of divisors σ(n).
pub fn sigma(n: u64) -> u64 {
    let mut total = 0u64;
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            total += d;
            if d * d != n {
                total += n / d;
            }
        }
        d += 1;
    }
    total
}

/// Positive divisors of n in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Convert to i64, reporting overflow as a rejected input.
pub fn to_i64(n: &BigInt, what: &str) -> Result<i64> {
    n.to_i64()
        .ok_or_else(|| ThueError::RejectedInput(format!("{what} = {n} does not fit in 64 bits")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&b(-27), &b(3)), Some(3));
        assert_eq!(valuation(&b(567), &b(3)), Some(4));
        assert_eq!(valuation(&b(7), &b(3)), Some(0));
        assert_eq!(valuation(&b(0), &b(3)), None);
    }

    #[test]
    fn primality_matches_sieve() {
        let limit = 5000usize;
        let mut sieve = vec![true; limit];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..limit {
            if sieve[i] {
                let mut j = i * i;
                while j < limit {
                    sieve[j] = false;
                    j += i;
                }
            }
        }
        for (n, &p) in sieve.iter().enumerate() {
            assert_eq!(is_prime(&BigInt::from(n)), p, "n = {n}");
        }
        // Carmichael numbers
        for c in [561, 1105, 1729, 2465, 2821, 6601, 8911] {
            assert!(!is_prime(&b(c)));
        }
        assert!(is_prime(&BigInt::from(1_000_000_007u64)));
        assert!(is_prime(&"170141183460469231731687303715884105727".parse().unwrap()));
    }

    #[test]
    fn factorization_round_trip() {
        for n in [1i64, 2, 12, 63, 567, 1_000_000, 999_983 * 2] {
            let f = factorize(&b(n), DEFAULT_FACTOR_BUDGET).unwrap();
            let prod = f
                .factors
                .iter()
                .fold(BigInt::one(), |acc, (p, e)| acc * p.pow(*e));
            assert_eq!(prod, b(n));
            assert!(f.factors.iter().all(|(p, _)| is_prime(p)));
        }
        // two primes above the trial-division bound
        let p: BigInt = BigInt::from(1_000_003u64);
        let q: BigInt = BigInt::from(2_000_003u64);
        let f = factorize(&(&p * &q * &q), DEFAULT_FACTOR_BUDGET).unwrap();
        assert_eq!(f.factors, vec![(p, 1), (q, 2)]);
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(1), 1);
        assert_eq!(sigma(6), 12);
        assert_eq!(sigma(12), 28);
        assert_eq!(sigma(101), 102);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn inverses() {
        assert_eq!(modinv(&b(3), &b(7)), Some(b(5)));
        assert_eq!(modinv(&b(-3), &b(7)), Some(b(2)));
        assert_eq!(modinv(&b(6), &b(9)), None);
        let (g, s, t) = ext_gcd_i128(240, 46);
        assert_eq!(g, 2);
        assert_eq!(s * 240 + t * 46, 2);
    }
}
