//! Linear factors of F over the p-adic integers.
//!
//! Projective roots of F in P¹(Q_p) are found in two affine charts: roots
//! t ∈ Z_p of F(t, 1) give factors X - tY, roots s ∈ pZ_p of F(1, s) give
//! factors -sX + Y. Roots in Z_p are found by descending through residue
//! classes: a simple root mod p of the current node polynomial is lifted by
//! Newton iteration, a multiple root r is refined by passing to
//! h(r + pu)/p^v.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{factorize, is_prime, modinv, valuation, valuation_capped, Factorization};
use crate::error::{Result, ThueError};
use crate::forms::{complex_factorization, BinaryForm, DEFAULT_PRECISION_BITS};

/// Default cap on p^k for [`projective_root_oracle`].
pub const ORACLE_BUDGET: u64 = 1_000_000;

/// Primes below this bound have their roots mod p found by exhaustive scan.
const SCAN_PRIME_LIMIT: u64 = 4096;

/// Extra descent levels allowed beyond 2·v_p(D) before giving up.
const DEPTH_SLACK: u32 = 64;

/// A linear form `aX + bY` over Z/p^k with p not dividing both coefficients,
/// normalized so the first unit coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalFactor {
    pub p: BigInt,
    pub k: u32,
    pub a: BigInt,
    pub b: BigInt,
}

impl LocalFactor {
    /// Normalize `(a, b)` modulo p^k. Fails if p divides both.
    pub fn new(p: &BigInt, k: u32, a: &BigInt, b: &BigInt) -> Result<Self> {
        let pk = p.pow(k);
        let (a, b) = (a.mod_floor(&pk), b.mod_floor(&pk));
        let (a, b) = if !(&a % p).is_zero() {
            let inv = modinv(&a, &pk).expect("unit");
            (BigInt::one(), (b * inv).mod_floor(&pk))
        } else if !(&b % p).is_zero() {
            let inv = modinv(&b, &pk).expect("unit");
            ((a * inv).mod_floor(&pk), BigInt::one())
        } else {
            return Err(ThueError::RejectedInput(format!("({a}, {b}) is not a unit vector mod {p}")));
        };
        Ok(LocalFactor { p: p.clone(), k, a: a % &pk, b: b % &pk })
    }

    pub fn modulus(&self) -> BigInt {
        self.p.pow(self.k)
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x + &self.b * y
    }

    /// v_p(L(x, y)) truncated at the known precision k.
    pub fn valuation_at(&self, x: &BigInt, y: &BigInt) -> u32 {
        valuation_capped(&self.eval(x, y).mod_floor(&self.modulus()), &self.p, self.k)
    }

    /// The same factor known only modulo p^j, j ≤ k.
    pub fn truncate(&self, j: u32) -> LocalFactor {
        let pj = self.p.pow(j);
        LocalFactor { p: self.p.clone(), k: j, a: self.a.mod_floor(&pj), b: self.b.mod_floor(&pj) }
    }
}

impl fmt::Display for LocalFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}: {} {}", self.p, self.k, self.a, self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalFactorSet {
    pub p: BigInt,
    pub k: u32,
    pub factors: Vec<LocalFactor>,
}

impl LocalFactorSet {
    /// c_F(p).
    pub fn count(&self) -> usize {
        self.factors.len()
    }
}

/// Least precision accepted by [`local_factors`].
pub fn separation_precision(form: &BinaryForm, p: &BigInt) -> u32 {
    2 * valuation(&form.discriminant(), p).unwrap_or(0) + 1
}

/// All linear factors of F defined over Q_p, known modulo p^k.
pub fn local_factors(form: &BinaryForm, p: &BigInt, k: u32) -> Result<LocalFactorSet> {
    form.require_primitive()?;
    let disc = form.require_separable()?;
    if !is_prime(p) {
        return Err(ThueError::RejectedInput(format!("{p} is not prime")));
    }
    let vd = valuation(&disc, p).unwrap_or(0);
    if k < 2 * vd + 1 {
        return Err(ThueError::PrecisionTooLow(format!(
            "k = {k} below 2·v_{p}(D) + 1 = {}",
            2 * vd + 1
        )));
    }
    let depth_cap = 2 * vd + DEPTH_SLACK;
    let pk = p.pow(k);
    let mut rng = ChaCha8Rng::seed_from_u64(0x7468_7565);

    // chart Y = 1: F(t, 1) = Σ a_i t^{d-i}, stored low degree first
    let chart1: Vec<BigInt> = form.coeffs().iter().rev().cloned().collect();
    let mut roots1 = Vec::new();
    solve(&chart1, &BigInt::zero(), 0, k, p, depth_cap, &mut rng, &mut roots1)?;

    // chart X = 1 restricted to s ∈ pZ_p: F(1, pu) = Σ a_i p^i u^i
    let chart2: Vec<BigInt> = form
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, a)| a * p.pow(i as u32))
        .collect();
    let mut roots2 = Vec::new();
    solve(&chart2, &BigInt::zero(), 0, k.saturating_sub(1).max(1), p, depth_cap, &mut rng, &mut roots2)?;

    let mut factors = Vec::new();
    for t in roots1 {
        factors.push(LocalFactor::new(p, k, &BigInt::one(), &(-t))?);
    }
    for u in roots2 {
        let s = (p * u).mod_floor(&pk);
        factors.push(LocalFactor::new(p, k, &(-s), &BigInt::one())?);
    }
    factors.sort_by(|x, y| (&x.a, &x.b).cmp(&(&y.a, &y.b)));
    let before = factors.len();
    factors.dedup();
    if factors.len() != before || factors.len() > form.degree() {
        return Err(ThueError::Internal(format!("local factors of {form} at {p}^{k} not separated")));
    }
    Ok(LocalFactorSet { p: p.clone(), k, factors })
}

/// c_F(p) at the separation precision.
pub fn c_f_p(form: &BinaryForm, p: &BigInt) -> Result<usize> {
    let k = separation_precision(form, p);
    Ok(local_factors(form, p, k)?.count())
}

/// c_F(m) = ∏_{p | m} c_F(p).
pub fn c_f_m(form: &BinaryForm, m: &BigInt, budget: u64) -> Result<u64> {
    let fac = factor_positive(m, budget)?;
    let mut total = 1u64;
    for p in fac.primes() {
        total *= c_f_p(form, p)? as u64;
    }
    Ok(total)
}

/// Number of real linear factors, c_F(∞).
pub fn c_f_infinity(form: &BinaryForm) -> Result<usize> {
    Ok(complex_factorization(form, DEFAULT_PRECISION_BITS)?.real_count())
}

fn factor_positive(m: &BigInt, budget: u64) -> Result<Factorization> {
    if !m.is_positive() {
        return Err(ThueError::RejectedInput(format!("m = {m} must be positive")));
    }
    factorize(m, budget)
}

/// v_p(m) > v_p(D(F)) for every prime p | m.
pub fn theorem1_hypothesis(form: &BinaryForm, m: &BigInt, budget: u64) -> Result<bool> {
    let disc = form.require_separable()?;
    let fac = factor_positive(m, budget)?;
    Ok(fac
        .factors
        .iter()
        .all(|(p, e)| *e > valuation(&disc, p).unwrap_or(0)))
}

/// Largest divisor m' of m with v_p(m') > v_p(D(F)) for all p | m'.
pub fn m_of_f(form: &BinaryForm, m: &BigInt, budget: u64) -> Result<BigInt> {
    form.require_primitive()?;
    let disc = form.require_separable()?;
    let fac = factor_positive(m, budget)?;
    Ok(fac
        .factors
        .iter()
        .filter(|(p, e)| *e > valuation(&disc, p).unwrap_or(0))
        .fold(BigInt::one(), |acc, (p, e)| acc * p.pow(*e)))
}

/// A local factor L with v_p(L(x, y)) ≥ v_p(F(x, y)), exact when p ∤ D(F).
pub fn lemma2_witness(form: &BinaryForm, p: &BigInt, point: (&BigInt, &BigInt)) -> Result<LocalFactor> {
    let (x, y) = point;
    if !x.gcd(y).is_one() {
        return Err(ThueError::RejectedInput(format!("({x}, {y}) is not primitive")));
    }
    let disc = form.require_separable()?;
    let vd = valuation(&disc, p).unwrap_or(0);
    let value = form.evaluate(x, y);
    // F(x, y) = 0 only on a rational root line; any precision past v_D works
    let vf = valuation(&value, p).unwrap_or(4 * vd + 8);
    if vf <= vd {
        return Err(ThueError::HypothesisViolated(format!(
            "v_{p}(F({x}, {y})) = {vf} is not above v_{p}(D) = {vd}"
        )));
    }
    let k = vf + 2 * vd + 1;
    let set = local_factors(form, p, k)?;
    let best = set
        .factors
        .iter()
        .map(|l| (l.valuation_at(x, y), l))
        .max_by_key(|(v, _)| *v);
    let (best_v, best_l) = match best {
        Some((v, l)) => (v, l.clone()),
        None => (0, LocalFactor::new(p, k, &BigInt::one(), &BigInt::zero())?),
    };
    if vd == 0 {
        if best_v == vf {
            return Ok(best_l);
        }
        return Err(ThueError::Internal(format!(
            "unramified witness at {p} has valuation {best_v}, expected {vf}"
        )));
    }
    if best_v >= vf {
        return Ok(best_l);
    }
    let proven = vf as i64 - vd as i64;
    if (best_v as i64) < proven {
        return Err(ThueError::Internal(format!(
            "witness at {p} has valuation {best_v} below the guaranteed {proven}"
        )));
    }
    Err(ThueError::NoWitness { p: p.to_string(), required: vf, best: best_v, proven })
}

/// Exhaustive list of classes (x : y) in P¹(Z/p^k) with F(x, y) ≡ 0 mod p^k,
/// as representatives (t, 1) and (1, ps).
pub fn projective_root_oracle(form: &BinaryForm, p: u64, k: u32, budget: u64) -> Result<Vec<(u64, u64)>> {
    let pk = p
        .checked_pow(k)
        .filter(|&q| q <= budget)
        .ok_or_else(|| ThueError::BudgetExceeded(format!("{p}^{k} exceeds oracle budget {budget}")))?;
    let m = BigInt::from(pk);
    let coeffs: Vec<i128> = form
        .coeffs()
        .iter()
        .map(|a| a.mod_floor(&m).to_i128().expect("reduced"))
        .collect();
    let pk = pk as i128;
    let eval = |x: i128, y: i128| -> i128 {
        let mut ypow = 1i128;
        let mut res = coeffs[0];
        for a in &coeffs[1..] {
            ypow = ypow * y % pk;
            res = (res * x + a * ypow) % pk;
        }
        res
    };
    let mut out = Vec::new();
    for t in 0..pk {
        if eval(t, 1) == 0 {
            out.push((t as u64, 1));
        }
    }
    let p = p as i128;
    for s in 0..pk / p {
        if eval(1, p * s) == 0 {
            out.push((1, (p * s) as u64));
        }
    }
    Ok(out)
}

/// For |(x, y)|_p = 1 and integer linear forms L_1, L_2:
/// max_i |L_i(x)|_p / ‖L_i‖_p ≥ |det(L_1, L_2)|_p / (‖L_1‖_p ‖L_2‖_p),
/// checked with exact valuations. `None` valuations stand for zero.
pub fn lemma1_holds(p: &BigInt, l1: (&BigInt, &BigInt), l2: (&BigInt, &BigInt), point: (&BigInt, &BigInt)) -> bool {
    let sup_val = |a: &BigInt, b: &BigInt| -> Option<u32> {
        match (valuation(a, p), valuation(b, p)) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    };
    let (x, y) = point;
    let (Some(n1), Some(n2), Some(nx)) = (sup_val(l1.0, l1.1), sup_val(l2.0, l2.1), sup_val(x, y)) else {
        return true;
    };
    let det = l1.0 * l2.1 - l1.1 * l2.0;
    let Some(vdet) = valuation(&det, p) else {
        // dependent forms make the right side zero
        return true;
    };
    let v1 = valuation(&(l1.0 * x + l1.1 * y), p);
    let v2 = valuation(&(l2.0 * x + l2.1 * y), p);
    // smallest normalized valuation on the left, ∞ for zero values
    let left = [v1.map(|v| v as i64 - n1 as i64), v2.map(|v| v as i64 - n2 as i64)]
        .into_iter()
        .flatten()
        .min();
    let right = nx as i64 + vdet as i64 - n1 as i64 - n2 as i64;
    match left {
        Some(l) => l <= right,
        None => false,
    }
}

// ---------------------------------------------------------------------------
// root finding in Z_p; polynomials are stored lowest degree first

fn trim(mut a: Vec<BigInt>) -> Vec<BigInt> {
    while a.len() > 1 && a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    if a.is_empty() {
        a.push(BigInt::zero());
    }
    a
}

fn eval_mod(h: &[BigInt], t: &BigInt, m: &BigInt) -> BigInt {
    h.iter().rev().fold(BigInt::zero(), |acc, c| (acc * t + c).mod_floor(m))
}

fn derivative(h: &[BigInt]) -> Vec<BigInt> {
    if h.len() <= 1 {
        return vec![BigInt::zero()];
    }
    h.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
}

/// h(r + p·u) as a polynomial in u.
fn shift_scale(h: &[BigInt], r: &BigInt, p: &BigInt) -> Vec<BigInt> {
    let mut c = h.to_vec();
    let n = c.len();
    // Taylor shift by r (synthetic division repeated)
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = &c[j + 1] * r;
            c[j] += t;
        }
    }
    let mut pw = BigInt::one();
    for coef in c.iter_mut() {
        *coef *= &pw;
        pw *= p;
    }
    c
}

/// Newton lift of a simple root r (mod p) of h to a root mod p^k.
fn hensel_lift(h: &[BigInt], r: &BigInt, p: &BigInt, k: u32) -> BigInt {
    let pk = p.pow(k);
    let dh = derivative(h);
    let mut t = r.clone();
    let mut prec = 1u32;
    while prec < k {
        prec = (2 * prec).min(k);
        let m = p.pow(prec);
        let inv = modinv(&eval_mod(&dh, &t, &m), &m).expect("simple root");
        t = (&t - eval_mod(h, &t, &m) * inv).mod_floor(&m);
    }
    t.mod_floor(&pk)
}

/// Roots in Z_p, modulo p^k, of `h`, where the actual root is
/// `center + p^depth · u` for u a root of `h`.
#[allow(clippy::too_many_arguments)]
fn solve(
    h: &[BigInt],
    center: &BigInt,
    depth: u32,
    k: u32,
    p: &BigInt,
    depth_cap: u32,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<BigInt>,
) -> Result<()> {
    let h = trim(h.to_vec());
    if h.iter().all(Zero::is_zero) {
        return Err(ThueError::Internal("vanishing polynomial during p-adic descent".into()));
    }
    let v = h.iter().filter_map(|c| valuation(c, p)).min().unwrap_or(0);
    let pv = p.pow(v);
    let h: Vec<BigInt> = h.iter().map(|c| c / &pv).collect();
    let dh = derivative(&h);
    let pk = p.pow(k);
    let scale = p.pow(depth);
    for r in roots_mod_p(&h, p, rng) {
        if !(eval_mod(&dh, &r, p)).is_zero() {
            let u = hensel_lift(&h, &r, p, k.saturating_sub(depth).max(1));
            out.push((center + &scale * u).mod_floor(&pk));
        } else {
            if depth >= depth_cap {
                return Err(ThueError::PrecisionTooLow(format!(
                    "p-adic descent at {p} did not separate roots within {depth_cap} levels"
                )));
            }
            let next = shift_scale(&h, &r, p);
            solve(&next, &(center + &scale * &r), depth + 1, k, p, depth_cap, rng, out)?;
        }
    }
    Ok(())
}

/// Distinct roots of h in Z/p.
fn roots_mod_p(h: &[BigInt], p: &BigInt, rng: &mut ChaCha8Rng) -> Vec<BigInt> {
    let hp = trim(h.iter().map(|c| c.mod_floor(p)).collect());
    if hp.len() == 1 {
        return vec![];
    }
    if let Some(small) = p.to_u64().filter(|&q| q < SCAN_PRIME_LIMIT) {
        return (0..small)
            .map(BigInt::from)
            .filter(|t| eval_mod(&hp, t, p).is_zero())
            .collect();
    }
    // gcd(h, t^p - t) collects the linear factors
    let x = vec![BigInt::zero(), BigInt::one()];
    let xp = poly_powmod(&x, p, &hp, p);
    let g = poly_gcd(hp.clone(), poly_sub(&xp, &x, p), p);
    let mut roots = Vec::new();
    split_linear(g, p, rng, &mut roots);
    roots.sort();
    roots
}

fn split_linear(g: Vec<BigInt>, p: &BigInt, rng: &mut ChaCha8Rng, out: &mut Vec<BigInt>) {
    let deg = g.len() - 1;
    if deg == 0 {
        return;
    }
    if deg == 1 {
        let inv = modinv(&g[1], p).expect("nonzero leading coefficient");
        out.push((-&g[0] * inv).mod_floor(p));
        return;
    }
    let half = (p - 1u32) / 2u32;
    loop {
        let a = random_residue(rng, p);
        let base = vec![a, BigInt::one()];
        let pw = poly_powmod(&base, &half, &g, p);
        let f = poly_gcd(g.clone(), poly_sub(&pw, &[BigInt::one()], p), p);
        let fd = f.len() - 1;
        if fd > 0 && fd < deg {
            let rest = poly_divexact(&g, &f, p);
            split_linear(f, p, rng, out);
            split_linear(rest, p, rng, out);
            return;
        }
    }
}

fn random_residue(rng: &mut ChaCha8Rng, p: &BigInt) -> BigInt {
    let limbs = (p.bits() / 64 + 2) as usize;
    let mut acc = BigInt::zero();
    for _ in 0..limbs {
        acc = (acc << 64) + BigInt::from(rng.gen::<u64>());
    }
    acc.mod_floor(p)
}

fn poly_sub(a: &[BigInt], b: &[BigInt], p: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    trim(
        (0..n)
            .map(|i| (a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).mod_floor(p))
            .collect(),
    )
}

fn poly_mul(a: &[BigInt], b: &[BigInt], p: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out.into_iter().map(|c| c.mod_floor(p)).collect())
}

/// Remainder and quotient of a by b over F_p.
fn poly_divrem(a: &[BigInt], b: &[BigInt], p: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let inv = modinv(&b[db], p).expect("nonzero divisor");
    let mut r = trim(a.iter().map(|c| c.mod_floor(p)).collect());
    if r.len() <= db {
        return (vec![BigInt::zero()], r);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - 1 - db;
        let coef = (r.last().unwrap() * &inv).mod_floor(p);
        for (i, c) in b.iter().enumerate() {
            r[shift + i] = (&r[shift + i] - &coef * c).mod_floor(p);
        }
        q[shift] = coef;
        r.pop();
        r = trim(r);
        if r.len() <= db {
            break;
        }
    }
    (trim(q), r)
}

fn poly_divexact(a: &[BigInt], b: &[BigInt], p: &BigInt) -> Vec<BigInt> {
    poly_divrem(a, b, p).0
}

fn poly_gcd(mut a: Vec<BigInt>, mut b: Vec<BigInt>, p: &BigInt) -> Vec<BigInt> {
    a = trim(a);
    b = trim(b);
    while !(b.len() == 1 && b[0].is_zero()) {
        let r = poly_divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    let inv = modinv(a.last().unwrap(), p).unwrap_or_else(BigInt::one);
    a.into_iter().map(|c| (c * &inv).mod_floor(p)).collect()
}

fn poly_powmod(base: &[BigInt], e: &BigInt, m: &[BigInt], p: &BigInt) -> Vec<BigInt> {
    let mut result = vec![BigInt::one()];
    let b = poly_divrem(base, m, p).1;
    for i in (0..e.bits()).rev() {
        result = poly_divrem(&poly_mul(&result, &result, p), m, p).1;
        if e.bit(i) {
            result = poly_divrem(&poly_mul(&result, &b, p), m, p).1;
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::DEFAULT_FACTOR_BUDGET;

    fn form(s: &str) -> BinaryForm {
        s.parse().unwrap()
    }

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn sum_of_cubes_at_seven() {
        let f = form("3: 1 0 0 1");
        let set = local_factors(&f, &b(7), 1).unwrap();
        let pairs: Vec<_> = set.factors.iter().map(|l| (l.a.clone(), l.b.clone())).collect();
        // X+Y, X-3Y, X-5Y normalized mod 7
        assert_eq!(pairs, vec![(b(1), b(1)), (b(1), b(2)), (b(1), b(4))]);
        assert_eq!(c_f_p(&f, &b(7)).unwrap(), 3);
        assert_eq!(c_f_p(&f, &b(5)).unwrap(), 1);
        assert_eq!(set.factors[0].to_string(), "7^1: 1 1");
    }

    #[test]
    fn counts_from_quadratic_residues() {
        let f = form("2: 1 0 1");
        assert_eq!(local_factors(&f, &b(2), 5).unwrap().count(), 0);
        assert_eq!(c_f_p(&f, &b(5)).unwrap(), 2);
        assert_eq!(c_f_p(&f, &b(3)).unwrap(), 0);
    }

    #[test]
    fn precision_precondition() {
        let f = form("3: 1 0 0 1");
        // v_3(27) = 3 needs k ≥ 7
        assert!(matches!(local_factors(&f, &b(3), 6), Err(ThueError::PrecisionTooLow(_))));
        assert_eq!(local_factors(&f, &b(3), 7).unwrap().count(), 1);
    }

    #[test]
    fn root_at_infinity() {
        // XY(X+Y) at p = 5: lines (1:0), (0:1), (1:-1)
        let f = form("3: 0 1 1 0");
        let set = local_factors(&f, &b(5), 3).unwrap();
        assert_eq!(set.count(), 3);
        assert!(set.factors.contains(&LocalFactor::new(&b(5), 3, &b(0), &b(1)).unwrap()));
        assert!(set.factors.contains(&LocalFactor::new(&b(5), 3, &b(1), &b(0)).unwrap()));
    }

    #[test]
    fn large_prime_uses_splitting() {
        // t³ + 1 mod p ≡ 1 mod 3 has three roots
        let p = b(1_000_003);
        let f = form("3: 1 0 0 1");
        let set = local_factors(&f, &p, 2).unwrap();
        assert_eq!(set.count(), 3);
        let p2 = p.pow(2);
        for l in &set.factors {
            // F(-b, a) ≡ 0 for L = aX + bY
            assert!(f.evaluate(&-&l.b, &l.a).mod_floor(&p2).is_zero());
        }
    }

    #[test]
    fn c_f_m_examples() {
        let f = form("3: 1 0 0 1");
        assert_eq!(c_f_m(&f, &b(7), DEFAULT_FACTOR_BUDGET).unwrap(), 3);
        assert_eq!(c_f_m(&f, &b(35), DEFAULT_FACTOR_BUDGET).unwrap(), 3);
        assert_eq!(c_f_m(&form("2: 1 0 1"), &b(6), DEFAULT_FACTOR_BUDGET).unwrap(), 0);
        assert_eq!(c_f_infinity(&f).unwrap(), 1);
    }

    #[test]
    fn hypothesis_and_m_of_f() {
        let f = form("3: 1 0 0 1");
        let budget = DEFAULT_FACTOR_BUDGET;
        assert!(theorem1_hypothesis(&f, &b(7), budget).unwrap());
        assert!(!theorem1_hypothesis(&f, &b(21), budget).unwrap());
        assert!(theorem1_hypothesis(&f, &b(567), budget).unwrap());
        assert_eq!(m_of_f(&f, &b(63), budget).unwrap(), b(7));
        assert_eq!(m_of_f(&f, &b(567), budget).unwrap(), b(567));
        assert_eq!(m_of_f(&f, &b(1), budget).unwrap(), b(1));
    }

    #[test]
    fn witnesses() {
        let f = form("3: 1 0 0 1");
        let w = lemma2_witness(&f, &b(7), (&b(2), &b(-1))).unwrap();
        assert_eq!(w.truncate(1), LocalFactor::new(&b(7), 1, &b(1), &b(-5)).unwrap());
        let w = lemma2_witness(&f, &b(7), (&b(-1), &b(2))).unwrap();
        assert_eq!(w.truncate(1), LocalFactor::new(&b(7), 1, &b(1), &b(-3)).unwrap());
        assert!(matches!(lemma2_witness(&f, &b(7), (&b(1), &b(1))), Err(ThueError::HypothesisViolated(_))));
    }

    #[test]
    fn ramified_prime_can_lack_full_witness() {
        // 567 = 3⁴·7 divides F(1, 26) = 17577 but 81 ∤ 1 + 26
        let f = form("3: 1 0 0 1");
        match lemma2_witness(&f, &b(3), (&b(1), &b(26))) {
            Err(ThueError::NoWitness { required, best, proven, .. }) => {
                assert_eq!(required, 4);
                assert!(best as i64 >= proven && best < required);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(projective_root_oracle(&form("3: 1 0 0 1"), 7, 1, ORACLE_BUDGET).unwrap().len(), 3);
        assert!(projective_root_oracle(&form("2: 1 0 1"), 3, 2, ORACLE_BUDGET).unwrap().is_empty());
        assert_eq!(
            projective_root_oracle(&form("2: 0 1 0"), 5, 1, ORACLE_BUDGET).unwrap(),
            vec![(0, 1), (1, 0)]
        );
        assert!(matches!(
            projective_root_oracle(&form("2: 1 0 1"), 7, 8, ORACLE_BUDGET),
            Err(ThueError::BudgetExceeded(_))
        ));
    }

    #[test]
    fn lemma1_examples() {
        assert!(lemma1_holds(&b(7), (&b(1), &b(1)), (&b(1), &b(-3)), (&b(2), &b(-1))));
        assert!(lemma1_holds(&b(3), (&b(3), &b(1)), (&b(1), &b(0)), (&b(0), &b(1))));
    }
}
