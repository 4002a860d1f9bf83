//! Rank-2 sublattices of Z² in Hermite normal form.
//!
//! A lattice is stored by its canonical basis (a, 0), (b, c) with a, c > 0
//! and 0 ≤ b < a. Its points are exactly the (x, y) with c | y and
//! a | x - (y/c)·b. Text form: `"det: a b c"`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{divisors, factorize, sigma, valuation};
use crate::error::{Result, ThueError};
use crate::forms::BinaryForm;
use crate::interval::Interval;
use crate::padic::{local_factors, theorem1_hypothesis, LocalFactor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice2 {
    a: i64,
    b: i64,
    c: i64,
}

impl Lattice2 {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        if a <= 0 || c <= 0 || b < 0 || b >= a {
            return Err(ThueError::RejectedInput(format!("({a}, {b}, {c}) is not a canonical basis")));
        }
        Ok(Lattice2 { a, b, c })
    }

    /// Z².
    pub fn unit() -> Self {
        Lattice2 { a: 1, b: 0, c: 1 }
    }

    pub fn abc(&self) -> (i64, i64, i64) {
        (self.a, self.b, self.c)
    }

    pub fn det(&self) -> i64 {
        self.a * self.c
    }

    pub fn basis(&self) -> [(i64, i64); 2] {
        [(self.a, 0), (self.b, self.c)]
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        if y.rem_euclid(self.c) != 0 {
            return false;
        }
        let q = i128::from(y / self.c);
        (i128::from(x) - q * i128::from(self.b)).rem_euclid(i128::from(self.a)) == 0
    }
}

impl fmt::Display for Lattice2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} {} {}", self.det(), self.a, self.b, self.c)
    }
}

impl FromStr for Lattice2 {
    type Err = ThueError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || ThueError::Parse(format!("expected \"det: a b c\", got {s:?}"));
        let (det, rest) = s.split_once(':').ok_or_else(bad)?;
        let nums = rest
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        let [a, b, c] = nums[..] else { return Err(bad()) };
        let l = Lattice2::new(a, b, c)?;
        if det.trim().parse::<i64>().map_err(|_| bad())? != l.det() {
            return Err(ThueError::Parse(format!("determinant prefix does not match in {s:?}")));
        }
        Ok(l)
    }
}

/// Canonical basis of the lattice spanned by `gens`.
pub fn hnf_from_generators(gens: &[(i64, i64)]) -> Result<Lattice2> {
    // `v` carries the gcd of the y-coordinates seen so far; `a` is the gcd of
    // the x-axis vectors produced along the way.
    let mut a: i128 = 0;
    let mut v: Option<(i128, i128)> = None;
    for &(x, y) in gens {
        let (x, y) = (i128::from(x), i128::from(y));
        if y == 0 {
            a = a.gcd(&x);
            continue;
        }
        match v {
            None => v = Some(if y < 0 { (-x, -y) } else { (x, y) }),
            Some((vx, vy)) => {
                let e = vy.extended_gcd(&y);
                let g = e.gcd;
                let nx = e.x * vx + e.y * x;
                let ux = (y / g) * vx - (vy / g) * x;
                a = a.gcd(&ux);
                v = Some((nx, g));
            }
        }
        if let (Some((vx, vy)), true) = (v, a > 0) {
            v = Some((vx.rem_euclid(a), vy));
        }
    }
    let (vx, c) = v.ok_or(ThueError::RankDeficient)?;
    if a == 0 {
        return Err(ThueError::RankDeficient);
    }
    let b = vx.rem_euclid(a);
    let conv = |n: i128| i64::try_from(n).map_err(|_| ThueError::RejectedInput(format!("{n} exceeds 64 bits")));
    Lattice2::new(conv(a)?, conv(b)?, conv(c)?)
}

/// One congruence `L(x, y) ≡ 0 mod p^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    pub p: BigInt,
    pub e: u32,
    pub factor: LocalFactor,
}

/// `{(x, y) : L_p(x, y) ≡ 0 mod p^{e_p} for all constraints}`.
pub fn from_congruences(constraints: &[Congruence]) -> Result<Lattice2> {
    let mut modulus = BigInt::one();
    let mut big_a = BigInt::zero();
    let mut big_b = BigInt::zero();
    for (i, con) in constraints.iter().enumerate() {
        if constraints[..i].iter().any(|o| o.p == con.p) {
            return Err(ThueError::DuplicatePrime(con.p.to_string()));
        }
        if con.factor.k < con.e || con.factor.p != con.p {
            return Err(ThueError::PrecisionTooLow(format!(
                "factor {} cannot impose exponent {} at {}",
                con.factor, con.e, con.p
            )));
        }
        let pe = con.p.pow(con.e);
        big_a = crt(&big_a, &modulus, &con.factor.a, &pe);
        big_b = crt(&big_b, &modulus, &con.factor.b, &pe);
        modulus *= pe;
    }
    if modulus.is_one() {
        return Ok(Lattice2::unit());
    }
    let conv = |n: &BigInt| {
        n.to_i64()
            .ok_or_else(|| ThueError::RejectedInput(format!("modulus {modulus} exceeds 64 bits")))
    };
    let m = conv(&modulus)?;
    hnf_from_generators(&[(m, 0), (0, m), (conv(&big_b)?, -conv(&big_a)?)])
}

/// x ≡ r1 mod m1, x ≡ r2 mod m2 for coprime moduli.
fn crt(r1: &BigInt, m1: &BigInt, r2: &BigInt, m2: &BigInt) -> BigInt {
    let e = m1.extended_gcd(m2);
    let m = m1 * m2;
    (r1 + m1 * &e.x * (r2 - r1)).mod_floor(&m)
}

/// The c_F(m) lattices of determinant m containing every primitive solution
/// of |F(x, y)| = m, one per choice of local factor at each p | m.
pub fn theorem1_lattices(form: &BinaryForm, m: &BigInt, budget: u64) -> Result<Vec<Lattice2>> {
    form.require_primitive()?;
    let disc = form.require_separable()?;
    if !theorem1_hypothesis(form, m, budget)? {
        return Err(ThueError::HypothesisViolated(format!(
            "some p | {m} has v_p(m) ≤ v_p(D(F)) = v_p({disc})"
        )));
    }
    let fac = factorize(m, budget)?;
    let mut choices: Vec<Vec<Congruence>> = vec![vec![]];
    for (p, e) in &fac.factors {
        let k = e + 2 * valuation(&disc, p).unwrap_or(0) + 1;
        let set = local_factors(form, p, k)?;
        choices = choices
            .into_iter()
            .flat_map(|prefix| {
                set.factors.iter().map(move |f| {
                    let mut next = prefix.clone();
                    next.push(Congruence { p: p.clone(), e: *e, factor: f.clone() });
                    next
                })
            })
            .collect();
    }
    let lattices = choices.iter().map(|c| from_congruences(c)).collect::<Result<Vec<_>>>()?;
    let mut seen = lattices.clone();
    seen.sort();
    seen.dedup();
    if seen.len() != lattices.len() {
        return Err(ThueError::Internal("local factor choices gave coinciding lattices".into()));
    }
    Ok(lattices)
}

/// Lagrange–Gauss reduced basis with ‖u‖ = λ₁ ≤ ‖w‖ = λ₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReducedBasis {
    pub u: (i64, i64),
    pub w: (i64, i64),
    pub norm1_sq: i128,
    pub norm2_sq: i128,
}

impl ReducedBasis {
    pub fn lambda1(&self) -> f64 {
        (self.norm1_sq as f64).sqrt()
    }

    pub fn lambda2(&self) -> f64 {
        (self.norm2_sq as f64).sqrt()
    }

    pub fn dot(&self) -> i128 {
        dot(self.u, self.w)
    }

    /// |det(u, w)|.
    pub fn det(&self) -> i128 {
        (i128::from(self.u.0) * i128::from(self.w.1) - i128::from(self.u.1) * i128::from(self.w.0)).abs()
    }

    /// λ₁λ₂ ≥ 2·det/π, decided with outward rounding.
    pub fn minkowski_holds(&self) -> bool {
        let pi = Interval::new(std::f64::consts::PI.next_down(), std::f64::consts::PI.next_up());
        let lhs = pi.square() * Interval::from_bigint(&(BigInt::from(self.norm1_sq) * self.norm2_sq));
        let det = BigInt::from(self.det());
        let rhs = Interval::from_bigint(&(&det * &det * 4));
        rhs.certainly_le(&lhs)
    }
}

fn norm_sq(v: (i64, i64)) -> i128 {
    i128::from(v.0) * i128::from(v.0) + i128::from(v.1) * i128::from(v.1)
}

fn dot(u: (i64, i64), w: (i64, i64)) -> i128 {
    i128::from(u.0) * i128::from(w.0) + i128::from(u.1) * i128::from(w.1)
}

/// Nearest integer to n/d for d > 0 (halves round up).
fn round_div(n: i128, d: i128) -> i128 {
    (2 * n + d).div_euclid(2 * d)
}

pub fn reduce(l: &Lattice2) -> ReducedBasis {
    let mut u = (l.a, 0i64);
    let mut w = (l.b, l.c);
    loop {
        if norm_sq(w) < norm_sq(u) {
            std::mem::swap(&mut u, &mut w);
        }
        let mu = round_div(dot(u, w), norm_sq(u));
        if mu == 0 {
            break;
        }
        w = (
            (i128::from(w.0) - mu * i128::from(u.0)) as i64,
            (i128::from(w.1) - mu * i128::from(u.1)) as i64,
        );
    }
    ReducedBasis { u, w, norm1_sq: norm_sq(u), norm2_sq: norm_sq(w) }
}

/// Every sublattice of determinant m, grouped by divisor a | m ascending,
/// then b ascending. Shard `s` of `n` takes the divisors with index ≡ s mod n.
#[derive(Debug, Clone)]
pub struct Sublattices {
    m: i64,
    divisors: Vec<i64>,
    div_idx: usize,
    b: i64,
    step: usize,
}

impl Iterator for Sublattices {
    type Item = Lattice2;

    fn next(&mut self) -> Option<Lattice2> {
        loop {
            let a = *self.divisors.get(self.div_idx)?;
            if self.b < a {
                let l = Lattice2 { a, b: self.b, c: self.m / a };
                self.b += 1;
                return Some(l);
            }
            self.div_idx += self.step;
            self.b = 0;
        }
    }
}

pub fn all_sublattices(m: i64, budget: u64) -> Result<Sublattices> {
    all_sublattices_shard(m, budget, 0, 1)
}

pub fn all_sublattices_shard(m: i64, budget: u64, shard: usize, shards: usize) -> Result<Sublattices> {
    if m <= 0 {
        return Err(ThueError::RejectedInput(format!("determinant {m} must be positive")));
    }
    let total = sigma(m as u64);
    if total > budget {
        return Err(ThueError::BudgetExceeded(format!("{total} sublattices of determinant {m} exceed {budget}")));
    }
    let divisors = divisors(m as u64).into_iter().map(|d| d as i64).collect();
    Ok(Sublattices { m, divisors, div_idx: shard, b: 0, step: shards.max(1) })
}

/// Call `f` on every lattice point with ‖v‖² ≤ `max_norm_sq`, ordered by the
/// second then the first reduced coordinate.
pub fn for_each_point<F: FnMut(i64, i64)>(l: &Lattice2, max_norm_sq: i128, budget: u64, mut f: F) -> Result<()> {
    if max_norm_sq < 0 {
        return Ok(());
    }
    let rb = reduce(l);
    let (ga, gb, gc) = (rb.norm1_sq, rb.dot(), rb.norm2_sq);
    let det = rb.det();
    // ellipse bounding box: j² ≤ A·R²/det², expected point count ≈ πR²/det
    let estimate = std::f64::consts::PI * max_norm_sq as f64 / det as f64 + 4.0 * (max_norm_sq as f64).sqrt() + 1.0;
    if estimate > budget as f64 {
        return Err(ThueError::BudgetExceeded(format!(
            "about {estimate:.0} lattice points within norm² {max_norm_sq}"
        )));
    }
    let jmax = (ga * max_norm_sq).sqrt() / det + 1;
    for j in -jmax..=jmax {
        // A i² + 2B i j + C j² ≤ R²  ⇔  (A i + B j)² ≤ A R² - det² j²
        let rhs = ga * max_norm_sq - det * det * j * j;
        if rhs < 0 {
            continue;
        }
        let s = rhs.sqrt();
        let lo = (-gb * j - s).div_euclid(ga) - 1;
        let hi = (-gb * j + s).div_euclid(ga) + 1;
        for i in lo..=hi {
            if ga * i * i + 2 * gb * i * j + gc * j * j <= max_norm_sq {
                let x = i * i128::from(rb.u.0) + j * i128::from(rb.w.0);
                let y = i * i128::from(rb.u.1) + j * i128::from(rb.w.1);
                f(x as i64, y as i64);
            }
        }
    }
    Ok(())
}

pub fn enumerate_points(l: &Lattice2, max_norm_sq: i128, budget: u64) -> Result<Vec<(i64, i64)>> {
    let mut out = Vec::new();
    for_each_point(l, max_norm_sq, budget, |x, y| out.push((x, y)))?;
    Ok(out)
}

/// Points with Euclidean norm ≤ `radius`.
pub fn enumerate_within(l: &Lattice2, radius: f64, budget: u64) -> Result<Vec<(i64, i64)>> {
    if !(radius >= 0.0) {
        return Err(ThueError::RejectedInput(format!("radius {radius} must be nonnegative")));
    }
    enumerate_points(l, radius_to_norm_sq(radius), budget)
}

/// Largest integer n with √n ≤ radius.
pub fn radius_to_norm_sq(radius: f64) -> i128 {
    let r2 = radius * radius;
    let mut n = r2.floor() as i128;
    while n > 0 && (n as f64).sqrt() > radius {
        n -= 1;
    }
    while ((n + 1) as f64).sqrt() <= radius {
        n += 1;
    }
    n
}
