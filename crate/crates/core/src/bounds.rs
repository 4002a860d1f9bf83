//! Explicit counting bounds for primitive solutions in a lattice, the
//! threshold beyond which large solutions are forced to be exceptional, and
//! the classifier that checks that statement on concrete data.
//!
//! Every formula is evaluated twice: once in plain `f64` for the reported
//! value and once in [`Interval`] arithmetic as a cross-check.

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::ext_gcd_i128;
use crate::enumeration::contfrac::f64_to_dyadic_ceil;
use crate::enumeration::{lattice_solutions, Mode, SearchRegion, ThueInstance};
use crate::error::{Result, ThueError};
use crate::forms::{complex_factorization, epsilon_exceptional, height_h, matrix2, BinaryForm, Matrix2};
use crate::forms::{DEFAULT_PRECISION_BITS};
use crate::interval::Interval;
use crate::lattices::{reduce, theorem1_lattices, Lattice2};
use crate::padic::m_of_f;

const FIVE_POW_4: f64 = 625.0;

trait Real: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + From<f64> {
    fn ln(self) -> Self;
}

impl Real for f64 {
    fn ln(self) -> Self {
        f64::ln(self)
    }
}

impl Real for Interval {
    fn ln(self) -> Self {
        Interval::ln(self)
    }
}

fn k<R: Real>(x: f64) -> R {
    R::from(x)
}

/// log(2^10 · 3^3 · 5^3)
fn log_c10<R: Real>() -> R {
    k::<R>(3_456_000.0).ln()
}

/// log(2^9 · 3^3 · 5^2)
fn log_c9<R: Real>() -> R {
    k::<R>(345_600.0).ln()
}

fn theorem2_large<R: Real>(d: f64, log_m: R, a: R) -> R {
    let l = k::<R>(d - 1.0).ln();
    let inner = (k::<R>(2.0) * log_m / (k::<R>(d) * a.ln()) + k(2.0)).ln();
    k::<R>(2.0) + k::<R>(2.0 * d) * (k::<R>(11.0) + k::<R>(31.0) / l + inner / l)
}

fn theorem2_small<R: Real>(d: f64, log_m: R, a: R) -> R {
    let l = k::<R>(d - 1.0).ln();
    let inner = (log_m / (k::<R>(2.0 * d) * k::<R>(5.0).ln()) + k(2.0)).ln();
    k::<R>(2.0 * FIVE_POW_4) / a * (k::<R>(2.0) + k::<R>(2.0 * d) * (k::<R>(11.0) + k::<R>(31.0) / l + inner / l))
}

fn corollary<R: Real>(d: f64, log_m: R, a: R, c: f64) -> R {
    let inner = (k::<R>(2.0) + log_m / (k::<R>(1.0) + a.ln())).ln();
    k::<R>(2500.0 * d) * (k::<R>(43.0) + inner / k::<R>(d - 1.0).ln()) * k(c)
}

fn proposition<R: Real>(d: f64, log_m: R, b: R) -> R {
    let l = k::<R>(d - 1.0).ln();
    let l54 = k::<R>(d - 1.25).ln();
    let inner = (log_m / b.ln() + k(2.0)).ln();
    k::<R>(2.0) + k::<R>(2.0 * d) * (k::<R>(11.0) + log_c10::<R>() / l + log_c9::<R>() / l54 + inner / l)
}

fn lemma7<R: Real>(d: f64, b: R, c1: R, c2: R) -> R {
    let l = k::<R>(d - 1.0).ln();
    k::<R>(2.0 * d) * (k::<R>(1.0) + (c2.ln() / (c1 / b).ln()).ln() / l)
}

fn lemma8<R: Real>(d: f64) -> R {
    k::<R>(2.0 * d) * (k::<R>(4.0) + log_c9::<R>() / k::<R>(d - 1.25).ln())
}

/// Which bound a report carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Theorem2LargeA,
    Theorem2SmallA,
    Corollary,
    Stewart,
    Proposition,
    Lemma6,
    Lemma7,
    Lemma8,
    Theorem3Threshold,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Theorem2LargeA => "theorem2-large-A",
            BoundKind::Theorem2SmallA => "theorem2-small-A",
            BoundKind::Corollary => "corollary",
            BoundKind::Stewart => "stewart",
            BoundKind::Proposition => "proposition",
            BoundKind::Lemma6 => "lemma6",
            BoundKind::Lemma7 => "lemma7",
            BoundKind::Lemma8 => "lemma8",
            BoundKind::Theorem3Threshold => "theorem3-threshold",
        })
    }
}

/// A hypothesis attached to a bound. `holds` is `None` when the inputs needed
/// to decide it were not supplied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideCondition {
    pub condition: String,
    pub holds: Option<bool>,
}

impl SideCondition {
    fn new(condition: impl Into<String>, holds: impl Into<Option<bool>>) -> Self {
        SideCondition { condition: condition.into(), holds: holds.into() }
    }

    fn verdict(&self) -> &'static str {
        match self.holds {
            Some(true) => "true",
            Some(false) => "false",
            None => "unchecked",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub name: BoundKind,
    /// Named inputs, rendered exactly as they entered the formula.
    pub inputs: Vec<(String, String)>,
    pub value: f64,
    /// Interval enclosure of the same formula.
    pub interval: Interval,
    pub side_conditions: Vec<SideCondition>,
}

pub const BOUND_CSV_HEADER: &str = "bound,value,value_lo,value_hi,inputs,side_conditions";

impl BoundReport {
    fn build(
        name: BoundKind,
        inputs: Vec<(&str, String)>,
        value: f64,
        interval: Interval,
        side_conditions: Vec<SideCondition>,
    ) -> Result<Self> {
        if value.is_nan() || !interval.contains(value) {
            return Err(ThueError::Internal(format!(
                "{name}: f64 value {value} outside its enclosure [{}, {}]",
                interval.lo, interval.hi
            )));
        }
        let inputs = inputs.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        Ok(BoundReport { name, inputs, value, interval, side_conditions })
    }

    /// Do all decided side conditions hold?
    pub fn conditions_hold(&self) -> bool {
        self.side_conditions.iter().all(|c| c.holds != Some(false))
    }

    /// `key=value` lines; values at 6 significant digits.
    pub fn to_kv(&self) -> String {
        let mut out = format!("bound={}\n", self.name);
        for (k, v) in &self.inputs {
            out += &format!("input.{k}={v}\n");
        }
        out += &format!("value={}\n", format_sig(self.value, 6));
        out += &format!("value_lo={}\n", format_sig(self.interval.lo, 12));
        out += &format!("value_hi={}\n", format_sig(self.interval.hi, 12));
        for c in &self.side_conditions {
            out += &format!("side[{}]={}\n", c.condition, c.verdict());
        }
        out
    }

    pub fn csv_row(&self) -> String {
        let inputs: Vec<String> = self.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let sides: Vec<String> = self.side_conditions.iter().map(|c| format!("{}:{}", c.condition, c.verdict())).collect();
        format!(
            "{},{},{},{},{},{}",
            self.name,
            format_sig(self.value, 6),
            format_sig(self.interval.lo, 12),
            format_sig(self.interval.hi, 12),
            inputs.join(";"),
            sides.join(";")
        )
    }
}

/// `x` rounded to `digits` significant digits, plain notation for moderate
/// magnitudes and scientific otherwise.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    let exp = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&exp) {
        return format!("{:.*e}", digits - 1, x);
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    let s = format!("{:.*}", decimals, x);
    // rounding can carry into a new leading digit, e.g. 9.9999995 -> 10.000000
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn require_degree(d: usize, min: usize) -> Result<()> {
    if d < min {
        return Err(ThueError::Domain(format!("degree {d} must be at least {min}")));
    }
    Ok(())
}

fn log_bigint(m: &BigInt) -> (f64, Interval) {
    let iv = Interval::from_bigint(m).ln();
    let f = match m.to_f64() {
        Some(v) if v.is_finite() => v.ln(),
        _ => iv.mid(),
    };
    (f, iv)
}

/// Number of primitive solutions of |F| ≤ m in a lattice of determinant
/// `A·m^{2/d}/|D(F)|^{1/d(d-1)}`. The large-A formula applies for A ≥ 5^4,
/// the small-A one below.
pub fn theorem2_bound(d: usize, m: &BigInt, a: f64) -> Result<BoundReport> {
    require_degree(d, 3)?;
    if m < &BigInt::from(2) {
        return Err(ThueError::Domain(format!("m = {m} must be at least 2")));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(ThueError::Domain(format!("A = {a} must be positive")));
    }
    let (lm, lm_iv) = log_bigint(m);
    let df = d as f64;
    let inputs = vec![("d", d.to_string()), ("m", m.to_string()), ("A", a.to_string())];
    if a >= FIVE_POW_4 {
        BoundReport::build(
            BoundKind::Theorem2LargeA,
            inputs,
            theorem2_large(df, lm, a),
            theorem2_large(df, lm_iv, Interval::point(a)),
            vec![SideCondition::new("A>=5^4", true)],
        )
    } else {
        BoundReport::build(
            BoundKind::Theorem2SmallA,
            inputs,
            theorem2_small(df, lm, a),
            theorem2_small(df, lm_iv, Interval::point(a)),
            vec![SideCondition::new("A<5^4", true)],
        )
    }
}

/// Count of primitive solutions with m' | F(x, y), given c_F(m').
pub fn corollary_bound(d: usize, m: &BigInt, a: f64, c_f_m_prime: u64) -> Result<BoundReport> {
    require_degree(d, 3)?;
    if !m.is_positive() {
        return Err(ThueError::Domain(format!("m = {m} must be positive")));
    }
    if !(a > 0.0 && 1.0 + a.ln() > 0.0) {
        return Err(ThueError::Domain(format!("A = {a} needs 1 + log A > 0")));
    }
    let (lm, lm_iv) = log_bigint(m);
    let c = c_f_m_prime as f64;
    BoundReport::build(
        BoundKind::Corollary,
        vec![("d", d.to_string()), ("m", m.to_string()), ("A", a.to_string()), ("c_F(m')", c_f_m_prime.to_string())],
        corollary(d as f64, lm, a, c),
        corollary(d as f64, lm_iv, Interval::point(a), c),
        vec![SideCondition::new("A>=1", a >= 1.0)],
    )
}

/// Inputs needed to decide the hypothesis of Stewart's bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StewartContext {
    pub m: BigInt,
    pub m_prime: BigInt,
    pub disc: BigInt,
}

/// `(5600d + 700/ε)·d^ω(m')`.
pub fn stewart_bound(d: usize, eps: f64, omega: u32, ctx: Option<&StewartContext>) -> Result<BoundReport> {
    require_degree(d, 3)?;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(ThueError::Domain(format!("eps = {eps} must be positive")));
    }
    let df = d as f64;
    let value = (5600.0 * df + 700.0 / eps) * df.powi(omega as i32);
    let interval = (Interval::point(5600.0 * df) + Interval::point(700.0) / Interval::point(eps))
        * Interval::point(df).powi(omega);
    let text = "(m')^(1+eps)>=m^(2/d+eps)/|D(F)|^(1/d(d-1))";
    let mut sides = Vec::new();
    match ctx {
        Some(c) => {
            let divides = c.m_prime.is_positive() && c.m.is_multiple_of(&c.m_prime);
            let coprime = c.m_prime.gcd(&c.disc).is_one();
            let lhs = Interval::point(1.0 + eps) * Interval::from_bigint(&c.m_prime).ln();
            let rhs = Interval::point(2.0 / df + eps) * Interval::from_bigint(&c.m).ln()
                - Interval::from_bigint(&c.disc.abs()).ln() / Interval::point(df * (df - 1.0));
            sides.push(SideCondition::new("m'|m", divides));
            sides.push(SideCondition::new("gcd(m',D(F))=1", coprime));
            sides.push(SideCondition::new(text, rhs.certainly_le(&lhs)));
        }
        None => sides.push(SideCondition::new(text, None)),
    }
    let inputs = vec![("d", d.to_string()), ("eps", eps.to_string()), ("omega(m')", omega.to_string())];
    BoundReport::build(BoundKind::Stewart, inputs, value, interval, sides)
}

/// The Proposition's count with B = M(F_Λ, m)/m known to lie in `b`. The
/// count decreases in B, so the value is taken at the lower end and the
/// interval covers the whole range.
pub fn proposition_bound(d: usize, m: &BigInt, b: Interval) -> Result<BoundReport> {
    require_degree(d, 3)?;
    if !m.is_positive() {
        return Err(ThueError::Domain(format!("m = {m} must be positive")));
    }
    if !(b.lo > 1.0) {
        return Err(ThueError::Domain(format!("B lower bound {} must exceed 1", b.lo)));
    }
    let (lm, lm_iv) = log_bigint(m);
    let df = d as f64;
    let threshold = 5f64.powi(2 * d as i32);
    BoundReport::build(
        BoundKind::Proposition,
        vec![("d", d.to_string()), ("m", m.to_string()), ("B_lo", b.lo.to_string()), ("B_hi", b.hi.to_string())],
        proposition(df, lm, b.lo),
        proposition(df, lm_iv, b),
        vec![SideCondition::new("B>=5^(2d)", b.lo >= threshold)],
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaBounds {
    /// Solutions with 1 ≤ |y| ≤ B^c.
    pub lemma6: BoundReport,
    /// Solutions with C₁ ≤ |y| ≤ C₂.
    pub lemma7: BoundReport,
    /// Solutions with |y| ≥ max(B^{4(d-1)}, (8^d M)^{2^10 3^3 5^3}).
    pub lemma8: BoundReport,
}

pub fn lemma_bounds(d: usize, c: f64, b: f64, c1: f64, c2: f64) -> Result<LemmaBounds> {
    require_degree(d, 3)?;
    if !(c >= 0.0 && c.is_finite()) {
        return Err(ThueError::Domain(format!("c = {c} must be nonnegative")));
    }
    if !(b > 0.0 && c1 > b && c2 > c1 && c2.is_finite()) {
        return Err(ThueError::Domain(format!("need C2 > C1 > B > 0, got B = {b}, C1 = {c1}, C2 = {c2}")));
    }
    if !(c2.ln() > 0.0) {
        return Err(ThueError::Domain(format!("C2 = {c2} must exceed 1")));
    }
    let df = d as f64;
    let l6 = 2.0 * df * (2.0 * c + 1.0);
    let l6_iv = Interval::point(2.0 * df) * (Interval::point(2.0) * Interval::point(c) + Interval::point(1.0));
    let lemma6 = BoundReport::build(
        BoundKind::Lemma6,
        vec![("d", d.to_string()), ("c", c.to_string())],
        l6,
        l6_iv,
        vec![],
    )?;
    let lemma7 = BoundReport::build(
        BoundKind::Lemma7,
        vec![("d", d.to_string()), ("B", b.to_string()), ("C1", c1.to_string()), ("C2", c2.to_string())],
        lemma7(df, b, c1, c2),
        lemma7(df, Interval::point(b), Interval::point(c1), Interval::point(c2)),
        vec![SideCondition::new("C2>C1>B", true)],
    )?;
    let lemma8 = BoundReport::build(
        BoundKind::Lemma8,
        vec![("d", d.to_string())],
        lemma8::<f64>(df),
        lemma8::<Interval>(df),
        vec![],
    )?;
    Ok(LemmaBounds { lemma6, lemma7, lemma8 })
}

/// A in `det(L) = A·m^{2/d}/|D(F)|^{1/d(d-1)}`.
pub fn a_of_lattice(form: &BinaryForm, m: &BigInt, lattice: &Lattice2) -> Result<Interval> {
    let disc = form.require_separable()?;
    if !m.is_positive() {
        return Err(ThueError::Domain(format!("m = {m} must be positive")));
    }
    let d = form.degree() as f64;
    let log_a = Interval::from_i64(lattice.det()).ln()
        + Interval::from_bigint(&disc.abs()).ln() / Interval::point(d * (d - 1.0))
        - Interval::point(2.0) * Interval::from_bigint(m).ln() / Interval::point(d);
    Ok(log_a.exp())
}

/// Observed primitive solutions of |F| ≤ m in one lattice against the
/// Theorem 2 count for that lattice's A.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem2Check {
    pub lattice: Lattice2,
    pub a: Interval,
    pub count: usize,
    /// Evaluated at the lower end of `a`, where the bound is largest.
    pub bound: BoundReport,
    pub region_complete: bool,
}

impl Theorem2Check {
    pub fn holds(&self) -> bool {
        (self.count as f64) < self.bound.value
    }
}

pub fn theorem2_check(
    form: &BinaryForm,
    m: &BigInt,
    lattice: &Lattice2,
    region: &SearchRegion,
    budget: u64,
) -> Result<Theorem2Check> {
    if form.degree() < 3 || !form.content().is_one() || form.discriminant().is_zero() {
        return Err(ThueError::HypothesisViolated(format!(
            "{form} needs degree >= 3, content 1 and nonzero discriminant"
        )));
    }
    let a = a_of_lattice(form, m, lattice)?;
    let inst = ThueInstance::new(form.clone(), m.clone(), Mode::Leq)?;
    let count = lattice_solutions(&inst, lattice, region, budget)?.len();
    let bound = theorem2_bound(form.degree(), m, a.lo)?;
    Ok(Theorem2Check { lattice: *lattice, a, count, bound, region_complete: region.complete })
}

/// Heights attached to a lattice Λ and the form F_Λ(X, Y) = F(Xu + Yw).
#[derive(Debug, Clone, PartialEq)]
pub struct HeightReport {
    /// H(F_Λ) for the Lagrange–Gauss reduced basis.
    pub h: f64,
    /// Upper bound for M(F_Λ), the minimum of H over all bases.
    pub m_upper: f64,
    /// Upper bound for M(F_Λ, m): bases whose first vector is a solution,
    /// with the best solution and shear found. `None` without solutions.
    pub m_of_lm_upper: Option<f64>,
    pub best_basis: Option<[(i64, i64); 2]>,
    /// |D(F_Λ)|^{1/2(d-1)}, a lower bound for M(F_Λ).
    pub m_lower: f64,
    /// Whether each reported quantity is exact rather than a bound or
    /// rounded value.
    pub exact: Vec<(&'static str, bool)>,
}

fn basis_matrix(u: (i64, i64), w: (i64, i64)) -> Matrix2 {
    matrix2(u.0, w.0, u.1, w.1)
}

/// Integer shears t worth trying for G(X + tY, Y): near the real parts of
/// the roots of G(t, 1), and the whole bracket between them when short.
fn shear_candidates(g: &BinaryForm) -> Result<Vec<i64>> {
    let cf = complex_factorization(g, DEFAULT_PRECISION_BITS)?;
    let reals: Vec<f64> = cf.factors.iter().filter_map(|f| f.root()).map(|r| r.center().re).collect();
    let clamp = |x: f64| x.clamp(-1e12, 1e12);
    let mut ts: Vec<i64> = reals.iter().flat_map(|&r| [clamp(r.floor()) as i64, clamp(r.ceil()) as i64]).collect();
    if let (Some(lo), Some(hi)) = (ts.iter().min().copied(), ts.iter().max().copied()) {
        if hi - lo <= 64 {
            ts.extend(lo..=hi);
        }
    }
    ts.push(0);
    ts.sort_unstable();
    ts.dedup();
    Ok(ts)
}

/// H of the reduced basis, the lower bound from the discriminant, and an
/// upper bound for M(F_Λ, m) by shear search over bases (z₀, z₀' + t z₀)
/// with z₀ one of `solutions` (primitive points of Λ with |F| ≤ m).
pub fn heights_of_lattice(
    form: &BinaryForm,
    lattice: &Lattice2,
    m: &BigInt,
    solutions: &[(i64, i64)],
) -> Result<HeightReport> {
    let disc = form.require_separable()?;
    let d = form.degree() as f64;
    let rb = reduce(lattice);
    let h = height_h(&form.compose(&basis_matrix(rb.u, rb.w))?)?;
    let log_lower = (Interval::from_bigint(&disc.abs()).ln()
        + Interval::point(d * (d - 1.0)) * Interval::from_i64(lattice.det()).ln())
        / Interval::point(2.0 * (d - 1.0));
    let m_lower = log_lower.exp().lo;

    let (a, b, c) = lattice.abc();
    let mut best: Option<(f64, [(i64, i64); 2])> = None;
    for &(x, y) in solutions {
        let (xb, yb) = (BigInt::from(x), BigInt::from(y));
        if !lattice.contains(x, y) || !xb.gcd(&yb).is_one() || form.evaluate(&xb, &yb).abs() > m.abs() {
            return Err(ThueError::RejectedInput(format!(
                "({x}, {y}) is not a primitive solution of |F| <= {m} in {lattice}"
            )));
        }
        // coordinates in the HNF basis (a, 0), (b, c)
        let j = i128::from(y / c);
        let i = (i128::from(x) - j * i128::from(b)) / i128::from(a);
        let (_, s, t) = ext_gcd_i128(i, j);
        // i·l - j·k = 1 with l = s, k = -t
        let (kk, l) = (-t, s);
        let z1 = ((kk * i128::from(a) + l * i128::from(b)) as i64, (l * i128::from(c)) as i64);
        let g = form.compose(&basis_matrix((x, y), z1))?;
        for t in shear_candidates(&g)? {
            let ht = height_h(&g.compose(&matrix2(1, t, 0, 1))?)?;
            if best.as_ref().is_none_or(|(hb, _)| ht < *hb) {
                best = Some((ht, [(x, y), (z1.0 + t * x, z1.1 + t * y)]));
            }
        }
    }
    let m_of_lm_upper = best.as_ref().map(|(v, _)| *v);
    Ok(HeightReport {
        h,
        m_upper: m_of_lm_upper.map_or(h, |v| v.min(h)),
        m_of_lm_upper,
        best_basis: best.map(|(_, basis)| basis),
        m_lower,
        exact: vec![("H", false), ("M_upper", false), ("MofFLm_upper", false), ("m_lower", false)],
    })
}

/// Smallest integer ≥ e^x for an upper bound x.
fn exp_ceil(x: f64) -> BigInt {
    if x < 700.0 {
        return f64_to_dyadic_ceil(x.exp() * (1.0 + 1e-12), 0).max(BigInt::one());
    }
    let ln2 = std::f64::consts::LN_2;
    let shift = (x / ln2).floor() - 60.0;
    let top = (x - shift * ln2).exp() * (1.0 + 1e-12);
    f64_to_dyadic_ceil(top, 0) << shift as usize
}

/// (12 + ε)/ε when it is an integer below 10^6. ε is a dyadic rational
/// N/2^1074, so this holds exactly when N divides 12·2^1074.
fn exact_exponent(eps: f64) -> Option<u32> {
    let n = f64_to_dyadic_ceil(eps, 1074);
    let twelve = BigInt::from(12) << 1074usize;
    if n.is_zero() || !twelve.is_multiple_of(&n) {
        return None;
    }
    (twelve / n).to_u32().filter(|q| *q < 1_000_000).map(|q| q + 1)
}

/// Threshold M₀ with audit; `log_first` and `log_second` enclose the log of
/// the threshold each condition imposes on its own.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem3Threshold {
    pub m0: BigInt,
    pub log_first: Interval,
    pub log_second: Interval,
    pub report: BoundReport,
}

/// Least M₀ (up to conservative rounding) such that every m ≥ M₀ satisfies
///
/// * m(F)^{1+ε/12} > m, and
/// * m(F)^{ε/12} ≥ 2^{d-2} H(F)^{d-2} / ((2/π)^{1+ε/2} |D(F)|^{1/2}),
///
/// using only m(F) ≥ m/|D(F)|.
pub fn theorem3_threshold(form: &BinaryForm, eps: f64) -> Result<Theorem3Threshold> {
    let d = form.degree();
    require_degree(d, 5)?;
    if !(eps > 0.0 && eps < (d - 4) as f64) {
        return Err(ThueError::Domain(format!("eps = {eps} must lie in (0, {})", d - 4)));
    }
    let disc = form.require_separable()?.abs();
    let df = d as f64;
    let e12 = Interval::point(eps) / Interval::point(12.0);
    let log_d = Interval::from_bigint(&disc).ln();
    // (m/|D|)^{1+ε/12} > m  <=>  m > |D|^{(12+ε)/ε}
    let exponent = (Interval::point(12.0) + Interval::point(eps)) / Interval::point(eps);
    let log_first = exponent * log_d;
    let first: BigInt = match exact_exponent(eps) {
        Some(n) => disc.pow(n) + 1,
        None => exp_ceil(log_first.hi) + 1,
    };
    // (m/|D|)^{ε/12} ≥ K  <=>  m ≥ |D|·K^{12/ε}
    let h = height_h(form)?;
    let log_h = Interval::new(h * (1.0 - 2e-9), h * (1.0 + 2e-9)).ln();
    let pi = Interval::new(std::f64::consts::PI.next_down(), std::f64::consts::PI.next_up());
    let dm2 = Interval::point(df - 2.0);
    let log_k = dm2 * Interval::point(2.0).ln() + dm2 * log_h
        - (Interval::point(1.0) + Interval::point(eps / 2.0)) * (Interval::point(2.0) / pi).ln()
        - log_d * Interval::point(0.5);
    let log_second = log_d + log_k / e12;
    let second = exp_ceil(log_second.hi);
    let m0 = first.max(second).max(BigInt::one());
    let log_m0 = log_first.max(log_second);
    let value = m0.to_f64().unwrap_or(f64::INFINITY);
    let approx = log_m0.exp();
    let interval = Interval::new(approx.lo.min(value), approx.hi.max(value));
    let report = BoundReport::build(
        BoundKind::Theorem3Threshold,
        vec![
            ("d", d.to_string()),
            ("eps", eps.to_string()),
            ("|D(F)|", disc.to_string()),
            ("H(F)", format_sig(h, 12)),
            ("M0", m0.to_string()),
            ("log10_M0", format_sig(log_m0.hi / std::f64::consts::LN_10, 12)),
        ],
        value,
        interval,
        vec![
            SideCondition::new("d>=5", true),
            SideCondition::new("0<eps<d-4", true),
            SideCondition::new("m(F)>=m/|D(F)| used for both conditions", true),
        ],
    )?;
    Ok(Theorem3Threshold { m0, log_first, log_second, report })
}

/// One lattice of determinant m(F) in the exceptionality classification.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeClassification {
    pub lattice: Lattice2,
    /// Primitive solutions of |F| ≤ m in the lattice and region.
    pub solutions: Vec<(i64, i64)>,
    /// One representative per ± pair, split by verdict.
    pub exceptional: Vec<(i64, i64)>,
    pub non_exceptional: Vec<(i64, i64)>,
    /// Every non-exceptional pair has norm below m(F)^{1/2-δ}.
    pub below_norm_bound: bool,
}

impl LatticeClassification {
    pub fn claims_hold(&self) -> bool {
        self.non_exceptional.len() <= 1 && self.below_norm_bound
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem3Report {
    pub m: BigInt,
    pub m_f: BigInt,
    pub eps: f64,
    /// The exceptionality exponent d - 4 - ε.
    pub exponent: f64,
    /// δ = ε/(3(2+ε)).
    pub delta: f64,
    pub threshold: Theorem3Threshold,
    pub side_conditions: Vec<SideCondition>,
    pub region: SearchRegion,
    pub lattices: Vec<LatticeClassification>,
}

impl Theorem3Report {
    /// At most one non-exceptional ± pair per lattice, each below the norm
    /// bound.
    pub fn claims_hold(&self) -> bool {
        self.lattices.iter().all(LatticeClassification::claims_hold)
    }

    pub fn side_conditions_hold(&self) -> bool {
        self.side_conditions.iter().all(|c| c.holds == Some(true))
    }
}

fn pair_rep((x, y): (i64, i64)) -> (i64, i64) {
    if y < 0 || (y == 0 && x < 0) {
        (-x, -y)
    } else {
        (x, y)
    }
}

/// Classify the primitive solutions of |F| ≤ m in each lattice of
/// determinant m(F) as (d-4-ε)-exceptional or not.
pub fn theorem3_classify(
    form: &BinaryForm,
    m: &BigInt,
    eps: f64,
    region: &SearchRegion,
    factor_budget: u64,
    point_budget: u64,
) -> Result<Theorem3Report> {
    let d = form.degree();
    if d < 5 || !(eps > 0.0 && eps < (d - 4) as f64) {
        return Err(ThueError::HypothesisViolated(format!("need d >= 5 and 0 < eps < d - 4, got d = {d}, eps = {eps}")));
    }
    if !form.content().is_one() {
        return Err(ThueError::HypothesisViolated(format!("{form} has content {}", form.content())));
    }
    let threshold = theorem3_threshold(form, eps)?;
    let m_f = m_of_f(form, m, factor_budget)?;
    let exponent = d as f64 - 4.0 - eps;
    let delta = eps / (3.0 * (2.0 + eps));
    // ‖v‖² < m(F)^{1-2δ}
    let norm_sq_bound = (Interval::point(1.0) - Interval::point(2.0) * Interval::point(delta))
        * Interval::from_bigint(&m_f).ln();
    let inst = ThueInstance::new(form.clone(), m.clone(), Mode::Leq)?;
    let mut lattices = Vec::new();
    for lattice in theorem1_lattices(form, &m_f, factor_budget)? {
        let sols: Vec<(i64, i64)> = lattice_solutions(&inst, &lattice, region, point_budget)?
            .iter()
            .map(|s| Ok((crate::arith::to_i64(&s.x, "x")?, crate::arith::to_i64(&s.y, "y")?)))
            .collect::<Result<_>>()?;
        let mut reps: Vec<(i64, i64)> = sols.iter().map(|&p| pair_rep(p)).collect();
        reps.sort_unstable();
        reps.dedup();
        let mut exceptional = Vec::new();
        let mut non_exceptional = Vec::new();
        for (x, y) in reps {
            let v = epsilon_exceptional(form, (&BigInt::from(x), &BigInt::from(y)), exponent)?;
            if v.verdict {
                exceptional.push((x, y));
            } else {
                non_exceptional.push((x, y));
            }
        }
        let below_norm_bound = non_exceptional.iter().all(|&(x, y)| {
            let n2 = BigInt::from(x) * x + BigInt::from(y) * y;
            Interval::from_bigint(&n2).ln().certainly_lt(&norm_sq_bound)
        });
        lattices.push(LatticeClassification { lattice, solutions: sols, exceptional, non_exceptional, below_norm_bound });
    }
    let side_conditions = vec![
        SideCondition::new("m>=c(F,eps)", *m >= threshold.m0),
        SideCondition::new("region complete", region.complete),
    ];
    Ok(Theorem3Report {
        m: m.clone(),
        m_f,
        eps,
        exponent,
        delta,
        threshold,
        side_conditions,
        region: *region,
        lattices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::DEFAULT_FACTOR_BUDGET;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn theorem2_spot_values() {
        let r = theorem2_bound(3, &big(1_000_000), 625.0).unwrap();
        assert_eq!(r.name, BoundKind::Theorem2LargeA);
        assert!((r.value - 347.012_236_301_158_6).abs() < 1e-9);
        let r = theorem2_bound(3, &big(1_000_000), 312.5).unwrap();
        assert_eq!(r.name, BoundKind::Theorem2SmallA);
        assert!((r.value - 1_388.048_945_204_634_4).abs() < 1e-8);
        let r = theorem2_bound(5, &big(1_000_000), 625.0).unwrap();
        assert!((r.value - 343.193_785_410_160_5).abs() < 1e-9);
        assert!(matches!(theorem2_bound(2, &big(10), 1.0), Err(ThueError::Domain(_))));
    }

    #[test]
    fn corollary_and_stewart() {
        let r = corollary_bound(3, &big(1_000_000), 1.0, 3).unwrap();
        assert!((r.value - 1_057_123.535_056_345_6).abs() < 1e-6);
        assert_eq!(corollary_bound(3, &big(1_000_000), 1.0, 0).unwrap().value, 0.0);
        let r = stewart_bound(3, 1.0, 0, None).unwrap();
        assert_eq!(r.value, 17500.0);
        assert_eq!(r.side_conditions[0].holds, None);
        assert_eq!(stewart_bound(3, 1.0, 2, None).unwrap().value, 17500.0 * 9.0);
    }

    #[test]
    fn stewart_side_condition_is_evaluated() {
        // m = 7, m' = 7, |D| = 27: 7^2 >= 7^{5/3}/27^{1/6}
        let ctx = StewartContext { m: big(7), m_prime: big(7), disc: big(-27) };
        let r = stewart_bound(3, 1.0, 1, Some(&ctx)).unwrap();
        assert!(r.side_conditions.iter().all(|c| c.holds == Some(true)));
    }

    #[test]
    fn proposition_and_lemmas() {
        let b = 5f64.powi(6);
        let r = proposition_bound(3, &big(1_000_000), Interval::point(b)).unwrap();
        assert!((r.value - 345.728_486_836_072_9).abs() < 1e-9);
        assert_eq!(r.side_conditions[0].holds, Some(true));
        let r = proposition_bound(3, &big(1_000_000), Interval::point(5.0)).unwrap();
        assert_eq!(r.side_conditions[0].holds, Some(false));

        let l = lemma_bounds(3, 2.0, b, b * b, b.powi(8)).unwrap();
        assert_eq!(l.lemma6.value, 30.0);
        assert!((l.lemma7.value - 24.0).abs() < 1e-9);
        let l = lemma_bounds(5, 2.0, 2.0, 4.0, 8.0).unwrap();
        assert!((l.lemma8.value - 136.485_575_702_715_5).abs() < 1e-9);
        assert!(lemma_bounds(3, 2.0, 10.0, 5.0, 100.0).is_err());
    }

    #[test]
    fn a_for_cubic_lattice() {
        let f = BinaryForm::from_i64(&[1, 0, 0, 1]).unwrap();
        let l = Lattice2::new(7, 3, 1).unwrap();
        let a = a_of_lattice(&f, &big(7), &l).unwrap();
        assert!(a.contains(3.313_293_999_944_604));
        assert!(a.width() < 1e-12);
    }

    #[test]
    fn theorem2_check_on_definite_quartic() {
        let f = BinaryForm::from_i64(&[1, 0, 0, 1, 1]).unwrap();
        let m = big(100);
        let inst = ThueInstance::new(f.clone(), m.clone(), Mode::Leq).unwrap();
        let region = crate::enumeration::default_region(&inst, 100.0);
        assert!(region.complete);
        // Λ = Z(1, 1) + 4000 Z² has A ≥ 5^4
        let l = crate::lattices::hnf_from_generators(&[(1, 1), (4000, 0), (0, 4000)]).unwrap();
        let c = theorem2_check(&f, &m, &l, &region, 1_000_000).unwrap();
        assert!(c.a.lo >= 625.0, "{:?}", c.a);
        assert_eq!(c.count, 2);
        assert!(c.holds());
    }

    #[test]
    fn shear_scan_on_unit_lattice() {
        let f = BinaryForm::from_i64(&[1, 0, 0, 1]).unwrap();
        let r = heights_of_lattice(&f, &Lattice2::unit(), &big(2), &[(1, 1)]).unwrap();
        assert!((r.h - 2.828_427_124_746_19).abs() < 1e-8);
        let up = r.m_of_lm_upper.unwrap();
        assert!((up - 4.472_135_954_999_579).abs() < 1e-8, "{up}");
        assert!(r.m_upper <= r.h);
        assert!(r.m_lower <= r.m_upper);
        assert!(heights_of_lattice(&f, &Lattice2::unit(), &big(1), &[(1, 1)]).is_err());
    }

    #[test]
    fn threshold_for_quintic() {
        let f = BinaryForm::from_i64(&[1, 0, 0, 0, 0, -2]).unwrap();
        let t = theorem3_threshold(&f, 0.5).unwrap();
        assert_eq!(t.m0, BigInt::from(50_000).pow(25) + 1);
        assert!((t.log_second.mid() / std::f64::consts::LN_10 - 41.640_340_397_44).abs() < 1e-6);
        assert!(matches!(theorem3_threshold(&f, 1.0), Err(ThueError::Domain(_))));
        let cubic = BinaryForm::from_i64(&[1, 0, 0, 1]).unwrap();
        assert!(matches!(theorem3_threshold(&cubic, 0.5), Err(ThueError::Domain(_))));
    }

    #[test]
    fn larger_discriminant_raises_first_threshold() {
        let f = BinaryForm::from_i64(&[1, 0, 0, 0, 0, -2]).unwrap();
        let g = BinaryForm::from_i64(&[1, 0, 0, 0, 0, -3]).unwrap();
        let tf = theorem3_threshold(&f, 0.5).unwrap();
        let tg = theorem3_threshold(&g, 0.5).unwrap();
        assert!(tg.log_first.lo > tf.log_first.hi);
    }

    #[test]
    fn classify_below_threshold_reports_side_condition() {
        let f = BinaryForm::from_i64(&[1, 0, 0, 0, 0, -2]).unwrap();
        let r = theorem3_classify(&f, &big(151), 0.5, &SearchRegion::user(60.0), DEFAULT_FACTOR_BUDGET, 1_000_000)
            .unwrap();
        assert_eq!(r.m_f, big(151));
        assert_eq!(r.lattices.len(), 5);
        assert_eq!(r.side_conditions[0].holds, Some(false));
        for l in &r.lattices {
            assert_eq!(l.exceptional.len() + l.non_exceptional.len(), l.solutions.len().div_ceil(2));
        }
    }

    #[test]
    fn sig_formatting() {
        assert_eq!(format_sig(347.012_236_3, 6), "347.012");
        assert_eq!(format_sig(17500.0, 6), "17500");
        assert_eq!(format_sig(0.117_647_058_823_529_4, 12), "0.117647058824");
        assert_eq!(format_sig(1.25e120, 3), "1.25e120");
    }
}
