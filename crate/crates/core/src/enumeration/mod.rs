//! Primitive solutions of `|F(x, y)| = m` and `|F(x, y)| <= m`.

pub mod contfrac;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Result, ThueError};
use crate::forms::{complex_factorization, height_interval, min_on_unit_circle, BinaryForm, FastEval};
use crate::forms::{LinearFactor, DEFAULT_PRECISION_BITS};
use crate::interval::Interval;
use crate::lattices::{for_each_point, radius_to_norm_sq, theorem1_lattices, Lattice2};
use contfrac::{f64_to_dyadic_ceil, RealRoot};

/// Radius used when no finite search region is provably complete.
pub const DEFAULT_RADIUS: f64 = 1000.0;

/// Default cap on scanned points.
pub const DEFAULT_POINT_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `|F(x, y)| = m`
    Eq,
    /// `|F(x, y)| <= m`
    Leq,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Eq => "eq",
            Mode::Leq => "leq",
        })
    }
}

impl FromStr for Mode {
    type Err = ThueError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eq" => Ok(Mode::Eq),
            "leq" => Ok(Mode::Leq),
            _ => Err(ThueError::Parse(format!("mode must be eq or leq, got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThueInstance {
    form: BinaryForm,
    m: BigInt,
    mode: Mode,
}

impl ThueInstance {
    pub fn new(form: BinaryForm, m: BigInt, mode: Mode) -> Result<Self> {
        form.require_primitive()?;
        form.require_separable()?;
        if m < BigInt::one() {
            return Err(ThueError::RejectedInput(format!("m = {m} must be at least 1")));
        }
        Ok(ThueInstance { form, m, mode })
    }

    pub fn form(&self) -> &BinaryForm {
        &self.form
    }

    pub fn m(&self) -> &BigInt {
        &self.m
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn accepts(&self, value: &BigInt) -> bool {
        let v = value.abs();
        match self.mode {
            Mode::Eq => v == self.m,
            Mode::Leq => v <= self.m,
        }
    }

    fn accepts_small(&self, value: i128, m_small: Option<i128>) -> Option<bool> {
        let m = m_small?;
        let v = value.checked_abs()?;
        Some(match self.mode {
            Mode::Eq => v == m,
            Mode::Leq => v <= m,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Brute,
    Lattice(Lattice2),
    /// Index of the real factor in the sorted complex factorization.
    Convergent(usize),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Brute => f.write_str("brute"),
            Provenance::Lattice(l) => {
                let (a, b, c) = l.abc();
                write!(f, "lattice({a} {b} {c})")
            }
            Provenance::Convergent(i) => write!(f, "convergent({i})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionRecord {
    pub x: BigInt,
    pub y: BigInt,
    pub value: BigInt,
    pub provenance: Provenance,
    pub norm_sq: BigInt,
}

impl SolutionRecord {
    fn new(x: BigInt, y: BigInt, value: BigInt, provenance: Provenance) -> Self {
        let norm_sq = &x * &x + &y * &y;
        SolutionRecord { x, y, value, provenance, norm_sq }
    }

    fn sort_key(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.norm_sq, &self.x, &self.y)
    }

    pub fn point(&self) -> (&BigInt, &BigInt) {
        (&self.x, &self.y)
    }

    pub fn csv_row(&self) -> String {
        format!("{},{},{},{},{}", self.x, self.y, self.value, self.provenance, self.norm_sq)
    }
}

pub const SOLUTION_CSV_HEADER: &str = "x,y,value,provenance,norm_sq";

pub fn sort_solutions(sols: &mut [SolutionRecord]) {
    sols.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Justification {
    /// `|F(v)| >= μ‖v‖^d` with μ > 0 bounds every solution.
    DefiniteForm,
    UserRadius,
    /// Brute region extended by the convergent scan up to some y bound.
    ConvergentExtended,
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Justification::DefiniteForm => "definite-form",
            Justification::UserRadius => "user-radius",
            Justification::ConvergentExtended => "convergent-extended",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchRegion {
    pub radius: f64,
    pub complete: bool,
    pub justification: Justification,
}

impl SearchRegion {
    pub fn user(radius: f64) -> Self {
        SearchRegion { radius, complete: false, justification: Justification::UserRadius }
    }

    pub fn max_norm_sq(&self) -> i128 {
        radius_to_norm_sq(self.radius)
    }
}

/// Complete region `(m/μ)^{1/d}` for definite forms, otherwise the given
/// fallback radius marked incomplete.
pub fn default_region(inst: &ThueInstance, fallback_radius: f64) -> SearchRegion {
    let mu = min_on_unit_circle(&inst.form);
    if mu > 0.0 {
        let d = inst.form.degree() as f64;
        let ratio = Interval::from_bigint(&inst.m) / Interval::point(mu);
        let r = ratio.powf(1.0 / d).hi;
        SearchRegion { radius: r.next_up(), complete: true, justification: Justification::DefiniteForm }
    } else {
        SearchRegion::user(fallback_radius)
    }
}

fn check_region(region: &SearchRegion) -> Result<()> {
    if !(region.radius.is_finite() && region.radius >= 0.0) {
        return Err(ThueError::RejectedInput(format!("radius {} must be finite and nonnegative", region.radius)));
    }
    Ok(())
}

/// Every primitive solution with ‖(x, y)‖ ≤ radius, scanning the disk in
/// `shards` horizontal strips on separate threads.
pub fn brute_solutions(
    inst: &ThueInstance,
    region: &SearchRegion,
    shards: usize,
    budget: u64,
) -> Result<Vec<SolutionRecord>> {
    check_region(region)?;
    let r2 = region.max_norm_sq();
    let r = r2.sqrt_floor();
    let side = 2.0 * r as f64 + 1.0;
    if side * side > budget as f64 {
        return Err(ThueError::BudgetExceeded(format!("radius {} scans more than {budget} points", region.radius)));
    }
    let r = r as i64;
    let fast = FastEval::new(&inst.form);
    let m_small = inst.m.to_i128();
    let shards = shards.max(1);
    let rows: Vec<i64> = (-r..=r).collect();
    let chunk = rows.len().div_ceil(shards).max(1);
    let scan = |ys: &[i64]| -> Vec<SolutionRecord> {
        let mut out = Vec::new();
        for &y in ys {
            let w = (r2 - i128::from(y) * i128::from(y)).sqrt_floor() as i64;
            for x in -w..=w {
                if x.gcd(&y) != 1 {
                    continue;
                }
                let hit = match fast.eval(x, y) {
                    Some(v) => inst.accepts_small(v, m_small).unwrap_or_else(|| inst.accepts(&BigInt::from(v))),
                    None => inst.accepts(&inst.form.evaluate_i64(x, y)),
                };
                if hit {
                    let value = inst.form.evaluate_i64(x, y);
                    out.push(SolutionRecord::new(x.into(), y.into(), value, Provenance::Brute));
                }
            }
        }
        out
    };
    let mut all: Vec<SolutionRecord> = std::thread::scope(|s| {
        let handles: Vec<_> = rows.chunks(chunk).map(|ys| s.spawn(move || scan(ys))).collect();
        handles.into_iter().flat_map(|h| h.join().expect("scan thread panicked")).collect()
    });
    sort_solutions(&mut all);
    Ok(all)
}

trait SqrtFloor {
    fn sqrt_floor(self) -> i128;
}

impl SqrtFloor for i128 {
    fn sqrt_floor(self) -> i128 {
        if self <= 0 {
            0
        } else {
            num_integer::Roots::sqrt(&self)
        }
    }
}

/// Primitive solutions among the points of `lattice` inside the region.
pub fn lattice_solutions(
    inst: &ThueInstance,
    lattice: &Lattice2,
    region: &SearchRegion,
    budget: u64,
) -> Result<Vec<SolutionRecord>> {
    check_region(region)?;
    let fast = FastEval::new(&inst.form);
    let m_small = inst.m.to_i128();
    let mut out = Vec::new();
    for_each_point(lattice, region.max_norm_sq(), budget, |x, y| {
        if x.gcd(&y) != 1 {
            return;
        }
        let hit = match fast.eval(x, y) {
            Some(v) => inst.accepts_small(v, m_small).unwrap_or_else(|| inst.accepts(&BigInt::from(v))),
            None => inst.accepts(&inst.form.evaluate_i64(x, y)),
        };
        if hit {
            let value = inst.form.evaluate_i64(x, y);
            out.push(SolutionRecord::new(x.into(), y.into(), value, Provenance::Lattice(*lattice)));
        }
    })?;
    sort_solutions(&mut out);
    Ok(out)
}

/// Result of scanning continued fraction convergents of the real roots.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergentScan {
    /// Y₁: every primitive solution with |y| ≥ Y₁ has x/y a convergent of a
    /// real root.
    pub threshold: BigInt,
    pub y_max: BigInt,
    pub solutions: Vec<SolutionRecord>,
    /// False when F(1, 0) = 0, where the approximation bound does not cover
    /// the root at infinity.
    pub complete: bool,
}

/// Smallest Y ≥ 1 with Y^{d-2} > 2C and C/Y^d below every |Im α| of a
/// non-real root, where C = d·2^{d-1}·m·H^{d-2}/|D|^{1/2}.
pub fn convergent_threshold(inst: &ThueInstance) -> Result<BigInt> {
    let form = &inst.form;
    let d = form.degree();
    if d < 3 {
        return Err(ThueError::RejectedInput("convergent scan needs degree at least 3".into()));
    }
    let cf = complex_factorization(form, DEFAULT_PRECISION_BITS)?;
    let disc = form.discriminant();
    let ln2 = Interval::point(2.0).ln();
    let dm2 = Interval::point((d - 2) as f64);
    let log_c = Interval::point(d as f64).ln()
        + Interval::point((d - 1) as f64) * ln2
        + Interval::from_bigint(&inst.m).ln()
        + dm2 * height_interval(&cf).ln()
        - Interval::from_bigint(&disc.abs()).ln() * Interval::point(0.5);
    let min_im = cf
        .factors
        .iter()
        .filter(|l| !l.is_real())
        .filter_map(|l| l.root().map(|r| r.im_interval().abs()))
        .fold(None, |acc: Option<Interval>, v| Some(acc.map_or(v, |a| a.min(v))));
    if let Some(mi) = min_im {
        if mi.lo <= 0.0 {
            return Err(ThueError::PrecisionFailure("imaginary parts not separated from zero".into()));
        }
    }
    let ok = |y: &BigInt| -> bool {
        let ly = Interval::from_bigint(y).ln();
        let first = (ln2 + log_c).certainly_lt(&(dm2 * ly));
        let second = match min_im {
            Some(mi) => (log_c - Interval::point(d as f64) * ly).certainly_lt(&mi.ln()),
            None => true,
        };
        first && second
    };
    // the condition is monotone in y: bracket, then bisect
    let mut est = ((ln2 + log_c).hi / (d - 2) as f64).max(0.0);
    if let Some(mi) = min_im {
        est = est.max((log_c.hi - mi.ln().lo) / d as f64);
    }
    let mut hi = f64_to_dyadic_ceil(est.exp() * 1.001, 0) + 2;
    while !ok(&hi) {
        hi *= 2;
    }
    let mut lo = BigInt::zero();
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) / 2;
        if ok(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let y = hi;
    Ok(y)
}

pub fn convergent_scan(inst: &ThueInstance, y_max: &BigInt) -> Result<ConvergentScan> {
    let form = &inst.form;
    let cf = complex_factorization(form, DEFAULT_PRECISION_BITS)?;
    if cf.factors.iter().all(|l| !matches!(l, LinearFactor::Finite(r) if r.real)) {
        return Err(ThueError::RejectedInput(format!("{form} has no real finite root")));
    }
    let threshold = convergent_threshold(inst)?;
    let (poly, lead) = form.affine_part();
    let mut found: Vec<SolutionRecord> = Vec::new();
    for (i, l) in cf.factors.iter().enumerate() {
        let LinearFactor::Finite(disk) = l else { continue };
        if !disk.real {
            continue;
        }
        let r = f64_to_dyadic_ceil(disk.radius, disk.shift).max(BigInt::one());
        let mut root = RealRoot::new(poly.clone(), &disk.re - &r, &disk.re + &r, disk.shift)?;
        for (p, q) in root.convergents_up_to(y_max) {
            if q < threshold {
                continue;
            }
            let value = form.evaluate(&p, &q);
            if inst.accepts(&value) {
                let neg = if form.degree().is_multiple_of(2) { value.clone() } else { -value.clone() };
                found.push(SolutionRecord::new(-p.clone(), -q.clone(), neg, Provenance::Convergent(i)));
                found.push(SolutionRecord::new(p, q, value, Provenance::Convergent(i)));
            }
        }
    }
    sort_solutions(&mut found);
    found.dedup_by(|a, b| a.x == b.x && a.y == b.y);
    Ok(ConvergentScan { threshold, y_max: y_max.clone(), solutions: found, complete: lead == 0 })
}

/// Outcome of checking that the Theorem 1 lattices cover all points with
/// m | F(x, y) in a region.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverReport {
    pub lattices: Vec<Lattice2>,
    /// Primitive solutions of |F| = m inside each lattice.
    pub solution_counts: Vec<usize>,
    /// Primitive points with m | F inside each lattice.
    pub divisible_counts: Vec<usize>,
    pub divisible_total: usize,
    /// Primitive points with m | F lying in no lattice.
    pub violations: Vec<(i64, i64)>,
}

pub fn theorem1_cover_check(
    form: &BinaryForm,
    m: &BigInt,
    region: &SearchRegion,
    factor_budget: u64,
    point_budget: u64,
) -> Result<CoverReport> {
    check_region(region)?;
    let lattices = theorem1_lattices(form, m, factor_budget)?;
    let r2 = region.max_norm_sq();
    let r = r2.sqrt_floor() as i64;
    let side = 2.0 * r as f64 + 1.0;
    if side * side > point_budget as f64 {
        return Err(ThueError::BudgetExceeded(format!("radius {} exceeds the point budget", region.radius)));
    }
    let mut solution_counts = vec![0usize; lattices.len()];
    let mut divisible_counts = vec![0usize; lattices.len()];
    let mut divisible_total = 0;
    let mut violations = Vec::new();
    for y in -r..=r {
        let w = (r2 - i128::from(y) * i128::from(y)).sqrt_floor() as i64;
        for x in -w..=w {
            if x.gcd(&y) != 1 {
                continue;
            }
            let value = form.evaluate_i64(x, y);
            if !value.is_multiple_of(m) {
                continue;
            }
            divisible_total += 1;
            let is_solution = value.abs() == *m;
            let mut covered = false;
            for (i, l) in lattices.iter().enumerate() {
                if l.contains(x, y) {
                    covered = true;
                    divisible_counts[i] += 1;
                    if is_solution {
                        solution_counts[i] += 1;
                    }
                }
            }
            if !covered {
                violations.push((x, y));
            }
        }
    }
    Ok(CoverReport { lattices, solution_counts, divisible_counts, divisible_total, violations })
}

/// Brute solutions inside the region merged with the convergent scan (when
/// F has a real root and degree ≥ 3), deduplicated and sorted.
pub fn solve(
    inst: &ThueInstance,
    region: &SearchRegion,
    y_max: Option<&BigInt>,
    shards: usize,
    budget: u64,
) -> Result<(Vec<SolutionRecord>, SearchRegion, Option<ConvergentScan>)> {
    let mut sols = brute_solutions(inst, region, shards, budget)?;
    let mut region = *region;
    let mut scan = None;
    if let Some(y_max) = y_max {
        let has_real = min_on_unit_circle(&inst.form) == 0.0;
        if has_real && inst.form.degree() >= 3 {
            let s = convergent_scan(inst, y_max)?;
            for rec in &s.solutions {
                if !sols.iter().any(|o| o.x == rec.x && o.y == rec.y) {
                    sols.push(rec.clone());
                }
            }
            region.justification = Justification::ConvergentExtended;
            scan = Some(s);
        }
    }
    sort_solutions(&mut sols);
    Ok((sols, region, scan))
}

/// Is the point primitive?
pub fn is_primitive(x: &BigInt, y: &BigInt) -> bool {
    x.gcd(y).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::DEFAULT_FACTOR_BUDGET;

    fn inst(s: &str, m: i64, mode: Mode) -> ThueInstance {
        ThueInstance::new(s.parse().unwrap(), BigInt::from(m), mode).unwrap()
    }

    fn points(sols: &[SolutionRecord]) -> Vec<(i64, i64)> {
        sols.iter().map(|s| (s.x.to_i64().unwrap(), s.y.to_i64().unwrap())).collect()
    }

    #[test]
    fn sum_of_cubes_seven() {
        let t = inst("3: 1 0 0 1", 7, Mode::Eq);
        let sols = brute_solutions(&t, &SearchRegion::user(50.0), 4, DEFAULT_POINT_BUDGET).unwrap();
        assert_eq!(points(&sols), vec![(-2, 1), (-1, 2), (1, -2), (2, -1)]);
        let l = Lattice2::new(7, 5, 1).unwrap();
        let ls = lattice_solutions(&t, &l, &SearchRegion::user(50.0), DEFAULT_POINT_BUDGET).unwrap();
        assert_eq!(points(&ls), vec![(-2, 1), (2, -1)]);
        let l = Lattice2::new(7, 6, 1).unwrap();
        assert!(lattice_solutions(&t, &l, &SearchRegion::user(50.0), DEFAULT_POINT_BUDGET).unwrap().is_empty());
    }

    #[test]
    fn shard_count_does_not_change_output() {
        let t = inst("3: 1 0 0 -2", 6, Mode::Leq);
        let a = brute_solutions(&t, &SearchRegion::user(100.0), 1, DEFAULT_POINT_BUDGET).unwrap();
        let b = brute_solutions(&t, &SearchRegion::user(100.0), 7, DEFAULT_POINT_BUDGET).unwrap();
        assert_eq!(a, b);
        let pts = points(&a);
        for p in [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (5, 4)] {
            assert!(pts.contains(&p) && pts.contains(&(-p.0, -p.1)), "{p:?}");
        }
    }

    #[test]
    fn regions() {
        let r = default_region(&inst("4: 1 0 0 0 1", 16, Mode::Eq), DEFAULT_RADIUS);
        assert!(r.complete && (r.radius - 32f64.powf(0.25)).abs() < 1e-6);
        let r = default_region(&inst("2: 1 0 1", 25, Mode::Eq), DEFAULT_RADIUS);
        assert!(r.complete && (r.radius - 5.0).abs() < 1e-6);
        assert_eq!(r.max_norm_sq(), 25);
        let r = default_region(&inst("3: 1 0 0 -2", 5, Mode::Eq), DEFAULT_RADIUS);
        assert!(!r.complete && r.radius == DEFAULT_RADIUS);
    }

    #[test]
    fn convergent_thresholds() {
        assert_eq!(convergent_threshold(&inst("3: 1 0 0 -2", 6, Mode::Leq)).unwrap(), BigInt::from(58));
        assert_eq!(convergent_threshold(&inst("3: 1 0 0 -2", 1, Mode::Eq)).unwrap(), BigInt::from(10));
    }

    #[test]
    fn convergent_examples() {
        let y_max: BigInt = "1000000000000000000000000000000".parse().unwrap();
        let s = convergent_scan(&inst("3: 1 0 0 -2", 6, Mode::Leq), &y_max).unwrap();
        assert!(s.solutions.is_empty());
        let s = convergent_scan(&inst("3: 1 0 0 -2", 1, Mode::Eq), &BigInt::from(1_000_000)).unwrap();
        assert!(s.solutions.is_empty());
        assert!(s.complete);
        // (1, 1) sits below the threshold and is found by the scan of the disk
        let t = inst("3: 1 0 0 -2", 1, Mode::Eq);
        let (sols, region, _) =
            solve(&t, &SearchRegion::user(20.0), Some(&BigInt::from(1_000_000)), 2, DEFAULT_POINT_BUDGET).unwrap();
        assert_eq!(points(&sols), vec![(-1, 0), (1, 0), (-1, -1), (1, 1)]);
        assert_eq!(region.justification, Justification::ConvergentExtended);
        assert!(matches!(
            convergent_scan(&inst("2: 1 0 1", 1, Mode::Eq), &BigInt::from(10)),
            Err(ThueError::RejectedInput(_))
        ));
    }

    #[test]
    fn convergent_scan_finds_solution_above_threshold() {
        // 18³ - 17·7³ = 1 and 18/7 is a convergent of 17^{1/3}; the real root sorts last
        let t = inst("3: 1 0 0 -17", 1, Mode::Eq);
        assert_eq!(convergent_threshold(&t).unwrap(), BigInt::from(6));
        let s = convergent_scan(&t, &BigInt::from(1_000_000)).unwrap();
        assert_eq!(points(&s.solutions), vec![(-18, -7), (18, 7)]);
        assert!(s.solutions.iter().all(|r| r.provenance == Provenance::Convergent(2)));
        let small = convergent_scan(&t, &BigInt::from(1000)).unwrap();
        assert_eq!(small.solutions, s.solutions);
    }

    #[test]
    fn cover_examples() {
        let f: BinaryForm = "3: 1 0 0 1".parse().unwrap();
        let rep = theorem1_cover_check(&f, &BigInt::from(7), &SearchRegion::user(50.0), DEFAULT_FACTOR_BUDGET, DEFAULT_POINT_BUDGET)
            .unwrap();
        let mut counts = rep.solution_counts.clone();
        counts.sort();
        assert_eq!(counts, vec![0, 2, 2]);
        assert!(rep.violations.is_empty());
        let q: BinaryForm = "2: 1 0 1".parse().unwrap();
        let rep = theorem1_cover_check(&q, &BigInt::from(5), &SearchRegion::user(10.0), DEFAULT_FACTOR_BUDGET, DEFAULT_POINT_BUDGET)
            .unwrap();
        assert_eq!(rep.lattices.len(), 2);
        assert!(rep.violations.is_empty() && rep.divisible_total > 0);
        let rep = theorem1_cover_check(&f, &BigInt::from(2), &SearchRegion::user(30.0), DEFAULT_FACTOR_BUDGET, DEFAULT_POINT_BUDGET)
            .unwrap();
        assert_eq!(rep.lattices.len(), 1);
        assert!(rep.violations.is_empty());
    }
}
