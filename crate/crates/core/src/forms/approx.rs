//! Heights and archimedean approximation tests.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::roots::complex_factorization_capped;
use super::{BinaryForm, ComplexFactorization, DEFAULT_PRECISION_BITS, DEFAULT_PRECISION_CAP};
use crate::error::{Result, ThueError};
use crate::interval::Interval;

/// Enclosure of H(F) = ∏‖L_i‖ for `F = ∏ L_i`.
pub fn height_interval(cf: &ComplexFactorization) -> Interval {
    cf.factors
        .iter()
        .fold(Interval::from_bigint(&cf.scale.abs()), |acc, l| acc * l.norm_interval())
}

/// H(F) with relative error at most 1e-9.
pub fn height_h(form: &BinaryForm) -> Result<f64> {
    let mut bits = DEFAULT_PRECISION_BITS;
    loop {
        let cf = complex_factorization_capped(form, bits, DEFAULT_PRECISION_CAP)?;
        let h = height_interval(&cf);
        if h.rel_width() <= 1e-9 {
            return Ok(h.mid());
        }
        if cf.precision >= DEFAULT_PRECISION_CAP {
            return Err(ThueError::PrecisionFailure(format!("height of {form} not resolved to 1e-9")));
        }
        bits = cf.precision * 2;
    }
}

/// Certified lower bound for min |F(u)| over unit vectors u. Exactly 0 when
/// F has a real linear factor.
pub fn min_on_unit_circle(form: &BinaryForm) -> f64 {
    if !form.discriminant().is_zero() {
        if let Ok(cf) = complex_factorization_capped(form, DEFAULT_PRECISION_BITS, DEFAULT_PRECISION_CAP) {
            if cf.real_count() > 0 {
                return 0.0;
            }
        }
    }
    circle_lower_bound(form, 1e-10)
}

#[derive(PartialEq)]
struct Cell {
    lower: f64,
    a: f64,
    b: f64,
}

impl Eq for Cell {}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cell {
    // smallest lower bound first
    fn cmp(&self, other: &Self) -> Ordering {
        other.lower.total_cmp(&self.lower)
    }
}

/// Branch and bound on g(θ) = F(cos θ, sin θ), θ ∈ [0, π], using
/// |g(θ)| ≥ |g(c)| - |g'(c)|h - K h²/2 on |θ - c| ≤ h with K ≥ max|g''|.
fn circle_lower_bound(form: &BinaryForm, tol: f64) -> f64 {
    let d = form.degree();
    let coeffs: Vec<f64> = form.coeffs().iter().map(|a| Interval::from_bigint(a).mid()).collect();
    let l1: f64 = coeffs.iter().map(|a| a.abs()).sum();
    let k2 = (d * d) as f64 * l1;
    // floating-point evaluation error allowance for g and g'
    let err = 64.0 * (d as f64 + 1.0) * f64::EPSILON * l1 * (1.0 + d as f64);
    let eval = |t: f64| -> (f64, f64) {
        let (c, s) = (t.cos(), t.sin());
        let (mut g, mut dg) = (0.0, 0.0);
        for (i, a) in coeffs.iter().enumerate() {
            let p = (d - i) as i32;
            let q = i as i32;
            let term = c.powi(p) * s.powi(q);
            g += a * term;
            // d/dθ cos^p sin^q = -p cos^{p-1} sin^{q+1} + q cos^{p+1} sin^{q-1}
            let mut dt = 0.0;
            if p > 0 {
                dt -= p as f64 * c.powi(p - 1) * s.powi(q + 1);
            }
            if q > 0 {
                dt += q as f64 * c.powi(p + 1) * s.powi(q - 1);
            }
            dg += a * dt;
        }
        (g, dg)
    };
    let bound = |a: f64, b: f64| -> (f64, f64) {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let (g, dg) = eval(c);
        let lower = g.abs() - err - (dg.abs() + err) * h - 0.5 * k2 * h * h;
        (lower, g.abs())
    };
    let mut best_upper = f64::INFINITY;
    let mut heap = BinaryHeap::new();
    let pieces = 16 * d;
    for k in 0..pieces {
        let a = std::f64::consts::PI * k as f64 / pieces as f64;
        let b = std::f64::consts::PI * (k + 1) as f64 / pieces as f64;
        let (lower, val) = bound(a, b);
        best_upper = best_upper.min(val);
        heap.push(Cell { lower, a, b });
    }
    let mut iterations = 0usize;
    while let Some(cell) = heap.pop() {
        if best_upper - cell.lower <= tol || cell.b - cell.a < 1e-12 || iterations > 2_000_000 {
            return cell.lower.max(0.0);
        }
        iterations += 1;
        let m = 0.5 * (cell.a + cell.b);
        for (a, b) in [(cell.a, m), (m, cell.b)] {
            let (lower, val) = bound(a, b);
            best_upper = best_upper.min(val);
            heap.push(Cell { lower, a, b });
        }
    }
    0.0
}

/// Outcome of the ε-exceptional test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionalVerdict {
    pub verdict: bool,
    /// Factor indices (into the sorted complex factorization) witnessing the
    /// inequality when the verdict is true.
    pub witness: Option<(usize, usize)>,
}

/// Is `|L_i(x,y) L_j(x,y)| / |det(L_i, L_j)| ≤ ‖(x,y)‖^{-eps}` for some i < j?
pub fn epsilon_exceptional(form: &BinaryForm, point: (&BigInt, &BigInt), eps: f64) -> Result<ExceptionalVerdict> {
    let (x, y) = point;
    if x.is_zero() && y.is_zero() {
        return Err(ThueError::RejectedInput("point (0, 0)".into()));
    }
    if !(eps > 0.0) {
        return Err(ThueError::RejectedInput(format!("eps must be positive, got {eps}")));
    }
    let norm_sq = Interval::from_bigint(&(x * x + y * y));
    let rhs = -(Interval::point(eps) * norm_sq.ln()) * Interval::point(0.5);
    let mut bits = DEFAULT_PRECISION_BITS;
    loop {
        let cf = complex_factorization_capped(form, bits, DEFAULT_PRECISION_CAP)?;
        let logs: Vec<Interval> = cf.factors.iter().map(|l| l.abs_at(x, y).ln()).collect();
        let mut all_false = true;
        for i in 0..cf.degree() {
            for j in i + 1..cf.degree() {
                let det = cf.factors[i].abs_det(&cf.factors[j]).ln();
                let lhs = logs[i] + logs[j] - det;
                if lhs.certainly_le(&rhs) {
                    return Ok(ExceptionalVerdict { verdict: true, witness: Some((i, j)) });
                }
                if !rhs.certainly_lt(&lhs) {
                    all_false = false;
                }
            }
        }
        if all_false {
            return Ok(ExceptionalVerdict { verdict: false, witness: None });
        }
        if cf.precision >= DEFAULT_PRECISION_CAP {
            return Err(ThueError::Undecidable {
                bits: cf.precision,
                what: format!("eps-exceptional test for ({x}, {y})"),
            });
        }
        bits = cf.precision * 2;
    }
}

/// Indices witnessing the two approximation inequalities for a solution of
/// `|F(x, y)| ≤ m`:
///
/// * `root`: `|α_i - x/y| ≤ d·2^{d-1}·m·H^{d-2} / (|y|^d |D|^{1/2})`;
/// * `pair`: `|L_i L_j| / |det(L_i, L_j)| ≤ 2^{d-2}·m·H^{d-2} / (‖(x,y)‖^{d-2} |D|^{1/2})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxWitness {
    pub root: usize,
    pub pair: (usize, usize),
}

pub fn approx_witness(form: &BinaryForm, m: &BigInt, point: (&BigInt, &BigInt)) -> Result<ApproxWitness> {
    let (x, y) = point;
    if y.is_zero() {
        return Err(ThueError::RejectedInput("y = 0 has no finite approximation".into()));
    }
    if !x.gcd(y).abs().eq(&BigInt::from(1)) {
        return Err(ThueError::RejectedInput(format!("({x}, {y}) is not primitive")));
    }
    let value = form.evaluate(x, y).abs();
    if value > m.abs() {
        return Err(ThueError::RejectedInput(format!("|F({x}, {y})| = {value} exceeds m = {m}")));
    }
    let disc = form.require_separable()?;
    let d = form.degree();
    let log_disc_half = Interval::from_bigint(&disc.abs()).ln() * Interval::point(0.5);
    let log_m = Interval::from_bigint(&m.abs()).ln();
    let log_y = Interval::from_bigint(&y.abs()).ln();
    let log_norm = Interval::from_bigint(&(x * x + y * y)).ln() * Interval::point(0.5);
    let ln2 = Interval::point(2.0).ln();
    let dm2 = Interval::point((d - 2) as f64);
    let mut bits = DEFAULT_PRECISION_BITS;
    loop {
        let cf = complex_factorization_capped(form, bits, DEFAULT_PRECISION_CAP)?;
        let log_h = height_interval(&cf).ln();
        let rhs_root = Interval::point(d as f64).ln() + Interval::point((d - 1) as f64) * ln2 + log_m + dm2 * log_h
            - Interval::point(d as f64) * log_y
            - log_disc_half;
        let rhs_pair = dm2 * ln2 + log_m + dm2 * log_h - dm2 * log_norm - log_disc_half;
        let logs: Vec<Interval> = cf.factors.iter().map(|l| l.abs_at(x, y).ln()).collect();

        let mut root = None;
        let mut root_open = false;
        for (i, l) in cf.factors.iter().enumerate() {
            if l.root().is_none() {
                continue;
            }
            // |α - x/y| = |x - αy| / |y|
            let lhs = logs[i] - log_y;
            if lhs.certainly_le(&rhs_root) {
                root = Some(i);
                break;
            }
            if !rhs_root.certainly_lt(&lhs) {
                root_open = true;
            }
        }

        let mut pair = None;
        let mut pair_open = false;
        'outer: for i in 0..d {
            for j in i + 1..d {
                if d == 2 {
                    // the pair quotient equals |F(x,y)|/|D|^{1/2}, so the bound is |F| ≤ m
                    pair = Some((i, j));
                    break 'outer;
                }
                let lhs = logs[i] + logs[j] - cf.factors[i].abs_det(&cf.factors[j]).ln();
                if lhs.certainly_le(&rhs_pair) {
                    pair = Some((i, j));
                    break 'outer;
                }
                if !rhs_pair.certainly_lt(&lhs) {
                    pair_open = true;
                }
            }
        }

        match (root, pair) {
            (Some(root), Some(pair)) => return Ok(ApproxWitness { root, pair }),
            _ if !root_open && root.is_none() || !pair_open && pair.is_none() => {
                return Err(ThueError::Internal(format!(
                    "no index satisfies the approximation inequality at ({x}, {y})"
                )));
            }
            _ if cf.precision >= DEFAULT_PRECISION_CAP => {
                return Err(ThueError::PrecisionFailure(format!(
                    "approximation witness at ({x}, {y}) not certified"
                )));
            }
            _ => bits = cf.precision * 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(s: &str) -> BinaryForm {
        s.parse().unwrap()
    }

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn heights() {
        assert!((height_h(&form("2: 1 0 1")).unwrap() - 2.0).abs() < 1e-9);
        assert!((height_h(&form("3: 1 0 0 1")).unwrap() - 2.0f64.powf(1.5)).abs() < 1e-9);
        assert!((height_h(&form("2: 0 1 0")).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unit_circle_minimum() {
        assert!((min_on_unit_circle(&form("2: 1 0 1")) - 1.0).abs() < 1e-9);
        assert_eq!(min_on_unit_circle(&form("3: 1 0 0 -2")), 0.0);
        let q = min_on_unit_circle(&form("4: 1 0 0 0 1"));
        assert!(q <= 0.5 && q > 0.5 - 1e-9, "{q}");
    }

    #[test]
    fn exceptional_examples() {
        let v = epsilon_exceptional(&form("2: 1 0 1"), (&b(1), &b(0)), 1.0).unwrap();
        assert!(v.verdict);
        let v = epsilon_exceptional(&form("3: 1 0 0 1"), (&b(1_000_000), &b(1)), 2.0).unwrap();
        assert!(!v.verdict);
        // the ratio at (5, 4) is about 0.1581 against 41^{-eps/2}
        let f = form("3: 1 0 0 -2");
        assert!(!epsilon_exceptional(&f, (&b(5), &b(4)), 1.0).unwrap().verdict);
        let v = epsilon_exceptional(&f, (&b(5), &b(4)), 0.9).unwrap();
        assert!(v.verdict);
        let (i, j) = v.witness.unwrap();
        let cf = super::super::complex_factorization(&f, 128).unwrap();
        assert!(cf.factors[i].is_real() || cf.factors[j].is_real());
    }

    #[test]
    fn witness_examples() {
        let f = form("3: 1 0 0 -2");
        let w = approx_witness(&f, &b(6), (&b(5), &b(4))).unwrap();
        let cf = super::super::complex_factorization(&f, 128).unwrap();
        assert!(cf.factors[w.root].is_real());

        let f = form("3: 1 0 0 1");
        let w = approx_witness(&f, &b(7), (&b(2), &b(-1))).unwrap();
        let cf = super::super::complex_factorization(&f, 128).unwrap();
        let c = cf.factors[w.root].root().unwrap().center();
        assert!((c.re + 1.0).abs() < 1e-12 && c.im.abs() < 1e-12);

        let f = form("2: 1 0 1");
        assert!(matches!(approx_witness(&f, &b(1), (&b(1), &b(0))), Err(ThueError::RejectedInput(_))));
        assert!(matches!(approx_witness(&f, &b(1), (&b(3), &b(1))), Err(ThueError::RejectedInput(_))));
    }
}
