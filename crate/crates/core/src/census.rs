//! How often a sublattice of determinant m has an exceptionally short
//! primitive vector, compared against the bound 4π·m^{-2δ}.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{gcd_i64, sigma};
use crate::bounds::format_sig;
use crate::error::{Result, ThueError};
use crate::interval::Interval;
use crate::lattices::{all_sublattices_shard, for_each_point, hnf_from_generators, reduce, Lattice2};

pub const CENSUS_CSV_HEADER: &str = "m,delta,total,short_count,proportion,bound_4pi_m_minus_2delta";

#[derive(Debug, Clone, PartialEq)]
pub struct CensusRow {
    pub m: u64,
    pub delta: Ratio<i64>,
    /// m^{1/2-δ}.
    pub threshold: f64,
    /// ⌊m^{1-2δ}⌋, the exact cutoff on squared norms.
    pub threshold_sq: u64,
    /// σ(m).
    pub total: u64,
    /// Lattices containing a primitive vector of norm ≤ threshold.
    pub short_count: u64,
    pub proportion: f64,
    /// 4π·m^{-2δ}.
    pub bound: f64,
    /// proportion ≤ bound, decided with outward rounding.
    pub within_bound: bool,
    /// Lattices failing λ₁λ₂ ≥ 2m/π.
    pub minkowski_violations: u64,
    /// Lattices with two independent short primitive vectors although
    /// threshold² < 2m/π.
    pub pair_violations: u64,
}

impl CensusRow {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.m,
            self.delta,
            self.total,
            self.short_count,
            format_sig(self.proportion, 12),
            format_sig(self.bound, 12)
        )
    }
}

fn check_delta(delta: &Ratio<i64>) -> Result<()> {
    if !delta.is_positive() {
        return Err(ThueError::RejectedInput(format!("delta = {delta} must be positive")));
    }
    Ok(())
}

/// ⌊m^{1-2δ}⌋ computed exactly as an integer root.
pub fn threshold_sq(m: u64, delta: &Ratio<i64>) -> Result<u64> {
    check_delta(delta)?;
    if m == 0 {
        return Err(ThueError::RejectedInput("m must be positive".into()));
    }
    let e = Ratio::from_integer(1) - delta * 2;
    if m == 1 || e.is_zero() {
        return Ok(1);
    }
    if e.is_negative() {
        return Ok(0);
    }
    let (p, q) = (*e.numer(), *e.denom());
    let q = u32::try_from(q).map_err(|_| ThueError::RejectedInput(format!("delta = {delta} too fine")))?;
    let p = u32::try_from(p).map_err(|_| ThueError::RejectedInput(format!("delta = {delta} too fine")))?;
    let root = BigInt::from(m).pow(p).nth_root(q);
    root.to_u64().ok_or_else(|| ThueError::RejectedInput(format!("threshold for m = {m} exceeds 64 bits")))
}

fn delta_interval(delta: &Ratio<i64>) -> Interval {
    Interval::from_i64(*delta.numer()) / Interval::from_i64(*delta.denom())
}

/// Method (a): reduce each lattice and enumerate its points of squared norm
/// at most `t`. Returns (short_count, minkowski_violations, pair_violations).
pub fn count_by_reduction(m: u64, t: u64, shard: usize, shards: usize, budget: u64) -> Result<(u64, u64, u64)> {
    let mi = i64::try_from(m).map_err(|_| ThueError::RejectedInput(format!("m = {m} exceeds 64 bits")))?;
    // threshold² < 2m/π  <=>  π·t < 2m
    let pi = Interval::new(std::f64::consts::PI.next_down(), std::f64::consts::PI.next_up());
    let unique_regime = (pi * Interval::from_i64(t as i64)).certainly_lt(&Interval::from_i64(2 * mi));
    let (mut short, mut mink, mut pairs) = (0, 0, 0);
    for l in all_sublattices_shard(mi, budget, shard, shards)? {
        let rb = reduce(&l);
        if !rb.minkowski_holds() {
            mink += 1;
        }
        if rb.norm1_sq > i128::from(t) {
            continue;
        }
        let mut reps = BTreeSet::new();
        for_each_point(&l, i128::from(t), budget, |x, y| {
            if gcd_i64(x, y) == 1 {
                reps.insert(if y < 0 || (y == 0 && x < 0) { (-x, -y) } else { (x, y) });
            }
        })?;
        if !reps.is_empty() {
            short += 1;
        }
        if unique_regime && reps.len() > 1 {
            pairs += 1;
        }
    }
    Ok((short, mink, pairs))
}

/// Method (b): every primitive v lies in exactly one lattice of determinant
/// m, namely Zv + mZ². Count the distinct lattices hit by primitive v with
/// ‖v‖² ≤ t. The second value is the number of ± pairs seen.
pub fn count_by_points(m: u64, t: u64, budget: u64) -> Result<(u64, u64)> {
    let mi = i64::try_from(m).map_err(|_| ThueError::RejectedInput(format!("m = {m} exceeds 64 bits")))?;
    let r = (t as i64).sqrt();
    let side = 2.0 * r as f64 + 1.0;
    if side * side > budget as f64 {
        return Err(ThueError::BudgetExceeded(format!("disk of squared radius {t} exceeds {budget} points")));
    }
    let mut hit: BTreeSet<Lattice2> = BTreeSet::new();
    let mut pairs = 0;
    for y in 0..=r {
        let w = ((t as i64) - y * y).sqrt();
        for x in -w..=w {
            if (y == 0 && x <= 0) || gcd_i64(x, y) != 1 {
                continue;
            }
            pairs += 1;
            hit.insert(hnf_from_generators(&[(x, y), (mi, 0), (0, mi)])?);
        }
    }
    Ok((hit.len() as u64, pairs))
}

/// One census row, with both counting methods cross-checked.
pub fn census_point(m: u64, delta: &Ratio<i64>, budget: u64) -> Result<CensusRow> {
    census_point_sharded(m, delta, 1, budget)
}

pub fn census_point_sharded(m: u64, delta: &Ratio<i64>, shards: usize, budget: u64) -> Result<CensusRow> {
    let t = threshold_sq(m, delta)?;
    let total = sigma(m);
    let shards = shards.max(1);
    let parts: Vec<Result<(u64, u64, u64)>> = if shards == 1 {
        vec![count_by_reduction(m, t, 0, 1, budget)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..shards)
                .map(|k| s.spawn(move || count_by_reduction(m, t, k, shards, budget)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("census shard panicked")).collect()
        })
    };
    let (mut short, mut mink, mut pair_viol) = (0, 0, 0);
    for p in parts {
        let (a, b, c) = p?;
        short += a;
        mink += b;
        pair_viol += c;
    }
    let (short_b, pairs) = count_by_points(m, t, budget)?;
    if short != short_b {
        return Err(ThueError::Internal(format!(
            "census m = {m}: reduction count {short} differs from point count {short_b}"
        )));
    }
    let pi = Interval::new(std::f64::consts::PI.next_down(), std::f64::consts::PI.next_up());
    if (pi * Interval::from_i64(t as i64)).certainly_lt(&Interval::from_i64(2 * m as i64)) && short != pairs {
        return Err(ThueError::Internal(format!("census m = {m}: {pairs} short pairs but {short} lattices")));
    }
    let ln_m = Interval::from_i64(m as i64).ln();
    let d = delta_interval(delta);
    let bound_iv = Interval::point(4.0) * pi * (-(Interval::point(2.0) * d) * ln_m).exp();
    let prop_iv = Interval::from_i64(short as i64) / Interval::from_i64(total as i64);
    let df = delta.to_f64().unwrap_or(f64::NAN);
    Ok(CensusRow {
        m,
        delta: *delta,
        threshold: (m as f64).powf(0.5 - df),
        threshold_sq: t,
        total,
        short_count: short,
        proportion: short as f64 / total as f64,
        bound: 4.0 * std::f64::consts::PI * (m as f64).powf(-2.0 * df),
        within_bound: prop_iv.certainly_le(&bound_iv),
        minkowski_violations: mink,
        pair_violations: pair_viol,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusSweep {
    pub rows: Vec<CensusRow>,
    /// max of proportion·m^{2δ}, an estimate of the implied constant.
    pub max_scaled: f64,
    pub all_within_bound: bool,
}

/// Rows for every m in `ms`, sharded across threads by m and merged in
/// input order.
pub fn census_sweep(ms: &[u64], delta: &Ratio<i64>, shards: usize, budget: u64) -> Result<CensusSweep> {
    check_delta(delta)?;
    let shards = shards.max(1).min(ms.len().max(1));
    let results: Vec<Result<CensusRow>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..shards)
            .map(|k| {
                s.spawn(move || {
                    ms.iter()
                        .enumerate()
                        .filter(|(i, _)| i % shards == k)
                        .map(|(i, &m)| (i, census_point(m, delta, budget)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        let mut all: Vec<(usize, Result<CensusRow>)> =
            handles.into_iter().flat_map(|h| h.join().expect("census shard panicked")).collect();
        all.sort_by_key(|(i, _)| *i);
        all.into_iter().map(|(_, r)| r).collect()
    });
    let rows = results.into_iter().collect::<Result<Vec<_>>>()?;
    let df = delta.to_f64().unwrap_or(f64::NAN);
    let max_scaled = rows.iter().map(|r| r.proportion * (r.m as f64).powf(2.0 * df)).fold(0.0, f64::max);
    let all_within_bound = rows.iter().all(|r| r.within_bound);
    Ok(CensusSweep { rows, max_scaled, all_within_bound })
}
