use num_bigint::BigInt;
use num_rational::Ratio;
use thue_core::arith::{factorize, is_prime};
use thue_core::bounds::{
    corollary_bound, heights_of_lattice, lemma_bounds, proposition_bound, stewart_bound, theorem2_bound,
    theorem2_check, theorem3_classify, theorem3_threshold, BoundReport, StewartContext, BOUND_CSV_HEADER,
};
use thue_core::census::{census_sweep, CENSUS_CSV_HEADER};
use thue_core::enumeration::{
    default_region, solve, theorem1_cover_check, Mode, SearchRegion, ThueInstance, DEFAULT_RADIUS,
    SOLUTION_CSV_HEADER,
};
use thue_core::forms::{complex_factorization, epsilon_exceptional, height_interval};
use thue_core::interval::Interval;
use thue_core::lattices::{all_sublattices_shard, reduce, theorem1_lattices, Lattice2};
use thue_core::padic::{c_f_p, m_of_f, theorem1_hypothesis};
use thue_core::{BinaryForm, Result, ThueError};

use crate::config::{Config, OutputFormat};
use crate::output::{table, Output, Record};

/// Radius for `verify` when none is configured.
pub const VERIFY_RADIUS: f64 = 50.0;

fn require_positive(m: &BigInt) -> Result<()> {
    if m <= &BigInt::from(0) {
        return Err(ThueError::RejectedInput(format!("m = {m} must be positive")));
    }
    Ok(())
}

pub fn analyze(cfg: &Config, form: &BinaryForm, m: &BigInt) -> Result<Output> {
    require_positive(m)?;
    let disc = form.require_separable()?;
    let mut rec = Record::default();
    rec.push("form", form);
    rec.push("degree", form.degree());
    rec.push("discriminant", &disc);
    rec.push("content", form.content());
    rec.push("m", m);
    let fac = factorize(m, cfg.factorization_budget)?;
    let mut c_m = 1u64;
    for p in fac.primes() {
        let c = c_f_p(form, p)?;
        rec.push(format!("c_F({p})"), c);
        c_m *= c as u64;
    }
    rec.push("c_F(m)", c_m);
    let cf = complex_factorization(form, cfg.precision_bits)?;
    rec.push("c_F(inf)", cf.real_count());
    rec.push("height_H", thue_core::bounds::format_sig(height_interval(&cf).mid(), 9));
    if form.content() == BigInt::from(1) {
        rec.push("m(F)", m_of_f(form, m, cfg.factorization_budget)?);
    } else {
        rec.push("m(F)", "undefined (content is not 1)");
    }
    rec.push("theorem1_hypothesis", theorem1_hypothesis(form, m, cfg.factorization_budget)?);
    if c_m == 0 {
        rec.push("notice", "local obstruction: c_F(m) = 0 so |F(x,y)| = m has no primitive solutions");
    }
    Ok(Output { stdout: rec.render(cfg.output_format), ..Output::default() })
}

fn region_for(cfg: &Config, inst: &ThueInstance) -> SearchRegion {
    match cfg.brute_radius_override {
        Some(r) => SearchRegion::user(r),
        None => default_region(inst, DEFAULT_RADIUS),
    }
}

pub fn solve_cmd(cfg: &Config, form: &BinaryForm, m: &BigInt, mode: Mode) -> Result<Output> {
    require_positive(m)?;
    let inst = ThueInstance::new(form.clone(), m.clone(), mode)?;
    let region = region_for(cfg, &inst);
    let (sols, region, scan) =
        solve(&inst, &region, cfg.y_max_for_convergents.as_ref(), cfg.shard_count, cfg.point_budget)?;
    let rows: Vec<String> = sols.iter().map(|s| s.csv_row()).collect();
    let mut err = format!(
        "# region radius={} complete={} justification={}\n# solutions={}\n",
        region.radius,
        region.complete,
        region.justification,
        sols.len()
    );
    if let Some(s) = scan {
        err += &format!("# convergent threshold={} y_max={} complete={}\n", s.threshold, s.y_max, s.complete);
    }
    Ok(Output { stdout: table(SOLUTION_CSV_HEADER, &rows, cfg.output_format), stderr: err, exit: 0 })
}

const LATTICE_HEADER: &str = "det,a,b,c,lambda1_sq,lambda2_sq,minkowski";

fn lattice_row(l: &Lattice2) -> String {
    let (a, b, c) = l.abc();
    let rb = reduce(l);
    format!("{},{a},{b},{c},{},{},{}", l.det(), rb.norm1_sq, rb.norm2_sq, rb.minkowski_holds())
}

/// Theorem 1 lattices of `form` when given, otherwise every sublattice of
/// determinant m.
pub fn lattices_cmd(cfg: &Config, m: &BigInt, form: Option<&BinaryForm>) -> Result<Output> {
    require_positive(m)?;
    let lattices: Vec<Lattice2> = match form {
        Some(f) => theorem1_lattices(f, m, cfg.factorization_budget)?,
        None => {
            let mi = thue_core::arith::to_i64(m, "m")?;
            all_sublattices_shard(mi, cfg.point_budget, 0, 1)?.collect()
        }
    };
    let rows: Vec<String> = lattices.iter().map(lattice_row).collect();
    Ok(Output { stdout: table(LATTICE_HEADER, &rows, cfg.output_format), ..Output::default() })
}

pub fn verify(cfg: &Config, form: &BinaryForm, m: &BigInt) -> Result<Output> {
    require_positive(m)?;
    let region = SearchRegion::user(cfg.brute_radius_override.unwrap_or(VERIFY_RADIUS));
    let rep = theorem1_cover_check(form, m, &region, cfg.factorization_budget, cfg.point_budget)?;
    let mut rec = Record::default();
    rec.push("form", form);
    rec.push("m", m);
    rec.push("radius", region.radius);
    rec.push("lattices", rep.lattices.len());
    for (i, l) in rep.lattices.iter().enumerate() {
        rec.push(format!("lattice[{i}]"), l);
        rec.push(format!("lattice[{i}].solutions"), rep.solution_counts[i]);
        rec.push(format!("lattice[{i}].divisible"), rep.divisible_counts[i]);
    }
    let counts: Vec<String> = rep.solution_counts.iter().map(|c| c.to_string()).collect();
    rec.push("solution_counts", counts.join(" "));
    rec.push("divisible_total", rep.divisible_total);
    rec.push("violations", rep.violations.len());
    for (x, y) in rep.violations.iter().take(20) {
        rec.push("violation", format!("({x}, {y})"));
    }
    let covered = rep.violations.is_empty();
    rec.push("covered", covered);
    let mut out = Output { stdout: rec.render(cfg.output_format), ..Output::default() };
    if !covered {
        out.flag(2);
    }
    Ok(out)
}

/// Which bound `bounds` should evaluate.
#[derive(Debug, Clone)]
pub enum BoundRequest {
    Theorem2 { d: usize, m: BigInt, a: f64 },
    Corollary { d: usize, m: BigInt, a: f64, c_f_m: u64 },
    Stewart { d: usize, eps: f64, omega: u32, ctx: Option<StewartContext> },
    Proposition { d: usize, m: BigInt, b: f64, b_hi: Option<f64> },
    Lemmas { d: usize, c: f64, b: f64, c1: f64, c2: f64 },
    Threshold { form: BinaryForm, eps: f64 },
    Lattice { form: BinaryForm, m: BigInt },
}

fn render_reports(cfg: &Config, reports: &[BoundReport]) -> Output {
    let stdout = match cfg.output_format {
        OutputFormat::Kv => reports.iter().map(BoundReport::to_kv).collect::<Vec<_>>().join("\n"),
        OutputFormat::Csv => {
            let mut s = format!("{BOUND_CSV_HEADER}\n");
            for r in reports {
                s += &r.csv_row();
                s.push('\n');
            }
            s
        }
    };
    let mut out = Output { stdout, ..Output::default() };
    if reports.iter().any(|r| !r.conditions_hold()) {
        out.flag(2);
    }
    out
}

pub fn bounds_cmd(cfg: &Config, req: &BoundRequest) -> Result<Output> {
    let reports = match req {
        BoundRequest::Theorem2 { d, m, a } => vec![theorem2_bound(*d, m, *a)?],
        BoundRequest::Corollary { d, m, a, c_f_m } => vec![corollary_bound(*d, m, *a, *c_f_m)?],
        BoundRequest::Stewart { d, eps, omega, ctx } => vec![stewart_bound(*d, *eps, *omega, ctx.as_ref())?],
        BoundRequest::Proposition { d, m, b, b_hi } => {
            vec![proposition_bound(*d, m, Interval::new(*b, b_hi.unwrap_or(*b).max(*b)))?]
        }
        BoundRequest::Lemmas { d, c, b, c1, c2 } => {
            let l = lemma_bounds(*d, *c, *b, *c1, *c2)?;
            vec![l.lemma6, l.lemma7, l.lemma8]
        }
        BoundRequest::Threshold { form, eps } => vec![theorem3_threshold(form, *eps)?.report],
        BoundRequest::Lattice { form, m } => return lattice_bounds(cfg, form, m),
    };
    Ok(render_reports(cfg, &reports))
}

/// Theorem 2 and heights for every Theorem 1 lattice of m(F).
fn lattice_bounds(cfg: &Config, form: &BinaryForm, m: &BigInt) -> Result<Output> {
    require_positive(m)?;
    let inst = ThueInstance::new(form.clone(), m.clone(), Mode::Leq)?;
    let region = region_for(cfg, &inst);
    let m_f = m_of_f(form, m, cfg.factorization_budget)?;
    let mut rec = Record::default();
    rec.push("form", form);
    rec.push("m", m);
    rec.push("m(F)", &m_f);
    rec.push("region_radius", region.radius);
    rec.push("region_complete", region.complete);
    let mut all_hold = true;
    for (i, l) in theorem1_lattices(form, &m_f, cfg.factorization_budget)?.iter().enumerate() {
        let check = theorem2_check(form, m, l, &region, cfg.point_budget)?;
        let sols: Vec<(i64, i64)> = thue_core::enumeration::lattice_solutions(&inst, l, &region, cfg.point_budget)?
            .iter()
            .map(|s| Ok((thue_core::arith::to_i64(&s.x, "x")?, thue_core::arith::to_i64(&s.y, "y")?)))
            .collect::<Result<_>>()?;
        let h = heights_of_lattice(form, l, m, &sols)?;
        let fmt = |x: f64| thue_core::bounds::format_sig(x, 6);
        rec.push(format!("lattice[{i}]"), l);
        rec.push(format!("lattice[{i}].A"), fmt(check.a.mid()));
        rec.push(format!("lattice[{i}].count"), check.count);
        rec.push(format!("lattice[{i}].bound"), format!("{} ({})", fmt(check.bound.value), check.bound.name));
        rec.push(format!("lattice[{i}].count_below_bound"), check.holds());
        rec.push(format!("lattice[{i}].H"), fmt(h.h));
        rec.push(format!("lattice[{i}].M_upper"), fmt(h.m_upper));
        rec.push(
            format!("lattice[{i}].MofFLm_upper"),
            h.m_of_lm_upper.map_or("none".to_string(), fmt),
        );
        rec.push(format!("lattice[{i}].m_lower"), fmt(h.m_lower));
        all_hold &= check.holds();
    }
    rec.push("all_counts_below_bound", all_hold);
    let mut out = Output { stdout: rec.render(cfg.output_format), ..Output::default() };
    if !all_hold && region.complete {
        out.flag(2);
    }
    Ok(out)
}

pub fn census_cmd(cfg: &Config, ms: &[u64], delta: &Ratio<i64>) -> Result<Output> {
    let sweep = census_sweep(ms, delta, cfg.shard_count, cfg.point_budget)?;
    let rows: Vec<String> = sweep.rows.iter().map(|r| r.csv_row()).collect();
    let mink: u64 = sweep.rows.iter().map(|r| r.minkowski_violations).sum();
    let stderr = format!(
        "# rows={} max_proportion_times_m^(2delta)={} all_within_bound={} minkowski_violations={}\n",
        sweep.rows.len(),
        thue_core::bounds::format_sig(sweep.max_scaled, 12),
        sweep.all_within_bound,
        mink
    );
    let mut out = Output { stdout: table(CENSUS_CSV_HEADER, &rows, cfg.output_format), stderr, exit: 0 };
    if !sweep.all_within_bound || mink > 0 {
        out.flag(2);
    }
    Ok(out)
}

/// The m values of a census range, optionally primes only.
pub fn census_range(from: u64, to: u64, primes_only: bool) -> Vec<u64> {
    (from.max(1)..=to).filter(|&m| !primes_only || is_prime(&BigInt::from(m))).collect()
}

pub fn exceptional_point(cfg: &Config, form: &BinaryForm, eps: f64, x: &BigInt, y: &BigInt) -> Result<Output> {
    let v = epsilon_exceptional(form, (x, y), eps)?;
    let mut rec = Record::default();
    rec.push("form", form);
    rec.push("point", format!("({x}, {y})"));
    rec.push("eps", eps);
    rec.push("exceptional", v.verdict);
    if let Some((i, j)) = v.witness {
        rec.push("witness", format!("{i} {j}"));
    }
    Ok(Output { stdout: rec.render(cfg.output_format), ..Output::default() })
}

pub fn exceptional_classify(cfg: &Config, form: &BinaryForm, eps: f64, m: &BigInt) -> Result<Output> {
    require_positive(m)?;
    let region = SearchRegion::user(cfg.brute_radius_override.unwrap_or(DEFAULT_RADIUS));
    let rep = theorem3_classify(form, m, eps, &region, cfg.factorization_budget, cfg.point_budget)?;
    let mut rec = Record::default();
    rec.push("form", form);
    rec.push("m", &rep.m);
    rec.push("m(F)", &rep.m_f);
    rec.push("eps", rep.eps);
    rec.push("exponent", rep.exponent);
    rec.push("delta", rep.delta);
    rec.push("threshold", &rep.threshold.m0);
    for c in &rep.side_conditions {
        rec.push(format!("side[{}]", c.condition), c.holds.map_or("unchecked".into(), |h| h.to_string()));
    }
    rec.push("region_radius", region.radius);
    let pts = |v: &[(i64, i64)]| v.iter().map(|(x, y)| format!("({x} {y})")).collect::<Vec<_>>().join(" ");
    for (i, l) in rep.lattices.iter().enumerate() {
        rec.push(format!("lattice[{i}]"), l.lattice);
        rec.push(format!("lattice[{i}].solutions"), l.solutions.len());
        rec.push(format!("lattice[{i}].exceptional_pairs"), pts(&l.exceptional));
        rec.push(format!("lattice[{i}].non_exceptional_pairs"), pts(&l.non_exceptional));
        rec.push(format!("lattice[{i}].below_norm_bound"), l.below_norm_bound);
    }
    rec.push("claims_hold", rep.claims_hold());
    let mut out = Output { stdout: rec.render(cfg.output_format), ..Output::default() };
    if !rep.side_conditions_hold() {
        out.flag(2);
    }
    Ok(out)
}
