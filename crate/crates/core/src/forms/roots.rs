//! Certified complex linear factorization.
//!
//! Roots of `f(t) = F(t, 1)` are approximated by Aberth iteration in f64,
//! polished by Aberth steps in fixed point at the working precision, and then
//! certified: for each center `z` the disk of radius `n|f(z)|/|f'(z)|`
//! (evaluated exactly on the dyadic center) contains a root, and pairwise
//! disjoint disks contain exactly one root each.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{BinaryForm, DEFAULT_PRECISION_CAP};
use crate::error::{Result, ThueError};
use crate::interval::Interval;

/// A disk of the complex plane with a dyadic center `(re + i·im)·2^-shift`
/// containing exactly one root.
#[derive(Debug, Clone, PartialEq)]
pub struct RootDisk {
    pub re: BigInt,
    pub im: BigInt,
    pub shift: u32,
    /// Upper bound on the distance from the center to the root.
    pub radius: f64,
    /// The enclosed root is certified real.
    pub real: bool,
}

impl RootDisk {
    pub fn center(&self) -> Complex64 {
        Complex64::new(
            Interval::from_dyadic(&self.re, -(self.shift as i64)).mid(),
            Interval::from_dyadic(&self.im, -(self.shift as i64)).mid(),
        )
    }

    fn widen(&self, c: Interval) -> Interval {
        Interval::new((c.lo - self.radius).next_down(), (c.hi + self.radius).next_up())
    }

    pub fn re_interval(&self) -> Interval {
        self.widen(Interval::from_dyadic(&self.re, -(self.shift as i64)))
    }

    pub fn im_interval(&self) -> Interval {
        if self.real {
            return Interval::point(0.0);
        }
        self.widen(Interval::from_dyadic(&self.im, -(self.shift as i64)))
    }

    /// Enclosure of |α|.
    pub fn abs_interval(&self) -> Interval {
        let sq = &self.re * &self.re + &self.im * &self.im;
        let c = Interval::from_dyadic(&sq, -2 * self.shift as i64).sqrt();
        self.widen(c).nonneg()
    }

    /// Enclosure of |x - α y|.
    pub fn abs_linear(&self, x: &BigInt, y: &BigInt) -> Interval {
        let re = (x << self.shift) - &self.re * y;
        let im = &self.im * y;
        let c = Interval::from_dyadic(&(&re * &re + &im * &im), -2 * self.shift as i64).sqrt();
        let slack = Interval::point(self.radius) * Interval::from_bigint(&y.abs());
        Interval::new((c.lo - slack.hi).next_down().max(0.0), (c.hi + slack.hi).next_up())
    }

    /// Enclosure of |α - β|.
    pub fn abs_diff(&self, other: &RootDisk) -> Interval {
        let (a, b) = align(self, other);
        let dre = &a.0 - &b.0;
        let dim = &a.1 - &b.1;
        let s = self.shift.max(other.shift) as i64;
        let c = Interval::from_dyadic(&(&dre * &dre + &dim * &dim), -2 * s).sqrt();
        let r = self.radius + other.radius;
        Interval::new((c.lo - r).next_down().max(0.0), (c.hi + r).next_up().next_up())
    }
}

fn align(a: &RootDisk, b: &RootDisk) -> ((BigInt, BigInt), (BigInt, BigInt)) {
    let s = a.shift.max(b.shift);
    let up = |d: &RootDisk| ((&d.re) << (s - d.shift), (&d.im) << (s - d.shift));
    (up(a), up(b))
}

/// One linear factor: `X - αY` for a finite root α, or `Y` for the root at
/// infinity.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearFactor {
    Finite(RootDisk),
    Infinite,
}

impl LinearFactor {
    /// Coefficient vector `(u, v)` of `uX + vY` (approximate).
    pub fn coeffs(&self) -> (Complex64, Complex64) {
        match self {
            LinearFactor::Finite(r) => (Complex64::new(1.0, 0.0), -r.center()),
            LinearFactor::Infinite => (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            LinearFactor::Finite(r) => r.real,
            LinearFactor::Infinite => true,
        }
    }

    pub fn root(&self) -> Option<&RootDisk> {
        match self {
            LinearFactor::Finite(r) => Some(r),
            LinearFactor::Infinite => None,
        }
    }

    /// Enclosure of the Euclidean norm of the coefficient vector.
    pub fn norm_interval(&self) -> Interval {
        match self {
            LinearFactor::Finite(r) => (Interval::point(1.0) + r.abs_interval().square()).sqrt(),
            LinearFactor::Infinite => Interval::point(1.0),
        }
    }

    /// Enclosure of |L(x, y)|.
    pub fn abs_at(&self, x: &BigInt, y: &BigInt) -> Interval {
        match self {
            LinearFactor::Finite(r) => r.abs_linear(x, y),
            LinearFactor::Infinite => Interval::from_bigint(&y.abs()),
        }
    }

    /// Enclosure of |det(L, M)| for the coefficient vectors.
    pub fn abs_det(&self, other: &LinearFactor) -> Interval {
        match (self, other) {
            (LinearFactor::Finite(a), LinearFactor::Finite(b)) => a.abs_diff(b),
            (LinearFactor::Infinite, LinearFactor::Infinite) => Interval::point(0.0),
            _ => Interval::point(1.0),
        }
    }
}

/// `F = scale · ∏ factors` with factors `X - α_i Y` (sorted by real then
/// imaginary part of α_i) followed by `Y` if `F(1, 0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexFactorization {
    pub scale: BigInt,
    pub factors: Vec<LinearFactor>,
    pub precision: u32,
    /// Bound on max coefficient deviation of `scale · ∏ L_i` (built from the
    /// disk centers) relative to the largest coefficient of F.
    pub error_bound: f64,
}

impl ComplexFactorization {
    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    pub fn real_count(&self) -> usize {
        self.factors.iter().filter(|f| f.is_real()).count()
    }

    /// Approximate coefficients of the reconstruction `scale · ∏ L_i`.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let mut poly = vec![Complex64::new(self.scale.to_f64().unwrap_or(f64::NAN), 0.0)];
        for f in &self.factors {
            let (u, v) = f.coeffs();
            let mut next = vec![Complex64::zero(); poly.len() + 1];
            for (k, c) in poly.iter().enumerate() {
                next[k] += c * u;
                next[k + 1] += c * v;
            }
            poly = next;
        }
        poly
    }
}

/// Factor F over C with certified root disks, starting at `precision` bits
/// and doubling on failure up to the default cap.
pub fn complex_factorization(form: &BinaryForm, precision: u32) -> Result<ComplexFactorization> {
    complex_factorization_capped(form, precision, DEFAULT_PRECISION_CAP.max(precision))
}

pub fn complex_factorization_capped(form: &BinaryForm, precision: u32, cap: u32) -> Result<ComplexFactorization> {
    form.require_separable()?;
    let (poly, lead) = form.affine_part();
    let n = poly.len() - 1;
    let mut approx = aberth_f64(&poly);
    let mut bits = precision.max(64);
    loop {
        let centers = polish(&poly, &approx, bits);
        if let Some(disks) = certify(&poly, &centers, bits) {
            let mut factors: Vec<LinearFactor> = disks.into_iter().map(LinearFactor::Finite).collect();
            factors.sort_by(|a, b| {
                let (ca, cb) = (a.root().unwrap().center(), b.root().unwrap().center());
                ca.re.total_cmp(&cb.re).then(ca.im.total_cmp(&cb.im))
            });
            factors.extend((0..lead).map(|_| LinearFactor::Infinite));
            let error_bound = reconstruction_error(&poly, &factors);
            return Ok(ComplexFactorization { scale: poly[0].clone(), factors, precision: bits, error_bound });
        }
        if bits >= cap {
            return Err(ThueError::PrecisionFailure(format!(
                "could not certify {n} roots of {form} at {bits} bits"
            )));
        }
        approx = centers.iter().map(|(re, im)| to_c64(re, im, bits)).collect();
        bits = (bits * 2).min(cap);
    }
}

fn to_c64(re: &BigInt, im: &BigInt, bits: u32) -> Complex64 {
    Complex64::new(
        Interval::from_dyadic(re, -(bits as i64)).mid(),
        Interval::from_dyadic(im, -(bits as i64)).mid(),
    )
}

fn aberth_f64(poly: &[BigInt]) -> Vec<Complex64> {
    let n = poly.len() - 1;
    if n == 0 {
        return vec![];
    }
    let lead = Interval::from_bigint(&poly[0]).mid();
    let c: Vec<f64> = poly.iter().map(|a| Interval::from_bigint(a).mid() / lead).collect();
    let radius = (1..=n)
        .map(|k| c[k].abs().powf(1.0 / k as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (fz, dz) = horner_c64(&c, z[i]);
            if fz == Complex64::zero() {
                continue;
            }
            let w = fz / dz;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = w / (1.0 - w * s);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn horner_c64(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut f = Complex64::new(c[0], 0.0);
    let mut d = Complex64::zero();
    for a in &c[1..] {
        d = d * z + f;
        f = f * z + a;
    }
    (f, d)
}

/// Gaussian fixed-point number `(re + i·im)·2^-bits`.
#[derive(Clone, Debug)]
struct Fx {
    re: BigInt,
    im: BigInt,
}

impl Fx {
    fn from_c64(z: Complex64, bits: u32) -> Fx {
        let scale = |x: f64| -> BigInt {
            if !x.is_finite() {
                return BigInt::zero();
            }
            let (m, e) = frexp(x);
            let mant = BigInt::from((m * 2f64.powi(53)) as i64);
            let sh = e as i64 - 53 + bits as i64;
            if sh >= 0 {
                mant << sh as usize
            } else {
                mant >> (-sh) as usize
            }
        };
        Fx { re: scale(z.re), im: scale(z.im) }
    }

    fn mul(&self, o: &Fx, bits: u32) -> Fx {
        Fx {
            re: (&self.re * &o.re - &self.im * &o.im) >> bits,
            im: (&self.re * &o.im + &self.im * &o.re) >> bits,
        }
    }

    fn div(&self, o: &Fx, bits: u32) -> Option<Fx> {
        let den = &o.re * &o.re + &o.im * &o.im;
        if den.is_zero() {
            return None;
        }
        let re = &self.re * &o.re + &self.im * &o.im;
        let im = &self.im * &o.re - &self.re * &o.im;
        Some(Fx { re: (re << bits) / &den, im: (im << bits) / &den })
    }

    fn sub(&self, o: &Fx) -> Fx {
        Fx { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn add(&self, o: &Fx) -> Fx {
        Fx { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn bits_mag(&self) -> u64 {
        self.re.bits().max(self.im.bits())
    }
}

fn frexp(x: f64) -> (f64, i32) {
    if x == 0.0 {
        return (0.0, 0);
    }
    let e = x.abs().log2().floor() as i32 + 1;
    let m = x / 2f64.powi(e);
    // correct for log2 rounding at powers of two
    if m.abs() >= 1.0 {
        (m / 2.0, e + 1)
    } else if m.abs() < 0.5 {
        (m * 2.0, e - 1)
    } else {
        (m, e)
    }
}

fn polish(poly: &[BigInt], approx: &[Complex64], bits: u32) -> Vec<(BigInt, BigInt)> {
    let n = approx.len();
    let one = Fx { re: BigInt::from(1) << bits, im: BigInt::zero() };
    let coeffs: Vec<Fx> = poly.iter().map(|a| Fx { re: a << bits, im: BigInt::zero() }).collect();
    let mut z: Vec<Fx> = approx.iter().map(|&c| Fx::from_c64(c, bits)).collect();
    for _ in 0..(2 * bits as usize / 16 + 60) {
        let mut moved: u64 = 0;
        for i in 0..n {
            let mut f = coeffs[0].clone();
            let mut d = Fx { re: BigInt::zero(), im: BigInt::zero() };
            for a in &coeffs[1..] {
                d = d.mul(&z[i], bits).add(&f);
                f = f.mul(&z[i], bits).add(a);
            }
            let Some(w) = f.div(&d, bits) else { continue };
            let mut s = Fx { re: BigInt::zero(), im: BigInt::zero() };
            for j in (0..n).filter(|&j| j != i) {
                if let Some(inv) = one.div(&z[i].sub(&z[j]), bits) {
                    s = s.add(&inv);
                }
            }
            let denom = one.sub(&w.mul(&s, bits));
            let Some(step) = w.div(&denom, bits) else { continue };
            moved = moved.max(step.bits_mag());
            z[i] = z[i].sub(&step);
        }
        if moved <= 2 {
            break;
        }
    }
    z.into_iter().map(|c| (c.re, c.im)).collect()
}

/// Exact value of `f(z)·2^{bits·n}` and `f'(z)·2^{bits·(n-1)}` at the
/// Gaussian dyadic `z = (re + i·im)·2^-bits`.
fn exact_eval(poly: &[BigInt], re: &BigInt, im: &BigInt, bits: u32) -> ((BigInt, BigInt), (BigInt, BigInt)) {
    let n = poly.len() - 1;
    let mut f = (poly[0].clone(), BigInt::zero());
    let mut d = (BigInt::zero(), BigInt::zero());
    for (k, a) in poly.iter().enumerate().skip(1) {
        // d·z and f are both scaled by 2^{bits·(k-1)}
        let dz = (&d.0 * re - &d.1 * im, &d.0 * im + &d.1 * re);
        d = (dz.0 + &f.0, dz.1 + &f.1);
        let fz = (&f.0 * re - &f.1 * im, &f.0 * im + &f.1 * re);
        f = (fz.0 + (a << (bits as usize * k)), fz.1);
    }
    debug_assert!(n >= 1);
    (f, d)
}

fn gauss_abs_sq(z: &(BigInt, BigInt)) -> BigInt {
    &z.0 * &z.0 + &z.1 * &z.1
}

/// Upper bound of `n·|f(z)|/|f'(z)|`, or `None` if `f'(z) = 0`.
fn root_radius(poly: &[BigInt], re: &BigInt, im: &BigInt, bits: u32) -> Option<f64> {
    let n = poly.len() - 1;
    let (f, d) = exact_eval(poly, re, im, bits);
    let fsq = gauss_abs_sq(&f);
    let dsq = gauss_abs_sq(&d);
    if dsq.is_zero() {
        return None;
    }
    if fsq.is_zero() {
        return Some(0.0);
    }
    // |f/f'|² = fsq/dsq · 2^{-2·bits}
    let (fb, db) = (fsq.bits() as i64, dsq.bits() as i64);
    let ratio = Interval::from_dyadic(&fsq, -fb) / Interval::from_dyadic(&dsq, -db);
    let scale = Interval::from_dyadic(&BigInt::from(1), fb - db - 2 * bits as i64);
    let r = (ratio * scale).sqrt() * Interval::point(n as f64);
    Some(r.hi.max(f64::MIN_POSITIVE))
}

fn certify(poly: &[BigInt], centers: &[(BigInt, BigInt)], bits: u32) -> Option<Vec<RootDisk>> {
    let mut disks = Vec::with_capacity(centers.len());
    for (re, im) in centers {
        let radius = root_radius(poly, re, im, bits)?;
        disks.push(RootDisk { re: re.clone(), im: im.clone(), shift: bits, radius, real: false });
    }
    if !disjoint(&disks) {
        return None;
    }
    for i in 0..disks.len() {
        let im_abs = Interval::from_dyadic(&disks[i].im.abs(), -(bits as i64));
        if im_abs.lo > disks[i].radius {
            continue;
        }
        // try the real center: a symmetric disk holding one root holds a real root
        let snapped_radius = root_radius(poly, &disks[i].re, &BigInt::zero(), bits)?;
        let old = disks[i].clone();
        disks[i].im = BigInt::zero();
        disks[i].radius = snapped_radius;
        disks[i].real = true;
        if !disjoint(&disks) {
            disks[i] = old;
            return None;
        }
    }
    Some(disks)
}

fn disjoint(disks: &[RootDisk]) -> bool {
    for i in 0..disks.len() {
        for j in i + 1..disks.len() {
            let (a, b) = align(&disks[i], &disks[j]);
            let s = disks[i].shift.max(disks[j].shift) as i64;
            let (dre, dim) = (&a.0 - &b.0, &a.1 - &b.1);
            let dist = Interval::from_dyadic(&(&dre * &dre + &dim * &dim), -2 * s).sqrt();
            if !(dist.lo > (disks[i].radius + disks[j].radius).next_up()) {
                return false;
            }
        }
    }
    true
}

/// Coefficient majorant: with roots α_i within r_i of centers z_i,
/// ∑_k |e_k(α) - e_k(z)| ≤ ∏(1 + |z_i| + r_i) - ∏(1 + |z_i|)
/// ≤ ∏(1 + |z_i|)·s·e^s with s = ∑ r_i / (1 + |z_i|).
fn reconstruction_error(poly: &[BigInt], factors: &[LinearFactor]) -> f64 {
    let mut prod = Interval::point(1.0);
    let mut s = Interval::point(0.0);
    for f in factors {
        if let LinearFactor::Finite(r) = f {
            let sq = &r.re * &r.re + &r.im * &r.im;
            let c = Interval::point(1.0) + Interval::from_dyadic(&sq, -2 * r.shift as i64).sqrt();
            prod = prod * c;
            s = s + Interval::point(r.radius) / c;
        }
    }
    let lead = Interval::from_bigint(&poly[0].abs());
    let max_coeff = poly
        .iter()
        .map(|a| Interval::from_bigint(&a.abs()))
        .fold(Interval::point(0.0), Interval::max);
    let dev = prod * s * s.exp() * lead / max_coeff;
    dev.hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::DEFAULT_PRECISION_BITS;

    fn factor(s: &str) -> ComplexFactorization {
        complex_factorization(&s.parse().unwrap(), DEFAULT_PRECISION_BITS).unwrap()
    }

    fn close(z: Complex64, re: f64, im: f64) -> bool {
        (z.re - re).abs() < 1e-12 && (z.im - im).abs() < 1e-12
    }

    #[test]
    fn sum_of_squares() {
        let cf = factor("2: 1 0 1");
        assert_eq!(cf.factors.len(), 2);
        let roots: Vec<_> = cf.factors.iter().map(|f| f.root().unwrap().center()).collect();
        assert!(close(roots[0], 0.0, -1.0));
        assert!(close(roots[1], 0.0, 1.0));
        assert_eq!(cf.real_count(), 0);
        assert!(cf.error_bound < 1e-30);
    }

    #[test]
    fn sum_of_cubes() {
        let cf = factor("3: 1 0 0 1");
        let s = 3f64.sqrt() / 2.0;
        let roots: Vec<_> = cf.factors.iter().map(|f| f.root().unwrap().center()).collect();
        assert!(close(roots[0], -1.0, 0.0));
        assert!(close(roots[1], 0.5, -s));
        assert!(close(roots[2], 0.5, s));
        assert_eq!(cf.real_count(), 1);
        assert!(cf.factors[0].is_real());
    }

    #[test]
    fn split_form_with_root_at_infinity() {
        // XY(X+Y)
        let cf = factor("3: 0 1 1 0");
        assert_eq!(cf.factors.len(), 3);
        assert_eq!(cf.scale, BigInt::from(1));
        assert!(close(cf.factors[0].root().unwrap().center(), -1.0, 0.0));
        assert!(close(cf.factors[1].root().unwrap().center(), 0.0, 0.0));
        assert_eq!(cf.factors[2], LinearFactor::Infinite);
        assert_eq!(cf.real_count(), 3);
    }

    #[test]
    fn reconstruction_matches() {
        for s in ["3: 1 0 0 -2", "4: 1 0 0 1 1", "5: 3 -1 4 1 -5 9", "3: 0 2 -3 7"] {
            let form: BinaryForm = s.parse().unwrap();
            let cf = complex_factorization(&form, 128).unwrap();
            let rec = cf.reconstruct();
            for (c, a) in rec.iter().zip(form.coeffs()) {
                let a = a.to_f64().unwrap();
                assert!((c.re - a).abs() < 1e-9 * (1.0 + a.abs()) && c.im.abs() < 1e-9, "{s}: {rec:?}");
            }
        }
    }

    #[test]
    fn close_roots_need_more_precision() {
        // (X - 1000Y)(X - 1001Y)(X² + Y²) has roots 1 apart at magnitude 1000
        let form = BinaryForm::from_i64(&[1, -2001, 1_001_001, -2001, 1_001_000]).unwrap();
        let cf = complex_factorization(&form, 64).unwrap();
        assert_eq!(cf.real_count(), 2);
        assert!(close(cf.factors[2].root().unwrap().center(), 1000.0, 0.0));
        assert!(close(cf.factors[3].root().unwrap().center(), 1001.0, 0.0));
    }

    #[test]
    fn rejects_zero_discriminant() {
        let form: BinaryForm = "2: 1 2 1".parse().unwrap();
        assert!(matches!(complex_factorization(&form, 128), Err(ThueError::RejectedInput(_))));
    }
}
