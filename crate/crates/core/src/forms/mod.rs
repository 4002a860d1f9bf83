//! Integer binary forms.
//!
//! A form of degree `d` is stored as its coefficient vector `a_0, ..., a_d`
//! with `F(X, Y) = Σ a_i X^{d-i} Y^i` (no binomial weighting). The text
//! serialization is `"d: a_0 a_1 ... a_d"`, e.g. `"3: 1 0 0 1"` for X³+Y³.

mod approx;
mod roots;

pub use approx::{
    approx_witness, epsilon_exceptional, height_h, height_interval, min_on_unit_circle, ApproxWitness,
    ExceptionalVerdict,
};
pub use roots::{complex_factorization, ComplexFactorization, LinearFactor, RootDisk};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Result, ThueError};

/// Default working precision (bits) for complex root isolation.
pub const DEFAULT_PRECISION_BITS: u32 = 128;
/// Precision is doubled on certification failure up to this cap.
pub const DEFAULT_PRECISION_CAP: u32 = 4096;

/// 2×2 integer matrix acting on column vectors: `T·(X, Y)ᵀ`.
pub type Matrix2 = [[BigInt; 2]; 2];

pub fn matrix2(a11: i64, a12: i64, a21: i64, a22: i64) -> Matrix2 {
    [
        [BigInt::from(a11), BigInt::from(a12)],
        [BigInt::from(a21), BigInt::from(a22)],
    ]
}

pub fn det2(t: &Matrix2) -> BigInt {
    &t[0][0] * &t[1][1] - &t[0][1] * &t[1][0]
}

/// An integer binary form of degree `d >= 2`, not identically zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    coeffs: Vec<BigInt>,
}

impl BinaryForm {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() < 3 {
            return Err(ThueError::RejectedInput(format!(
                "degree must be at least 2, got {}",
                coeffs.len().saturating_sub(1)
            )));
        }
        if coeffs.iter().all(Zero::is_zero) {
            return Err(ThueError::RejectedInput("all coefficients are zero".into()));
        }
        Ok(BinaryForm { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients `a_0..a_d`; `a_i` multiplies `X^{d-i} Y^i`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn evaluate(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let mut acc = self.coeffs[0].clone();
        let mut ypow = BigInt::one();
        for a in &self.coeffs[1..] {
            ypow *= y;
            acc = acc * x + a * &ypow;
        }
        acc
    }

    pub fn evaluate_i64(&self, x: i64, y: i64) -> BigInt {
        self.evaluate(&BigInt::from(x), &BigInt::from(y))
    }

    /// gcd of all coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, a| g.gcd(a))
    }

    /// Discriminant, normalized so that `D(F) = ∏_{i<j} det(L_i, L_j)²` for
    /// any factorization `F = ∏ L_i` into linear forms.
    pub fn discriminant(&self) -> BigInt {
        form_discriminant(&self.coeffs)
    }

    /// `F(T·(X, Y)ᵀ)`, i.e. `F(t11 X + t12 Y, t21 X + t22 Y)`.
    pub fn compose(&self, t: &Matrix2) -> Result<BinaryForm> {
        if det2(t).is_zero() {
            return Err(ThueError::SingularMatrix);
        }
        let d = self.degree();
        let first = [t[0][0].clone(), t[0][1].clone()];
        let second = [t[1][0].clone(), t[1][1].clone()];
        let mut pow_first = vec![vec![BigInt::one()]];
        let mut pow_second = vec![vec![BigInt::one()]];
        for k in 0..d {
            pow_first.push(poly_mul(&pow_first[k], &first));
            pow_second.push(poly_mul(&pow_second[k], &second));
        }
        let mut out = vec![BigInt::zero(); d + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let term = poly_mul(&pow_first[d - i], &pow_second[i]);
            for (o, c) in out.iter_mut().zip(term) {
                *o += a * c;
            }
        }
        BinaryForm::new(out)
    }

    /// Coefficients (leading first) of `F(t, 1)` with leading zeros removed,
    /// together with the number of removed zeros (the multiplicity of `Y`).
    pub(crate) fn affine_part(&self) -> (Vec<BigInt>, usize) {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (self.coeffs[lead..].to_vec(), lead)
    }

    /// Nonzero discriminant check shared by downstream constructors.
    pub fn require_separable(&self) -> Result<BigInt> {
        let disc = self.discriminant();
        if disc.is_zero() {
            Err(ThueError::RejectedInput(format!("form {self} has zero discriminant")))
        } else {
            Ok(disc)
        }
    }

    pub fn require_primitive(&self) -> Result<()> {
        let c = self.content();
        if c.is_one() {
            Ok(())
        } else {
            Err(ThueError::RejectedInput(format!("form {self} has content {c}, expected 1")))
        }
    }

    /// Coefficients as i128 when they all fit in i64, for the fast evaluator.
    pub fn small_coeffs(&self) -> Option<Vec<i128>> {
        self.coeffs.iter().map(|c| c.to_i64().map(i128::from)).collect()
    }
}

/// Overflow-checked evaluation for small coefficients and coordinates.
#[derive(Debug, Clone)]
pub struct FastEval {
    coeffs: Option<Vec<i128>>,
}

impl FastEval {
    pub fn new(form: &BinaryForm) -> Self {
        FastEval { coeffs: form.small_coeffs() }
    }

    pub fn eval(&self, x: i64, y: i64) -> Option<i128> {
        let c = self.coeffs.as_ref()?;
        let (x, y) = (i128::from(x), i128::from(y));
        let mut acc = c[0];
        let mut ypow: i128 = 1;
        for a in &c[1..] {
            ypow = ypow.checked_mul(y)?;
            acc = acc.checked_mul(x)?.checked_add(a.checked_mul(ypow)?)?;
        }
        Some(acc)
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Discriminant of the form with coefficients `c` (leading first). Leading
/// zeros are factors of Y: D(Y·G) = G(1,0)²·D(G).
fn form_discriminant(c: &[BigInt]) -> BigInt {
    let n = c.len() - 1;
    if n <= 1 {
        return BigInt::one();
    }
    if c[0].is_zero() {
        return &c[1] * &c[1] * form_discriminant(&c[1..]);
    }
    let deriv: Vec<BigInt> = c[..n]
        .iter()
        .enumerate()
        .map(|(k, a)| a * BigInt::from(n - k))
        .collect();
    let res = resultant(c, &deriv);
    let sign_flip = (n * (n - 1) / 2) % 2 == 1;
    let (q, r) = res.div_rem(&c[0]);
    debug_assert!(r.is_zero());
    if sign_flip {
        -q
    } else {
        q
    }
}

/// Resultant of two univariate polynomials (leading coefficient first) as
/// the determinant of their Sylvester matrix.
pub(crate) fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for row in 0..n {
        for (k, a) in f.iter().enumerate() {
            mat[row][row + k] = a.clone();
        }
    }
    for row in 0..m {
        for (k, b) in g.iter().enumerate() {
            mat[n + row][row + k] = b.clone();
        }
    }
    bareiss_det(mat)
}

/// Fraction-free Gaussian elimination.
fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.degree())?;
        for c in &self.coeffs {
            write!(f, " {c}")?;
        }
        Ok(())
    }
}

impl FromStr for BinaryForm {
    type Err = ThueError;

    fn from_str(s: &str) -> Result<Self> {
        let (deg, rest) = s
            .split_once(':')
            .ok_or_else(|| ThueError::Parse(format!("expected \"d: a_0 ... a_d\", got {s:?}")))?;
        let d: usize = deg
            .trim()
            .parse()
            .map_err(|_| ThueError::Parse(format!("bad degree {deg:?}")))?;
        let coeffs = rest
            .split_whitespace()
            .map(|t| t.parse::<BigInt>().map_err(|_| ThueError::Parse(format!("bad coefficient {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() != d + 1 {
            return Err(ThueError::Parse(format!(
                "degree {d} needs {} coefficients, got {}",
                d + 1,
                coeffs.len()
            )));
        }
        BinaryForm::new(coeffs)
    }
}
