use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use thue_core::forms::{complex_factorization, det2, height_h, matrix2, DEFAULT_PRECISION_BITS};
use thue_core::BinaryForm;

fn coeffs(max_deg: usize, range: i64) -> impl Strategy<Value = Vec<i64>> {
    (2usize..=max_deg).prop_flat_map(move |d| prop::collection::vec(-range..=range, d + 1))
}

fn form(max_deg: usize, range: i64) -> impl Strategy<Value = BinaryForm> {
    coeffs(max_deg, range).prop_filter_map("nonzero", |c| BinaryForm::from_i64(&c).ok())
}

fn separable(max_deg: usize, range: i64) -> impl Strategy<Value = BinaryForm> {
    form(max_deg, range).prop_filter("separable", |f| !f.discriminant().is_zero())
}

fn matrix(range: i64) -> impl Strategy<Value = [i64; 4]> {
    prop::array::uniform4(-range..=range).prop_filter("nonsingular", |t| t[0] * t[3] - t[1] * t[2] != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn text_round_trip(f in form(6, 50)) {
        let back: BinaryForm = f.to_string().parse().unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn compose_with_identity(f in form(6, 50)) {
        prop_assert_eq!(f.compose(&matrix2(1, 0, 0, 1)).unwrap(), f);
    }

    #[test]
    fn compose_then_evaluate(f in form(6, 20), t in matrix(10), x in -30i64..30, y in -30i64..30) {
        let g = f.compose(&matrix2(t[0], t[1], t[2], t[3])).unwrap();
        prop_assert_eq!(g.evaluate_i64(x, y), f.evaluate_i64(t[0] * x + t[1] * y, t[2] * x + t[3] * y));
    }

    #[test]
    fn content_divides_composition(f in form(5, 20), t in matrix(6)) {
        let g = f.compose(&matrix2(t[0], t[1], t[2], t[3])).unwrap();
        prop_assert!(g.content().is_multiple_of(&f.content()));
    }

    #[test]
    fn discriminant_transforms_by_determinant_power(f in form(6, 20), t in matrix(10)) {
        let m = matrix2(t[0], t[1], t[2], t[3]);
        let d = f.degree() as u32;
        let g = f.compose(&m).unwrap();
        prop_assert_eq!(g.discriminant(), f.discriminant() * det2(&m).pow(d * (d - 1)));
    }

    #[test]
    fn height_at_least_discriminant_power(f in separable(5, 12)) {
        let d = f.degree() as f64;
        let h = height_h(&f).unwrap();
        let lower = f.discriminant().abs().to_f64().unwrap().powf(1.0 / (2.0 * (d - 1.0)));
        prop_assert!(h >= lower * (1.0 - 1e-9), "H = {h} < {lower}");
    }

    #[test]
    fn factorization_reconstructs_coefficients(f in separable(6, 30)) {
        let cf = complex_factorization(&f, DEFAULT_PRECISION_BITS).unwrap();
        prop_assert_eq!(cf.degree(), f.degree());
        // exact product of the dyadic centers over Z[i], scaled by 2^shift
        let shift = cf.factors.iter().filter_map(|l| l.root()).map(|r| r.shift).max().unwrap_or(0);
        let mut re = vec![cf.scale.clone()];
        let mut im = vec![BigInt::zero()];
        let mut scaled_by = 0u32;
        for l in &cf.factors {
            let (u, vr, vi) = match l.root() {
                // 2^shift X - (re + i im) 2^(shift - r.shift) Y
                Some(r) => (BigInt::one() << shift, -(&r.re << (shift - r.shift)), -(&r.im << (shift - r.shift))),
                None => (BigInt::zero(), BigInt::one() << shift, BigInt::zero()),
            };
            let mut nre = vec![BigInt::zero(); re.len() + 1];
            let mut nim = vec![BigInt::zero(); re.len() + 1];
            for k in 0..re.len() {
                nre[k] += &re[k] * &u;
                nim[k] += &im[k] * &u;
                nre[k + 1] += &re[k] * &vr - &im[k] * &vi;
                nim[k + 1] += &re[k] * &vi + &im[k] * &vr;
            }
            re = nre;
            im = nim;
            scaled_by += shift;
        }
        let max_coeff = f.coeffs().iter().map(|c| c.abs()).max().unwrap().to_f64().unwrap();
        let unscale = |n: &BigInt| thue_core::interval::Interval::from_dyadic(n, -(scaled_by as i64));
        for ((r, i), exact) in re.iter().zip(&im).zip(f.coeffs()) {
            let dr = unscale(&(r - (exact << scaled_by))).abs();
            let di = unscale(i).abs();
            let err = (dr.square() + di.square()).sqrt().hi;
            prop_assert!(err <= cf.error_bound * max_coeff, "{err} > {} for {f}", cf.error_bound * max_coeff);
        }
        // non-real roots come in conjugate pairs
        prop_assert!((f.degree() - cf.real_count()).is_even());
    }

    #[test]
    fn real_roots_vanish(f in separable(5, 12)) {
        let cf = complex_factorization(&f, DEFAULT_PRECISION_BITS).unwrap();
        for l in &cf.factors {
            if let Some(r) = l.root() {
                // |F(α, 1)| is small relative to the coefficient scale
                let c = r.center();
                let mut acc = num_complex::Complex64::zero();
                for a in f.coeffs() {
                    acc = acc * c + a.to_f64().unwrap();
                }
                let scale: f64 = f.coeffs().iter().map(|a| a.abs().to_f64().unwrap()).sum::<f64>() * (1.0 + c.norm()).powi(f.degree() as i32);
                prop_assert!(acc.norm() <= 1e-9 * scale);
            }
        }
    }
}

#[test]
fn discriminant_of_zero_form_is_rejected() {
    assert!(BinaryForm::new(vec![BigInt::zero(); 4]).is_err());
    assert!("2: 1 2 1".parse::<BinaryForm>().unwrap().discriminant().is_zero());
}
