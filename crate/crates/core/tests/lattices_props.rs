use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use thue_core::arith::sigma;
use thue_core::lattices::{
    all_sublattices, enumerate_points, from_congruences, hnf_from_generators, reduce, Congruence, Lattice2,
};
use thue_core::padic::LocalFactor;

fn lattice(max_det: i64) -> impl Strategy<Value = Lattice2> {
    (1..=max_det)
        .prop_flat_map(move |a| (Just(a), 0..a, 1..=(max_det / a).max(1)))
        .prop_map(|(a, b, c)| Lattice2::new(a, b, c).unwrap())
}

fn brute_lambda1_sq(l: &Lattice2) -> i128 {
    // λ₁² ≤ 2·det/√3 < 1.2·det
    let r = ((1.2 * l.det() as f64).sqrt().ceil() as i64) + 1;
    let mut best = i128::MAX;
    for x in -r..=r {
        for y in -r..=r {
            if (x, y) != (0, 0) && l.contains(x, y) {
                best = best.min(i128::from(x * x + y * y));
            }
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trip(l in lattice(100_000)) {
        prop_assert_eq!(l.to_string().parse::<Lattice2>().unwrap(), l);
    }

    #[test]
    fn hnf_of_mixed_generators(l in lattice(5000), k in prop::array::uniform4(-7i64..=7)) {
        let [(a, _), (b, c)] = l.basis();
        let mixed = [(k[0] * a + k[1] * b, k[1] * c), (k[2] * a + k[3] * b, k[3] * c)];
        let gens = [l.basis()[0], l.basis()[1], mixed[0], mixed[1]];
        prop_assert_eq!(hnf_from_generators(&gens).unwrap(), l);
        // a unimodular change of basis alone spans the same lattice
        let u = [(a + b, c), (2 * a + 3 * b, 3 * c)];
        prop_assert_eq!(hnf_from_generators(&u).unwrap(), l);
    }

    #[test]
    fn reduce_finds_shortest_vector(l in lattice(10_000)) {
        let rb = reduce(&l);
        prop_assert_eq!(rb.det(), i128::from(l.det()));
        prop_assert!(rb.norm1_sq <= rb.norm2_sq);
        prop_assert!(2 * rb.dot().abs() <= rb.norm1_sq);
        prop_assert!(l.contains(rb.u.0, rb.u.1) && l.contains(rb.w.0, rb.w.1));
        prop_assert_eq!(rb.norm1_sq, brute_lambda1_sq(&l));
        prop_assert!(rb.minkowski_holds());
    }

    #[test]
    fn enumerated_points_are_exactly_the_lattice_points(l in lattice(400), r2 in 0i128..900) {
        let pts: BTreeSet<(i64, i64)> = enumerate_points(&l, r2, 1_000_000).unwrap().into_iter().collect();
        let r = 31i64;
        for x in -r..=r {
            for y in -r..=r {
                let inside = i128::from(x * x + y * y) <= r2 && l.contains(x, y);
                prop_assert_eq!(pts.contains(&(x, y)), inside);
            }
        }
    }

    #[test]
    fn congruence_lattice_determinant(
        picks in prop::collection::btree_set(0usize..6, 1..4),
        data in prop::collection::vec((1u32..4, 0i64..1000, 0i64..1000, any::<bool>()), 6),
    ) {
        let primes = [2i64, 3, 5, 7, 11, 13];
        let mut constraints = Vec::new();
        let mut det = 1i64;
        for &i in &picks {
            let (e, a, b, first_unit) = data[i];
            let p = BigInt::from(primes[i]);
            let (a, b) = if first_unit { (1, b) } else { (a * primes[i], 1) };
            let factor = LocalFactor::new(&p, e + 1, &BigInt::from(a), &BigInt::from(b)).unwrap();
            constraints.push(Congruence { p, e, factor: factor.clone() });
            det *= primes[i].pow(e);
        }
        let l = from_congruences(&constraints).unwrap();
        prop_assert_eq!(l.det(), det);
        for (x, y) in l.basis() {
            for c in &constraints {
                let v = c.factor.eval(&BigInt::from(x), &BigInt::from(y));
                prop_assert!(v % c.p.pow(c.e) == BigInt::from(0));
            }
        }
    }

    #[test]
    fn primitive_vector_lies_in_exactly_one_lattice(m in 1i64..300, x in -200i64..200, y in -200i64..200) {
        prop_assume!(num_integer::Integer::gcd(&x, &y) == 1);
        let hits = all_sublattices(m, 1_000_000).unwrap().filter(|l| l.contains(x, y)).count();
        prop_assert_eq!(hits, 1);
    }
}

#[test]
fn sublattice_counts_are_sigma() {
    for m in 1..=500i64 {
        let all: Vec<Lattice2> = all_sublattices(m, 1_000_000).unwrap().collect();
        let distinct: BTreeSet<Lattice2> = all.iter().copied().collect();
        assert_eq!(distinct.len(), all.len());
        assert_eq!(all.len() as u64, sigma(m as u64), "m = {m}");
        assert!(all.iter().all(|l| l.det() == m && l.contains(m, 0) && l.contains(0, m)));
    }
    assert_eq!(all_sublattices(6, 100).unwrap().count(), 12);
    assert_eq!(all_sublattices(12, 100).unwrap().count(), 28);
}
