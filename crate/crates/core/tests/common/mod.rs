#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use thue_core::arith::valuation;
use thue_core::padic::projective_root_oracle;
use thue_core::{BinaryForm, Result};

/// The forms every property suite runs over, as `"d: a_0 ... a_d"`.
pub const CORPUS: [&str; 5] = ["3: 1 0 0 1", "3: 1 0 0 -2", "2: 1 0 1", "4: 1 0 0 1 1", "5: 1 0 0 0 0 -2"];

pub const PRIMES_TO_50: [u64; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

/// Stabilized root counts per corpus form and prime from `PRIMES_TO_50`,
/// computed by the numpy oracle (local_counts.py) and checked one level
/// deeper where p^(K+2) was affordable.
pub const STABILIZED_COUNTS: [[usize; 15]; 5] = [
    [1, 1, 1, 3, 1, 3, 1, 3, 1, 1, 3, 3, 1, 3, 1],
    [0, 0, 1, 0, 1, 0, 1, 0, 1, 1, 3, 0, 1, 3, 1],
    [0, 0, 2, 0, 0, 2, 2, 0, 0, 2, 0, 2, 2, 0, 0],
    [0, 1, 1, 0, 1, 0, 1, 1, 2, 2, 0, 0, 0, 1, 2],
    [0, 1, 0, 1, 0, 1, 1, 1, 1, 1, 0, 1, 0, 1, 1],
];

pub fn corpus() -> Vec<BinaryForm> {
    CORPUS.iter().map(|s| s.parse().expect("corpus form")).collect()
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Oracle classes at level K = 2·v_p(D) + 1, reduced mod p^{v_p(D)+1} and
/// deduplicated. Past that level every surviving class sits over exactly
/// one Q_p-rational root.
pub fn stabilized_oracle_count(form: &BinaryForm, p: u64, budget: u64) -> Result<usize> {
    let v = valuation(&form.discriminant(), &BigInt::from(p)).unwrap_or(0);
    let classes = projective_root_oracle(form, p, 2 * v + 1, budget)?;
    let pj = p.pow(v + 1);
    let reduced: BTreeSet<(u64, u64)> = classes.into_iter().map(|(x, y)| (x % pj, y % pj)).collect();
    Ok(reduced.len())
}
