use rand::Rng;

use crate::dataset::{Column, Dataset};
use crate::error::{Error, Result};
use crate::rng;

pub const SIMULATED_FEATURES: usize = 50;

/// Binary features `X1..X50` with `X1 ~ Ber(0.2)` and the rest `Ber(0.5)`;
/// label `1` with probability 0.7 when `X1 = 1` and 0.95 otherwise.
/// Classes are named `"0"` and `"1"`.
pub fn simulate_groundtruth(n: usize, seed: u64) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::InvalidConfig("sample size must be at least 1".into()));
    }
    let mut r = rng::stream(seed, "simulation", 0);
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let mut row = Vec::with_capacity(SIMULATED_FEATURES);
        let x1 = r.gen_bool(0.2);
        row.push(f64::from(u8::from(x1)));
        for _ in 1..SIMULATED_FEATURES {
            row.push(f64::from(u8::from(r.gen_bool(0.5))));
        }
        let y = r.gen_bool(if x1 { 0.7 } else { 0.95 });
        rows.push(row);
        labels.push(usize::from(y));
    }
    let columns = (1..=SIMULATED_FEATURES).map(|j| Column::indicator(format!("X{j}"))).collect();
    Dataset::from_parts(rows, labels, columns, vec!["0".into(), "1".into()])
}
