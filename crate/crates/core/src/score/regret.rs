//! Parametric complexity of the categorical model: the normalizer of its
//! NML distribution, `R(n, C) = Σ_{z ∈ [C]^n} P_ML(z)`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};

/// Memoized `log2 R(n, C)` for one class count `C`, filled on demand.
#[derive(Debug)]
pub struct RegretTable {
    n_classes: usize,
    log2_values: RwLock<Vec<f64>>,
}

impl RegretTable {
    pub fn new(n_classes: usize) -> Self {
        assert!(n_classes >= 1);
        Self { n_classes, log2_values: RwLock::new(Vec::new()) }
    }

    /// Process-wide table for `n_classes`.
    pub fn shared(n_classes: usize) -> Arc<Self> {
        static TABLES: OnceLock<RwLock<HashMap<usize, Arc<RegretTable>>>> = OnceLock::new();
        let tables = TABLES.get_or_init(Default::default);
        if let Some(t) = tables.read().expect("regret tables poisoned").get(&n_classes) {
            return Arc::clone(t);
        }
        let mut w = tables.write().expect("regret tables poisoned");
        Arc::clone(w.entry(n_classes).or_insert_with(|| Arc::new(Self::new(n_classes))))
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn log2_regret(&self, n: usize) -> f64 {
        {
            let values = self.log2_values.read().expect("regret table poisoned");
            if let Some(&v) = values.get(n) {
                if !v.is_nan() {
                    return v;
                }
            }
        }
        let v = ln_regret(n, self.n_classes) / std::f64::consts::LN_2;
        let mut values = self.log2_values.write().expect("regret table poisoned");
        if values.len() <= n {
            values.resize(n + 1, f64::NAN);
        }
        values[n] = v;
        v
    }

    pub fn regret(&self, n: usize) -> f64 {
        self.log2_regret(n).exp2()
    }

    /// NML code length of labels with these class counts: ML code length
    /// plus `log2 R(n, C)`.
    pub fn nml_bits(&self, counts: &[u64]) -> f64 {
        let n: u64 = counts.iter().sum();
        ml_code_bits(counts) + self.log2_regret(n as usize)
    }
}

/// `R(n, C)` from the process-wide table.
pub fn regret(n: usize, n_classes: usize) -> f64 {
    RegretTable::shared(n_classes).regret(n)
}

/// `-log2` of the maximized likelihood of labels with these counts.
pub fn ml_code_bits(counts: &[u64]) -> f64 {
    let n: u64 = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let log_n = (n as f64).log2();
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| c as f64 * (log_n - (c as f64).log2()))
        .sum()
}

/// Natural log of `R(n, C)`: the binary case by its binomial sum in log
/// space, larger `C` by `R(n, c) = R(n, c-1) + n/(c-2) · R(n, c-2)`.
fn ln_regret(n: usize, n_classes: usize) -> f64 {
    if n == 0 || n_classes == 1 {
        return 0.0;
    }
    let mut prev2 = 0.0; // ln R(n, 1)
    let mut prev1 = ln_binary_regret(n); // ln R(n, 2)
    for c in 3..=n_classes {
        let next = log_add_exp(prev1, (n as f64 / (c - 2) as f64).ln() + prev2);
        prev2 = prev1;
        prev1 = next;
    }
    prev1
}

fn ln_binary_regret(n: usize) -> f64 {
    // ln n! for 0..=n, then ln of each term C(n,h) (h/n)^h ((n-h)/n)^(n-h).
    let mut ln_fact = Vec::with_capacity(n + 1);
    ln_fact.push(0.0);
    let mut acc = 0.0f64;
    for i in 1..=n {
        acc += (i as f64).ln();
        ln_fact.push(acc);
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let xlnx = |k: usize| if k == 0 { 0.0 } else { k as f64 * ((k as f64).ln() - ln_n) };
    let terms: Vec<f64> = (0..=n)
        .map(|h| ln_fact[n] - ln_fact[h] - ln_fact[n - h] + xlnx(h) + xlnx(n - h))
        .collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Largest number of sequences [`regret_bruteforce`] will enumerate.
pub const BRUTEFORCE_LIMIT: u64 = 1 << 20;

/// `R(n, C)` by summing the maximized likelihood of every label sequence.
pub fn regret_bruteforce(n: usize, n_classes: usize) -> Result<f64> {
    let too_large = || Error::SizeTooLarge { n, n_classes };
    let total = (n_classes as u64).checked_pow(n as u32).ok_or_else(too_large)?;
    if n_classes == 0 || total > BRUTEFORCE_LIMIT {
        return Err(too_large());
    }
    let mut sum = 0.0;
    let mut seq = vec![0usize; n];
    for _ in 0..total {
        let mut counts = vec![0u64; n_classes];
        for &s in &seq {
            counts[s] += 1;
        }
        sum += counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| (c as f64 / n as f64).powi(c as i32))
            .product::<f64>();
        // odometer increment
        for digit in seq.iter_mut() {
            *digit += 1;
            if *digit < n_classes {
                break;
            }
            *digit = 0;
        }
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        assert!((regret(1, 2) - 2.0).abs() < 1e-12);
        assert!((regret(2, 2) - 2.5).abs() < 1e-12);
        assert!((regret(2, 3) - 4.5).abs() < 1e-12);
        for c in 1..5 {
            assert_eq!(regret(0, c), 1.0);
        }
        assert_eq!(regret(17, 1), 1.0);
    }

    #[test]
    fn bruteforce_spot_values() {
        assert!((regret_bruteforce(1, 2).unwrap() - 2.0).abs() < 1e-12);
        // 2 sequences with likelihood 1, 6 with (2/3)^2 (1/3)
        let r32 = 2.0 + 6.0 * (2.0f64 / 3.0).powi(2) / 3.0;
        assert!((regret_bruteforce(3, 2).unwrap() - r32).abs() < 1e-12);
        assert!((regret_bruteforce(2, 3).unwrap() - 4.5).abs() < 1e-12);
        assert!(matches!(regret_bruteforce(30, 3), Err(Error::SizeTooLarge { .. })));
    }

    #[test]
    fn matches_bruteforce() {
        for c in 1..=4 {
            for n in 0..=8 {
                let exact = regret_bruteforce(n, c).unwrap();
                let fast = regret(n, c);
                assert!(((fast - exact) / exact).abs() < 1e-9, "n={n} c={c}: {fast} vs {exact}");
            }
        }
    }

    #[test]
    fn monotone_in_n_and_c() {
        let t2 = RegretTable::new(2);
        let t3 = RegretTable::new(3);
        let mut last = 0.0;
        for n in 0..300 {
            let v = t2.log2_regret(n);
            assert!(v >= last);
            assert!(t3.log2_regret(n) >= v);
            last = v;
        }
    }

    #[test]
    fn nml_bits_adds_regret() {
        let t = RegretTable::new(2);
        let bits = t.nml_bits(&[5, 5]);
        assert!((bits - (10.0 + t.log2_regret(10))).abs() < 1e-12);
    }
}
