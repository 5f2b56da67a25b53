//! Code lengths for the model side of the score.

use crate::error::{Error, Result};
use crate::model::{Rule, Test};

/// Additive constant of Rissanen's universal code for positive integers.
pub const RISSANEN_CONSTANT: f64 = 2.865;
const RISSANEN_PRECISION: f64 = 1e-5;

/// `c + log2 k + log2 log2 k + ...`, keeping only terms above the precision.
pub fn rissanen_int_code(k: u64) -> Result<f64> {
    if k == 0 {
        return Err(Error::NonPositiveInteger);
    }
    let mut bits = RISSANEN_CONSTANT;
    let mut term = (k as f64).log2();
    while term > RISSANEN_PRECISION {
        bits += term;
        term = term.log2();
    }
    Ok(bits)
}

pub fn log2_binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    (1..=k).map(|i| ((n - k + i) as f64 / i as f64).log2()).sum()
}

pub fn log2_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).log2()).sum()
}

/// Bits to encode one literal's form, operator, and value(s), given the
/// admissible-value count snapshot taken when it was added.
pub fn literal_value_bits(test: &Test, k_value: usize) -> Option<f64> {
    match test {
        Test::Ge { .. } | Test::Lt { .. } => (k_value >= 1).then(|| 2.0 + (k_value as f64).log2()),
        Test::Interval { .. } => (k_value >= 2).then(|| 1.0 + log2_binomial(k_value, 2)),
        Test::Indicator { .. } => Some(1.0),
    }
}

/// `L(S)`: the number of literals and which columns they use (both uniform
/// over `n_cols` columns), then each literal's operator and value.
pub fn rule_code_length(rule: &Rule, n_cols: usize) -> Result<f64> {
    let k = rule.literals.len();
    if k == 0 {
        return Err(Error::EmptyRule);
    }
    let mut bits = (n_cols as f64).log2() + log2_binomial(n_cols, k);
    for (index, (lit, &kv)) in rule.literals.iter().zip(&rule.k_values).enumerate() {
        bits += literal_value_bits(&lit.test, kv).ok_or(Error::ZeroAdmissibleValues { index })?;
    }
    Ok(bits)
}

/// `L(M)` for `K` rules with the given code lengths. `K` is sent as `K + 1`
/// so that the empty rule set has a code word.
pub fn model_code_length_from(rule_bits: &[f64]) -> f64 {
    let k = rule_bits.len();
    rissanen_int_code(k as u64 + 1).expect("K + 1 is positive") + rule_bits.iter().sum::<f64>()
        - log2_factorial(k)
}
