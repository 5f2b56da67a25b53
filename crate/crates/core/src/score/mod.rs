//! The MDL score of a rule set: approximate-NML code length of the labels
//! plus the code length of the rules themselves.

mod codes;
mod regret;

pub use codes::{
    literal_value_bits, log2_binomial, log2_factorial, model_code_length_from, rissanen_int_code,
    rule_code_length, RISSANEN_CONSTANT,
};
pub use regret::{ml_code_bits, regret, regret_bruteforce, RegretTable, BRUTEFORCE_LIMIT};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::RuleSetModel;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ScoreBreakdown {
    pub nll_bits: f64,
    pub regret_bits: f64,
    pub model_bits: f64,
    pub total_bits: f64,
}

impl ScoreBreakdown {
    pub fn new(nll_bits: f64, regret_bits: f64, model_bits: f64) -> Self {
        Self {
            nll_bits,
            regret_bits,
            model_bits,
            total_bits: nll_bits + regret_bits + model_bits,
        }
    }
}

impl fmt::Display for ScoreBreakdown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nll    {:>14.4} bits", self.nll_bits)?;
        writeln!(f, "regret {:>14.4} bits", self.regret_bits)?;
        writeln!(f, "model  {:>14.4} bits", self.model_bits)?;
        write!(f, "total  {:>14.4} bits", self.total_bits)
    }
}

pub fn model_code_length(model: &RuleSetModel) -> f64 {
    let rule_bits: Vec<f64> = model
        .rules()
        .iter()
        .map(|r| rule_code_length(r, model.n_columns()).expect("fitted rules are nonempty"))
        .collect();
    model_code_length_from(&rule_bits)
}

/// Regret of every rule at its full coverage, overlaps counted once per
/// rule, plus the else rule.
pub fn regret_bits(model: &RuleSetModel) -> f64 {
    let table = RegretTable::shared(model.n_classes());
    let else_size: u64 = model.else_counts().iter().sum();
    model
        .rules()
        .iter()
        .map(|r| table.log2_regret(r.coverage() as usize))
        .sum::<f64>()
        + table.log2_regret(else_size as usize)
}

pub fn total_score(model: &RuleSetModel) -> ScoreBreakdown {
    ScoreBreakdown::new(model.log_likelihood_bits(), regret_bits(model), model_code_length(model))
}
