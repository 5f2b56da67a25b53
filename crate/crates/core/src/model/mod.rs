//! Literals, rules, and rule sets as probabilistic models.
//!
//! An instance covered by one rule gets that rule's class frequencies, an
//! instance covered by several rules gets the frequencies of the union of
//! their covers, and anything else falls to the else rule.

mod literal;
mod rule;
mod ruleset;

pub use literal::{Literal, Test};
pub use rule::{counts_of, ml_estimate, rule_cover, Rule};
pub use ruleset::{
    build_signatures, PredictedDistribution, Provenance, RuleSetModel, SignatureGroup, Signatures,
    MODEL_FORMAT, MODEL_VERSION,
};
