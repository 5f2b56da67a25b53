//! Truly unordered probabilistic rule sets.
//!
//! Rules are learned without an order: an instance covered by several rules
//! is predicted from the union of their covers, and the rule set is chosen
//! by a minimum description length score. See [`search::fit`] for learning,
//! [`model::RuleSetModel`] for prediction, and [`eval`] for the evaluation
//! harness.

pub mod bitset;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod model;
pub mod rng;
pub mod score;
pub mod search;

pub use dataset::{load_csv, Dataset};
pub use error::{Error, Result};
pub use model::{Literal, PredictedDistribution, Provenance, Rule, RuleSetModel};
pub use score::{total_score, ScoreBreakdown};
pub use search::{fit, fit_with_trace, SearchConfig, TraceEvent};
