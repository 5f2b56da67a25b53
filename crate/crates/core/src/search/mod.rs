//! Learning a rule set: grow one rule at a time with a diverse dual beam,
//! keep it while the MDL score drops.

mod beam;
mod candidates;
mod config;
mod fit;
mod local_test;
mod state;

pub use candidates::split_code_length;
pub use config::SearchConfig;
pub use fit::{complementary_score, fit, fit_with_trace, learn_single_rule, learning_speed, TraceEvent};
pub use local_test::mdl_local_test;
