//! Metrics and experiment harnesses: ROC-AUC, random-pick evaluation of
//! overlaps, the train/test probability generalizability score, model
//! complexity, cross-validation, and the simulated ablation.

mod ablation;
mod auc;
mod cv;
mod metrics;
mod simulate;

pub use ablation::{
    ablation_run, run_ablation, AblationConfig, AblationReport, AblationRow, AblationRun, MeanSd,
};
pub use auc::{macro_ovr_auc, roc_auc_binary};
pub use cv::{cross_validate, FoldMetrics, MeanMetrics, MetricsReport};
pub use metrics::{
    avg_rule_length, evaluate_auc, evaluate_random_pick, generalizability_score,
    generalizability_score_normalized, pct_overlap, predict_probs, total_literals,
    DEFAULT_RANDOM_PICK_REPS,
};
pub use simulate::{simulate_groundtruth, SIMULATED_FEATURES};
