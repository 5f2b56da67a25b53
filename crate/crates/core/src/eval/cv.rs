use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::dataset::{stratified_kfold, Dataset};
use crate::error::Result;
use crate::score::ScoreBreakdown;
use crate::search::{fit, SearchConfig};

use super::metrics::{
    avg_rule_length, evaluate_auc, evaluate_random_pick, generalizability_score,
    generalizability_score_normalized, total_literals, DEFAULT_RANDOM_PICK_REPS,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldMetrics {
    pub fold: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub auc: f64,
    pub auc_random_pick: f64,
    pub pct_overlap: f64,
    /// `None` when the fitted model has no rules.
    pub g_score: Option<f64>,
    pub g_score_normalized: Option<f64>,
    pub total_literals: usize,
    pub n_rules: usize,
    pub avg_rule_length: f64,
    pub train_auc: f64,
    pub score: ScoreBreakdown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanMetrics {
    pub auc: f64,
    pub auc_random_pick: f64,
    pub auc_difference: f64,
    pub pct_overlap: f64,
    pub g_score: Option<f64>,
    pub g_score_normalized: Option<f64>,
    pub total_literals: f64,
    pub n_rules: f64,
    pub avg_rule_length: f64,
    pub train_auc: f64,
    pub total_bits: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub k: usize,
    pub seed: u64,
    pub folds: Vec<FoldMetrics>,
    pub mean: MeanMetrics,
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    sum / n as f64
}

fn mean_defined(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let defined: Vec<f64> = values.flatten().collect();
    (!defined.is_empty()).then(|| mean(defined.into_iter()))
}

impl MetricsReport {
    fn from_folds(k: usize, seed: u64, folds: Vec<FoldMetrics>) -> Self {
        let m = |f: fn(&FoldMetrics) -> f64| mean(folds.iter().map(f));
        let mean = MeanMetrics {
            auc: m(|f| f.auc),
            auc_random_pick: m(|f| f.auc_random_pick),
            auc_difference: m(|f| f.auc - f.auc_random_pick),
            pct_overlap: m(|f| f.pct_overlap),
            g_score: mean_defined(folds.iter().map(|f| f.g_score)),
            g_score_normalized: mean_defined(folds.iter().map(|f| f.g_score_normalized)),
            total_literals: m(|f| f.total_literals as f64),
            n_rules: m(|f| f.n_rules as f64),
            avg_rule_length: m(|f| f.avg_rule_length),
            train_auc: m(|f| f.train_auc),
            total_bits: m(|f| f.score.total_bits),
        };
        Self { k, seed, folds, mean }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One row per fold.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(w);
        w.write_record([
            "fold",
            "n_train",
            "n_test",
            "auc",
            "auc_random_pick",
            "pct_overlap",
            "g_score",
            "g_score_normalized",
            "total_literals",
            "n_rules",
            "avg_rule_length",
            "train_auc",
            "nll_bits",
            "regret_bits",
            "model_bits",
            "total_bits",
        ])?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for f in &self.folds {
            w.write_record([
                f.fold.to_string(),
                f.n_train.to_string(),
                f.n_test.to_string(),
                f.auc.to_string(),
                f.auc_random_pick.to_string(),
                f.pct_overlap.to_string(),
                opt(f.g_score),
                opt(f.g_score_normalized),
                f.total_literals.to_string(),
                f.n_rules.to_string(),
                f.avg_rule_length.to_string(),
                f.train_auc.to_string(),
                f.score.nll_bits.to_string(),
                f.score.regret_bits.to_string(),
                f.score.model_bits.to_string(),
                f.score.total_bits.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

impl fmt::Display for MetricsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}-fold cross-validation (seed {})", self.k, self.seed)?;
        writeln!(f, "fold  rules  literals     auc   auc_rp  overlap   g_score")?;
        let g = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.3}"));
        for m in &self.folds {
            writeln!(
                f,
                "{:>4}  {:>5}  {:>8}  {:.4}  {:.4}  {:>7.3}  {:>8}",
                m.fold,
                m.n_rules,
                m.total_literals,
                m.auc,
                m.auc_random_pick,
                m.pct_overlap,
                g(m.g_score)
            )?;
        }
        let m = &self.mean;
        writeln!(
            f,
            "mean  {:>5.1}  {:>8.1}  {:.4}  {:.4}  {:>7.3}  {:>8}",
            m.n_rules,
            m.total_literals,
            m.auc,
            m.auc_random_pick,
            m.pct_overlap,
            g(m.g_score)
        )?;
        write!(f, "mean train auc {:.4}, mean score {:.3} bits", m.train_auc, m.total_bits)
    }
}

/// Stratified k-fold cross-validation: fit on each training split and
/// evaluate on the held-out fold.
pub fn cross_validate(ds: &Dataset, cfg: &SearchConfig, k: usize, seed: u64) -> Result<MetricsReport> {
    cfg.validate()?;
    let assignment = stratified_kfold(ds, k, seed)?;
    let mut folds = Vec::with_capacity(k);
    for fold in 0..k {
        let (train_idx, test_idx) = assignment.split(fold);
        let train = ds.subset(&train_idx);
        let test = ds.subset(&test_idx);
        let model = fit(&train, cfg)?;
        let (auc_random_pick, pct_overlap) =
            evaluate_random_pick(&model, &test, DEFAULT_RANDOM_PICK_REPS, seed)?;
        let has_rules = model.n_rules() > 0;
        folds.push(FoldMetrics {
            fold,
            n_train: train.n_rows(),
            n_test: test.n_rows(),
            auc: evaluate_auc(&model, &test)?,
            auc_random_pick,
            pct_overlap,
            g_score: if has_rules { Some(generalizability_score(&model, &test)?) } else { None },
            g_score_normalized: if has_rules {
                Some(generalizability_score_normalized(&model, &test)?)
            } else {
                None
            },
            total_literals: total_literals(&model),
            n_rules: model.n_rules(),
            avg_rule_length: avg_rule_length(&model),
            train_auc: evaluate_auc(&model, &train)?,
            score: *model.score(),
        });
    }
    Ok(MetricsReport::from_folds(k, seed, folds))
}
