//! Repeated fits on fresh simulated data with the local test on and off.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{RuleSetModel, Test};
use crate::rng::derive_seed;
use crate::search::{fit, SearchConfig};

use super::metrics::{avg_rule_length, evaluate_auc, generalizability_score_normalized};
use super::simulate::simulate_groundtruth;

#[derive(Debug, Clone, PartialEq)]
pub struct AblationConfig {
    pub reps: usize,
    /// Size of both the training and the test sample of each repetition.
    pub n: usize,
    pub seed: u64,
    pub search: SearchConfig,
}

impl Default for AblationConfig {
    fn default() -> Self {
        Self { reps: 100, n: 5000, seed: 0, search: SearchConfig::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationRun {
    pub rep: usize,
    pub local_test: bool,
    pub n_rules: usize,
    pub rule_length: f64,
    pub test_auc: f64,
    pub mdl_bits: f64,
    /// Coverage-weighted train/test probability difference; `None` for an
    /// empty rule set.
    pub prob_diff: Option<f64>,
    /// Exactly one rule, with the single literal `X1 == 1`.
    pub recovered: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanSd {
    pub mean: f64,
    pub sd: f64,
}

impl MeanSd {
    /// Sample standard deviation; 0 for fewer than two values.
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let sd = if values.len() < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        Self { mean, sd }
    }
}

impl fmt::Display for MeanSd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = f.precision().unwrap_or(3);
        write!(f, "{:.p$} (±{:.p$})", self.mean, self.sd)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationRow {
    pub local_test: bool,
    pub n_rules: MeanSd,
    pub rule_length: MeanSd,
    pub test_auc: MeanSd,
    pub mdl_bits: MeanSd,
    pub prob_diff: Option<MeanSd>,
    pub recovered: usize,
    pub reps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationReport {
    pub rows: Vec<AblationRow>,
    pub runs: Vec<AblationRun>,
}

fn is_ground_truth(model: &RuleSetModel) -> bool {
    match model.rules() {
        [rule] => matches!(
            rule.literals.as_slice(),
            [lit] if lit.column == 0 && lit.test == Test::Indicator { value: 1 }
        ),
        _ => false,
    }
}

/// One repetition: fit on a fresh training sample and evaluate on a fresh
/// test sample, both derived from the base seed and `rep`.
pub fn ablation_run(cfg: &AblationConfig, rep: usize, local_test: bool) -> Result<AblationRun> {
    let train = simulate_groundtruth(cfg.n, derive_seed(cfg.seed, "ablation-train", rep as u64))?;
    let test = simulate_groundtruth(cfg.n, derive_seed(cfg.seed, "ablation-test", rep as u64))?;
    let search = SearchConfig { local_test, ..cfg.search.clone() };
    let model = fit(&train, &search)?;
    Ok(AblationRun {
        rep,
        local_test,
        n_rules: model.n_rules(),
        rule_length: avg_rule_length(&model),
        test_auc: evaluate_auc(&model, &test)?,
        mdl_bits: model.score().total_bits,
        prob_diff: (model.n_rules() > 0)
            .then(|| generalizability_score_normalized(&model, &test))
            .transpose()?,
        recovered: is_ground_truth(&model),
    })
}

fn summarize(local_test: bool, runs: &[AblationRun]) -> AblationRow {
    let col = |f: fn(&AblationRun) -> f64| MeanSd::of(&runs.iter().map(f).collect::<Vec<_>>());
    let diffs: Vec<f64> = runs.iter().filter_map(|r| r.prob_diff).collect();
    AblationRow {
        local_test,
        n_rules: col(|r| r.n_rules as f64),
        rule_length: col(|r| r.rule_length),
        test_auc: col(|r| r.test_auc),
        mdl_bits: col(|r| r.mdl_bits),
        prob_diff: (!diffs.is_empty()).then(|| MeanSd::of(&diffs)),
        recovered: runs.iter().filter(|r| r.recovered).count(),
        reps: runs.len(),
    }
}

/// Runs `cfg.reps` repetitions for each local-test setting in `modes`.
/// Repetition `i` uses the same data under every setting.
pub fn run_ablation(cfg: &AblationConfig, modes: &[bool]) -> Result<AblationReport> {
    cfg.search.validate()?;
    let mut rows = Vec::new();
    let mut runs = Vec::new();
    for &local_test in modes {
        let these = (0..cfg.reps)
            .map(|rep| ablation_run(cfg, rep, local_test))
            .collect::<Result<Vec<_>>>()?;
        rows.push(summarize(local_test, &these));
        runs.extend(these);
    }
    Ok(AblationReport { rows, runs })
}

impl fmt::Display for AblationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<10} {:>18} {:>18} {:>18} {:>22} {:>18} {:>10}",
            "local test", "# rules", "rule length", "ROC-AUC", "MDL score", "train/test diff", "recovered"
        )?;
        for (i, row) in self.rows.iter().enumerate() {
            let diff = row.prob_diff.map_or("-".to_string(), |d| format!("{d:.3}"));
            write!(
                f,
                "{:<10} {:>18} {:>18} {:>18} {:>22} {:>18} {:>10}",
                if row.local_test { "yes" } else { "no" },
                format!("{:.2}", row.n_rules),
                format!("{:.2}", row.rule_length),
                format!("{:.3}", row.test_auc),
                format!("{:.3}", row.mdl_bits),
                diff,
                format!("{}/{}", row.recovered, row.reps),
            )?;
            if i + 1 < self.rows.len() {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}
