use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::model::{counts_of, ml_estimate, rule_cover, RuleSetModel};
use crate::rng;

use super::auc::macro_ovr_auc;

pub const DEFAULT_RANDOM_PICK_REPS: usize = 10;

fn check_columns(model: &RuleSetModel, ds: &Dataset) -> Result<()> {
    if model.n_columns() != ds.n_cols() {
        return Err(Error::DimensionMismatch { expected: model.n_columns(), got: ds.n_cols() });
    }
    if model.n_classes() != ds.n_classes() {
        return Err(Error::DimensionMismatch { expected: model.n_classes(), got: ds.n_classes() });
    }
    Ok(())
}

pub fn predict_probs(model: &RuleSetModel, ds: &Dataset) -> Result<Vec<Vec<f64>>> {
    check_columns(model, ds)?;
    (0..ds.n_rows()).map(|i| Ok(model.predict(ds.row(i))?.probs)).collect()
}

/// Macro one-vs-rest AUC of the model's predictions on `ds` (the plain AUC
/// of the class-1 probability when there are two classes).
pub fn evaluate_auc(model: &RuleSetModel, ds: &Dataset) -> Result<f64> {
    macro_ovr_auc(&predict_probs(model, ds)?, ds.labels(), ds.n_classes())
}

/// Fraction of rows covered by two or more rules.
pub fn pct_overlap(model: &RuleSetModel, ds: &Dataset) -> Result<f64> {
    check_columns(model, ds)?;
    let mut overlapping = 0usize;
    for i in 0..ds.n_rows() {
        if model.covering_rules(ds.row(i))?.len() >= 2 {
            overlapping += 1;
        }
    }
    Ok(overlapping as f64 / ds.n_rows() as f64)
}

/// Mean AUC over `n_reps` rounds of random-pick prediction (one random
/// stream per round, derived from `seed`), and the overlap fraction.
pub fn evaluate_random_pick(model: &RuleSetModel, ds: &Dataset, n_reps: usize, seed: u64) -> Result<(f64, f64)> {
    check_columns(model, ds)?;
    if n_reps == 0 {
        return Err(Error::InvalidConfig("random-pick repetitions must be at least 1".into()));
    }
    // running mean: exact when every repetition gives the same AUC
    let mut mean = 0.0;
    for rep in 0..n_reps {
        let mut r = rng::stream(seed, "random-pick", rep as u64);
        let probs = (0..ds.n_rows())
            .map(|i| Ok(model.predict_random_pick_with(ds.row(i), &mut r)?.probs))
            .collect::<Result<Vec<_>>>()?;
        let auc = macro_ovr_auc(&probs, ds.labels(), ds.n_classes())?;
        mean += (auc - mean) / (rep + 1) as f64;
    }
    Ok((mean, pct_overlap(model, ds)?))
}

/// Per-rule `(training coverage, mean absolute difference between the
/// training estimate and the estimate on the rule's cover in `test`)`.
/// Rules covering nothing in `test` are compared with the uniform
/// distribution.
fn rule_differences(model: &RuleSetModel, test: &Dataset) -> Result<Vec<(f64, f64)>> {
    check_columns(model, test)?;
    if model.n_rules() == 0 {
        return Err(Error::EmptyModel);
    }
    Ok(model
        .rules()
        .iter()
        .map(|rule| {
            let p = rule.prob();
            let q = ml_estimate(&counts_of(&rule_cover(&rule.literals, test), test));
            let diff = p.iter().zip(&q).map(|(a, b)| (a - b).abs()).sum::<f64>() / p.len() as f64;
            (rule.coverage() as f64, diff)
        })
        .collect())
}

/// `(1/K) Σ_j |S_j| · mean_c |p_jc - q_jc|`: training coverage times the
/// train/test probability difference, averaged over rules.
pub fn generalizability_score(model: &RuleSetModel, test: &Dataset) -> Result<f64> {
    let diffs = rule_differences(model, test)?;
    Ok(diffs.iter().map(|(s, d)| s * d).sum::<f64>() / diffs.len() as f64)
}

/// The coverage-weighted mean of the per-rule probability differences.
pub fn generalizability_score_normalized(model: &RuleSetModel, test: &Dataset) -> Result<f64> {
    let diffs = rule_differences(model, test)?;
    let weight: f64 = diffs.iter().map(|(s, _)| s).sum();
    Ok(diffs.iter().map(|(s, d)| s * d).sum::<f64>() / weight)
}

pub fn total_literals(model: &RuleSetModel) -> usize {
    model.rules().iter().map(|r| r.len()).sum()
}

pub fn avg_rule_length(model: &RuleSetModel) -> f64 {
    if model.n_rules() == 0 {
        0.0
    } else {
        total_literals(model) as f64 / model.n_rules() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{compute_cutpoints, Column};
    use crate::model::{Literal, Rule};

    fn ds(rows: Vec<f64>, labels: Vec<usize>) -> Dataset {
        Dataset::from_parts(
            rows.into_iter().map(|x| vec![x]).collect(),
            labels,
            vec![Column::numeric("x")],
            vec!["a".into(), "b".into()],
        )
        .unwrap()
    }

    #[test]
    fn g_score_single_rule() {
        // 20 training rows under x < 20 with p = (0.6, 0.4); test cover q = (0.5, 0.5)
        let train = ds(
            (0..30).map(f64::from).collect(),
            (0..30).map(|i| usize::from((12..20).contains(&i) || i >= 25)).collect(),
        );
        let model = RuleSetModel::build(
            &train,
            compute_cutpoints(&train, 3),
            vec![Rule::new(vec![Literal::lt(0, 20.0)], vec![3], vec![])],
        );
        assert_eq!(model.rules()[0].class_counts, [12, 8]);
        let test = ds(vec![1.0, 2.0, 3.0, 4.0, 25.0], vec![0, 1, 0, 1, 1]);
        assert!((generalizability_score(&model, &test).unwrap() - 2.0).abs() < 1e-12);
        assert!((generalizability_score_normalized(&model, &test).unwrap() - 0.1).abs() < 1e-12);
        assert_eq!(generalizability_score(&model, &train).unwrap(), 0.0);
        assert_eq!(total_literals(&model), 1);

        let empty = RuleSetModel::empty(&train, compute_cutpoints(&train, 3));
        assert!(matches!(generalizability_score(&empty, &test), Err(Error::EmptyModel)));
        assert_eq!(total_literals(&empty), 0);
    }

    #[test]
    fn g_score_two_rules_against_raw_rows() {
        let train = ds((0..40).map(f64::from).collect(), (0..40).map(|i| (i * 7 % 5 == 0) as usize).collect());
        let rules = vec![
            Rule::new(vec![Literal::lt(0, 25.0)], vec![3], vec![]),
            Rule::new(vec![Literal::ge(0, 15.0)], vec![3], vec![]),
        ];
        let model = RuleSetModel::build(&train, compute_cutpoints(&train, 3), rules);
        let test = ds((0..40).map(|i| f64::from(i) + 0.5).collect(), (0..40).map(|i| (i % 3 == 0) as usize).collect());
        let mut expected = 0.0;
        for rule in model.rules() {
            let (mut n, mut pos) = (0.0, 0.0);
            for i in 0..test.n_rows() {
                if rule.matches(test.row(i)) {
                    n += 1.0;
                    pos += test.labels()[i] as f64;
                }
            }
            let q = [1.0 - pos / n, pos / n];
            let p = rule.prob();
            expected += rule.coverage() as f64 * ((p[0] - q[0]).abs() + (p[1] - q[1]).abs()) / 2.0;
        }
        expected /= 2.0;
        assert!((generalizability_score(&model, &test).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn random_pick_without_overlap_is_exact() {
        let train = ds((0..20).map(f64::from).collect(), (0..20).map(|i| usize::from(i % 3 == 0 || i > 14)).collect());
        let rules = vec![
            Rule::new(vec![Literal::lt(0, 5.0)], vec![3], vec![]),
            Rule::new(vec![Literal::ge(0, 12.0)], vec![3], vec![]),
        ];
        let model = RuleSetModel::build(&train, compute_cutpoints(&train, 3), rules);
        let auc = evaluate_auc(&model, &train).unwrap();
        for seed in [0, 1, 99] {
            let (rp, overlap) = evaluate_random_pick(&model, &train, 3, seed).unwrap();
            assert_eq!(rp, auc);
            assert_eq!(overlap, 0.0);
        }
    }
}
