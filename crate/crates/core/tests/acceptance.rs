//! Acceptance checks, one line of output per criterion. Exits nonzero if
//! any criterion fails.

mod common;

use std::time::Instant;

use turs::dataset::{compute_cutpoints, load_csv, Dataset};
use turs::eval::{cross_validate, run_ablation, AblationConfig, AblationReport};
use turs::model::{Literal, Rule, RuleSetModel};
use turs::score::{regret, regret_bits};
use turs::{fit, fit_with_trace, SearchConfig, TraceEvent};

use common::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn ground_truth_recovery(report: &AblationReport) -> Outcome {
    let on = &report.rows[0];
    let recovered_ok = on.recovered >= 95;
    let auc_ok = (on.test_auc.mean - 0.724).abs() <= 0.03;
    let mdl_ok = (on.mdl_bits.mean - 2050.0).abs() <= 0.1 * 2050.0;
    outcome(
        recovered_ok && auc_ok && mdl_ok,
        format!(
            "recovered {}/{} (need >= 95), mean test AUC {:.4} (0.724 ± 0.03), mean MDL {:.2} bits (2050 ± 10%)",
            on.recovered, on.reps, on.test_auc.mean, on.mdl_bits.mean
        ),
    )
}

fn local_test_direction(report: &AblationReport) -> Outcome {
    let (on, off) = (&report.rows[0], &report.rows[1]);
    let diff_on = on.prob_diff.map_or(f64::NAN, |d| d.mean);
    let diff_off = off.prob_diff.map_or(f64::NAN, |d| d.mean);
    outcome(
        off.n_rules.mean > 5.0 && off.mdl_bits.mean > on.mdl_bits.mean && diff_on < diff_off,
        format!(
            "rules on/off {:.2}/{:.2}, MDL on/off {:.2}/{:.2}, train/test prob diff on/off {:.4}/{:.4}",
            on.n_rules.mean, off.n_rules.mean, on.mdl_bits.mean, off.mdl_bits.mean, diff_on, diff_off
        ),
    )
}

fn load(name: &str, target: &str) -> Dataset {
    load_csv(data_dir().join(name), target, None).expect("bundled dataset loads")
}

fn small_datasets() -> (Outcome, Outcome) {
    let cfg = SearchConfig::default();
    let iris = cross_validate(&load("iris.csv", "species"), &cfg, 5, 0).unwrap();
    let diabetes = cross_validate(&load("diabetes.csv", "class"), &cfg, 5, 0).unwrap();
    let gap = |r: &turs::eval::MetricsReport| (r.mean.auc - r.mean.auc_random_pick).abs();
    let unordered = outcome(
        gap(&iris) < 0.01 && gap(&diabetes) < 0.01,
        format!(
            "|AUC - AUC_rp| iris {:.5}, diabetes {:.5} (< 0.01); overlap iris {:.3}, diabetes {:.3}",
            gap(&iris),
            gap(&diabetes),
            iris.mean.pct_overlap,
            diabetes.mean.pct_overlap
        ),
    );
    let sanity = outcome(
        iris.mean.auc >= 0.93 && diabetes.mean.auc >= 0.70,
        format!("mean AUC iris {:.4} (>= 0.93), diabetes {:.4} (>= 0.70)", iris.mean.auc, diabetes.mean.auc),
    );
    (unordered, sanity)
}

fn regret_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    for c in [2, 3] {
        for n in 0..=8 {
            let exact = regret_by_enumeration(n, c);
            worst = worst.max(((regret(n, c) - exact) / exact).abs());
        }
    }
    let spots = [(1, 2, 2.0), (2, 2, 2.5), (2, 3, 4.5)];
    let spots_ok = spots.iter().all(|&(n, c, v)| (regret(n, c) - v).abs() < 1e-12);
    outcome(
        worst < 1e-9 && spots_ok,
        format!("max relative error {worst:.2e} over n <= 8, C in {{2,3}}; spot values R(1,2)=2, R(2,2)=2.5, R(2,3)=4.5 {}", if spots_ok { "hold" } else { "FAIL" }),
    )
}

fn nml_on_disjoint_rules() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..200 {
        let (ds, model, parts) = random_disjoint_model(1000 + seed, 8, 3);
        let approx = model.log_likelihood_bits() + regret_bits(&model);
        let exact = nml_bits_by_enumeration(&parts, ds.labels(), ds.n_classes());
        worst = worst.max((approx - exact).abs());
    }
    outcome(worst < 1e-9, format!("max |approximate - exact NML code length| {worst:.2e} bits over 200 rule sets"))
}

fn regret_growth() -> Outcome {
    let bits = |n: usize| {
        let ds = line_dataset((0..n).map(|i| i % 2).collect(), 2);
        let half = n as f64 / 2.0 - 0.5;
        let rules = vec![
            Rule::new(vec![Literal::lt(0, half)], vec![1], Vec::new()),
            Rule::new(vec![Literal::ge(0, half)], vec![1], Vec::new()),
        ];
        let model = RuleSetModel::build(&ds, compute_cutpoints(&ds, 1), rules);
        assert_eq!(model.covered_count(), n as u64);
        regret_bits(&model)
    };
    let n = 1 << 16;
    let growth = bits(2 * n) - bits(n);
    outcome((0.95..=1.05).contains(&growth), format!("regret_bits(2n) - regret_bits(n) = {growth:.5} bits at n = 2^16"))
}

fn likelihood_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..500 {
        let (ds, model) = random_model(5000 + seed, 50, 4, 3);
        worst = worst.max((model.log_likelihood_bits() - nll_by_scan(&model, &ds)).abs());
    }
    outcome(worst < 1e-9, format!("max |table - per-instance scan| {worst:.2e} bits over 500 models"))
}

fn determinism() -> Outcome {
    let ds = load("diabetes.csv", "class");
    let cfg = SearchConfig::default();
    let mut totals = Vec::new();
    let a = fit_with_trace(&ds, &cfg, |e| {
        if let TraceEvent::RuleAccepted { total_bits, .. } = e {
            totals.push(*total_bits);
        }
    })
    .unwrap();
    let b = fit(&ds, &cfg).unwrap();
    let identical = a.to_json().unwrap() == b.to_json().unwrap();

    let empty = RuleSetModel::empty(&ds, compute_cutpoints(&ds, cfg.n_cutpoints)).score().total_bits;
    let mut seq = vec![empty];
    seq.extend(&totals);
    let decreasing = seq.windows(2).all(|w| w[1] < w[0]);

    let back = RuleSetModel::from_json(&a.to_json().unwrap()).unwrap();
    let same_predictions = (0..ds.n_rows()).all(|i| {
        let (p, q) = (a.predict(ds.row(i)).unwrap(), back.predict(ds.row(i)).unwrap());
        p.provenance == q.provenance && p.probs.iter().zip(&q.probs).all(|(x, y)| x.to_bits() == y.to_bits())
    });
    outcome(
        identical && decreasing && same_predictions && a.n_rules() > 0,
        format!(
            "repeat fit identical: {identical}; {} accepted scores strictly decreasing: {decreasing}; JSON round trip bit-exact: {same_predictions}",
            totals.len()
        ),
    )
}

fn main() {
    let start = Instant::now();
    let ablation = run_ablation(&AblationConfig::default(), &[true, false]).expect("ablation runs");
    let (unordered, sanity) = small_datasets();
    let results = [
        ("1 ground-truth recovery", ground_truth_recovery(&ablation)),
        ("2 local-test ablation direction", local_test_direction(&ablation)),
        ("3 truly unordered (random pick)", unordered),
        ("4 small-dataset AUC", sanity),
        ("5 regret oracle", regret_oracle()),
        ("6 NML on disjoint rules", nml_on_disjoint_rules()),
        ("7 regret growth", regret_growth()),
        ("8 likelihood oracle", likelihood_oracle()),
        ("9 determinism and monotonicity", determinism()),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!("[{}] criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{}/{} criteria passed in {:.1}s", results.len() - failed, results.len(), start.elapsed().as_secs_f64());
    println!("{ablation}");
    if failed > 0 {
        std::process::exit(1);
    }
}
