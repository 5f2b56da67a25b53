//! Brute-force oracles and fixtures shared by the integration tests.

#![allow(dead_code)]

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use turs::dataset::{compute_cutpoints, Column, Dataset};
use turs::model::{Literal, Rule, RuleSetModel};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn class_names(c: usize) -> Vec<String> {
    (0..c).map(|k| format!("c{k}")).collect()
}

/// One numeric column `x = i`.
pub fn line_dataset(labels: Vec<usize>, n_classes: usize) -> Dataset {
    let n = labels.len();
    Dataset::from_parts((0..n).map(|i| vec![i as f64]).collect(), labels, vec![Column::numeric("x")], class_names(n_classes))
        .unwrap()
}

/// `P_ML` of `labels` restricted to `members`, by counting.
fn ml_likelihood(labels: &[usize], members: &[usize], n_classes: usize) -> f64 {
    let mut counts = vec![0usize; n_classes];
    for &i in members {
        counts[labels[i]] += 1;
    }
    let n = members.len() as f64;
    counts.iter().filter(|&&c| c > 0).map(|&c| (c as f64 / n).powi(c as i32)).product()
}

/// Calls `f` on every sequence in `[n_classes]^n`.
pub fn for_each_sequence(n: usize, n_classes: usize, mut f: impl FnMut(&[usize])) {
    let mut seq = vec![0usize; n];
    loop {
        f(&seq);
        let mut pos = 0;
        loop {
            if pos == n {
                return;
            }
            seq[pos] += 1;
            if seq[pos] < n_classes {
                break;
            }
            seq[pos] = 0;
            pos += 1;
        }
    }
}

/// `R(n, C)` as the sum over all label sequences of their maximized
/// likelihood.
pub fn regret_by_enumeration(n: usize, n_classes: usize) -> f64 {
    let all: Vec<usize> = (0..n).collect();
    let mut sum = 0.0;
    for_each_sequence(n, n_classes, |z| sum += ml_likelihood(z, &all, n_classes));
    sum
}

/// `-log2` of the NML probability of `labels` under the model class that
/// fits one categorical distribution per part of `parts`, normalizing over
/// every label sequence on the same instances.
pub fn nml_bits_by_enumeration(parts: &[Vec<usize>], labels: &[usize], n_classes: usize) -> f64 {
    let lik = |z: &[usize]| parts.iter().map(|p| ml_likelihood(z, p, n_classes)).product::<f64>();
    let mut norm = 0.0;
    for_each_sequence(labels.len(), n_classes, |z| norm += lik(z));
    -(lik(labels) / norm).log2()
}

/// `-Σ log2 p(y_i)`, each instance predicted from the covers found by
/// scanning every instance for membership.
pub fn nll_by_scan(model: &RuleSetModel, ds: &Dataset) -> f64 {
    let n = ds.n_rows();
    let covering: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..model.n_rules()).filter(|&r| model.rules()[r].matches(ds.row(i))).collect())
        .collect();
    let mut bits = 0.0;
    for i in 0..n {
        let ids = &covering[i];
        // the instances whose class frequencies predict instance i
        let pool: Vec<usize> = (0..n)
            .filter(|&j| {
                if ids.is_empty() {
                    covering[j].is_empty()
                } else {
                    covering[j].iter().any(|r| ids.contains(r))
                }
            })
            .collect();
        let same = pool.iter().filter(|&&j| ds.labels()[j] == ds.labels()[i]).count();
        bits -= (same as f64 / pool.len() as f64).log2();
    }
    bits
}

/// A random dataset (two integer-valued numeric columns, one 0/1 column)
/// with a random rule set of up to `max_rules` rules.
pub fn random_model(seed: u64, max_n: usize, max_rules: usize, max_classes: usize) -> (Dataset, RuleSetModel) {
    let mut r = rng(seed);
    let n = r.gen_range(1..=max_n);
    let n_classes = r.gen_range(2..=max_classes);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| vec![r.gen_range(0..10) as f64, r.gen_range(0..10) as f64, r.gen_range(0..2) as f64])
        .collect();
    let labels = (0..n).map(|_| r.gen_range(0..n_classes)).collect();
    let ds = Dataset::from_parts(
        rows,
        labels,
        vec![Column::numeric("a"), Column::numeric("b"), Column::indicator("c")],
        class_names(n_classes),
    )
    .unwrap();
    let k = r.gen_range(0..=max_rules);
    let rules = (0..k).map(|_| random_rule(&mut r)).collect();
    let model = RuleSetModel::build(&ds, compute_cutpoints(&ds, 5), rules);
    (ds, model)
}

pub fn random_rule(r: &mut impl Rng) -> Rule {
    let mut literals = Vec::new();
    let mut k_values = Vec::new();
    match r.gen_range(0..3) {
        0 => literals.push(Literal::ge(0, r.gen_range(1..10) as f64)),
        1 => literals.push(Literal::lt(0, r.gen_range(1..10) as f64)),
        _ => {
            let low = r.gen_range(0..8) as f64;
            literals.push(Literal::interval(0, low, low + r.gen_range(1..4) as f64));
        }
    }
    k_values.push(r.gen_range(2..10));
    if r.gen_bool(0.5) {
        literals.push(Literal::lt(1, r.gen_range(1..10) as f64));
        k_values.push(r.gen_range(1..10));
    }
    if r.gen_bool(0.3) {
        literals.push(Literal::indicator(2, r.gen_range(0..2)));
        k_values.push(2);
    }
    Rule::new(literals, k_values, Vec::new())
}

/// `n` instances on a line, split into consecutive disjoint interval rules
/// over a random subset of the segments; the rest falls to the else rule.
/// Returns the model and its parts (each rule's members, then the else
/// members).
pub fn random_disjoint_model(seed: u64, max_n: usize, max_classes: usize) -> (Dataset, RuleSetModel, Vec<Vec<usize>>) {
    let mut r = rng(seed);
    let n = r.gen_range(1..=max_n);
    let n_classes = r.gen_range(2..=max_classes);
    let labels: Vec<usize> = (0..n).map(|_| r.gen_range(0..n_classes)).collect();
    let ds = line_dataset(labels, n_classes);
    let mut bounds = vec![0usize];
    for i in 1..n {
        if r.gen_bool(0.4) {
            bounds.push(i);
        }
    }
    bounds.push(n);
    let mut rules = Vec::new();
    let mut parts = Vec::new();
    let mut rest = Vec::new();
    for w in bounds.windows(2) {
        let members: Vec<usize> = (w[0]..w[1]).collect();
        if r.gen_bool(0.6) {
            rules.push(Rule::new(
                vec![Literal::interval(0, w[0] as f64 - 0.5, w[1] as f64 - 0.5)],
                vec![2],
                Vec::new(),
            ));
            parts.push(members);
        } else {
            rest.extend(members);
        }
    }
    parts.push(rest);
    let model = RuleSetModel::build(&ds, compute_cutpoints(&ds, 3), rules);
    (ds, model, parts)
}
