use std::fmt;

use serde::{Deserialize, Serialize};

use super::Literal;
use crate::bitset::Bitset;
use crate::dataset::Dataset;

/// A conjunction of literals with the class counts of its training cover.
///
/// `k_values[i]` is the number of admissible threshold values for
/// `literals[i]` at the moment it was added; the rule's code length depends
/// on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub literals: Vec<Literal>,
    pub k_values: Vec<usize>,
    pub class_counts: Vec<u64>,
}

impl Rule {
    pub fn new(literals: Vec<Literal>, k_values: Vec<usize>, class_counts: Vec<u64>) -> Self {
        debug_assert_eq!(literals.len(), k_values.len());
        Self { literals, k_values, class_counts }
    }

    pub fn coverage(&self) -> u64 {
        self.class_counts.iter().sum()
    }

    pub fn prob(&self) -> Vec<f64> {
        ml_estimate(&self.class_counts)
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn matches(&self, row: &[f64]) -> bool {
        self.literals.iter().all(|l| l.matches(row))
    }

    pub fn display<'a>(&'a self, column_names: &'a [String]) -> impl fmt::Display + 'a {
        RuleDisplay { rule: self, names: column_names }
    }
}

/// Class frequencies; uniform when there are no observations.
pub fn ml_estimate(counts: &[u64]) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        let c = counts.len() as f64;
        return vec![1.0 / c; counts.len()];
    }
    let total = total as f64;
    counts.iter().map(|&c| c as f64 / total).collect()
}

/// Rows of `ds` satisfying every literal. No literals covers everything.
pub fn rule_cover(literals: &[Literal], ds: &Dataset) -> Bitset {
    Bitset::from_fn(ds.n_rows(), |i| {
        let row = ds.row(i);
        literals.iter().all(|l| l.matches(row))
    })
}

pub fn counts_of(cover: &Bitset, ds: &Dataset) -> Vec<u64> {
    let mut counts = vec![0u64; ds.n_classes()];
    for i in cover.iter() {
        counts[ds.labels()[i]] += 1;
    }
    counts
}

pub(crate) fn format_probs(p: &[f64]) -> String {
    let parts: Vec<String> = p.iter().map(|v| format!("{v:.2}")).collect();
    format!("[{}]", parts.join(", "))
}

struct RuleDisplay<'a> {
    rule: &'a Rule,
    names: &'a [String],
}

impl fmt::Display for RuleDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IF ")?;
        for (i, lit) in self.rule.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " AND ")?;
            }
            write!(f, "{}", lit.display(self.names))?;
        }
        write!(
            f,
            " THEN p = {} (n={})",
            format_probs(&self.rule.prob()),
            self.rule.coverage()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Column;

    #[test]
    fn ml_estimates() {
        assert_eq!(ml_estimate(&[7, 3]), vec![0.7, 0.3]);
        assert_eq!(ml_estimate(&[0, 0]), vec![0.5, 0.5]);
        assert_eq!(ml_estimate(&[2, 2, 6]), vec![0.2, 0.2, 0.6]);
    }

    fn grid() -> Dataset {
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![(i % 5) as f64, (i / 5) as f64]).collect();
        Dataset::new(
            rows,
            (0..20).map(|i| i % 2).collect(),
            vec![Column::numeric("a"), Column::numeric("b")],
            vec!["n".into(), "p".into()],
        )
        .unwrap()
    }

    #[test]
    fn covers() {
        let ds = grid();
        assert_eq!(rule_cover(&[], &ds), Bitset::full(20));
        assert!(rule_cover(&[Literal::interval(0, 10.0, 11.0)], &ds).is_empty());
        let a = Literal::ge(0, 2.0);
        let b = Literal::lt(1, 3.0);
        let both = rule_cover(&[a, b], &ds);
        let oracle = Bitset::from_fn(20, |i| ((i % 5) as f64) >= 2.0 && ((i / 5) as f64) < 3.0);
        assert_eq!(both, oracle);
        assert_eq!(both, rule_cover(&[a], &ds).and(&rule_cover(&[b], &ds)));
    }

    #[test]
    fn pretty_print() {
        let names = vec!["x1".to_string(), "x3".to_string()];
        let r = Rule::new(
            vec![Literal::ge(1, 2.45), Literal::lt(0, 0.8)],
            vec![20, 20],
            vec![98, 42],
        );
        assert_eq!(
            r.display(&names).to_string(),
            "IF x3 >= 2.45 AND x1 < 0.8 THEN p = [0.70, 0.30] (n=140)"
        );
    }
}
