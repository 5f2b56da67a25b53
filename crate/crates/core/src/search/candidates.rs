//! One-literal refinements of a growing rule.

use crate::bitset::Bitset;
use crate::dataset::FeatureKind;
use crate::model::{Literal, Rule, Test};
use crate::score::rule_code_length;

use super::state::SearchContext;

/// A rule under construction together with its cover.
#[derive(Debug, Clone)]
pub(crate) struct GrowingRule {
    pub literals: Vec<Literal>,
    pub k_values: Vec<usize>,
    pub cover: Bitset,
}

impl GrowingRule {
    pub fn root(n: usize) -> Self {
        Self { literals: Vec::new(), k_values: Vec::new(), cover: Bitset::full(n) }
    }

    pub fn code_bits(&self, n_cols: usize) -> f64 {
        rule_code_length(&self.as_rule(Vec::new()), n_cols).expect("candidates have literals")
    }

    pub fn as_rule(&self, counts: Vec<u64>) -> Rule {
        Rule::new(self.literals.clone(), self.k_values.clone(), counts)
    }

    /// Literals in a canonical order, for identifying equal rules reached by
    /// different paths.
    pub fn canonical(&self) -> Vec<Literal> {
        let mut lits = self.literals.clone();
        lits.sort_by(Literal::key_cmp);
        lits
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Candidate {
    pub rule: GrowingRule,
    /// Bits to encode which split was chosen, charged by the local test.
    pub split_bits: f64,
}

/// Bits to name the column and one of its `k_value` admissible values.
pub fn split_code_length(n_cols: usize, kind: FeatureKind, k_value: usize) -> f64 {
    let column = (n_cols as f64).log2();
    match kind {
        FeatureKind::Numeric => column + (k_value as f64).log2(),
        FeatureKind::Indicator => column + 1.0,
    }
}

/// Every refinement of `base` by one literal that leaves a strict, nonempty
/// part of its cover. A one-sided literal on a column that already has the
/// opposite side becomes an interval; interval and indicator columns are
/// not refined again.
pub(crate) fn generate(ctx: &SearchContext<'_>, base: &GrowingRule) -> Vec<Candidate> {
    let n_cols = ctx.ds.n_cols();
    let base_size = base.cover.count();
    let admissible = |c: usize| c > 0 && c < base_size;
    let mut out = Vec::new();
    for j in 0..n_cols {
        let kind = ctx.ds.columns()[j].kind;
        let existing = base.literals.iter().position(|l| l.column == j);
        let masks = &ctx.masks[j];
        let cuts = ctx.cuts.column(j);
        match (kind, existing.map(|p| (p, base.literals[p].test))) {
            (FeatureKind::Indicator, None) => {
                let ones = base.cover.and(&masks[0]);
                if !admissible(ones.count()) {
                    continue;
                }
                let split_bits = split_code_length(n_cols, kind, 2);
                let zeros = base.cover.and_not(&masks[0]);
                for (value, cover) in [(1u8, ones), (0u8, zeros)] {
                    out.push(Candidate { rule: extend(base, Literal::indicator(j, value), 2, cover), split_bits });
                }
            }
            (FeatureKind::Numeric, None) => {
                let splits: Vec<(usize, Bitset)> = masks
                    .iter()
                    .enumerate()
                    .filter_map(|(t, m)| {
                        let ge = base.cover.and(m);
                        admissible(ge.count()).then_some((t, ge))
                    })
                    .collect();
                let k = splits.len();
                if k == 0 {
                    continue;
                }
                let split_bits = split_code_length(n_cols, kind, k);
                for (t, ge) in splits {
                    let lt = base.cover.and_not(&masks[t]);
                    out.push(Candidate { rule: extend(base, Literal::ge(j, cuts[t]), k, ge), split_bits });
                    out.push(Candidate { rule: extend(base, Literal::lt(j, cuts[t]), k, lt), split_bits });
                }
            }
            (FeatureKind::Numeric, Some((pos, Test::Ge { value: low }))) => {
                let splits: Vec<(usize, Bitset)> = masks
                    .iter()
                    .enumerate()
                    .filter(|&(t, _)| cuts[t] > low)
                    .filter_map(|(t, m)| {
                        let lt = base.cover.and_not(m);
                        admissible(lt.count()).then_some((t, lt))
                    })
                    .collect();
                push_intervals(&mut out, base, pos, n_cols, splits, |t| Literal::interval(j, low, cuts[t]));
            }
            (FeatureKind::Numeric, Some((pos, Test::Lt { value: high }))) => {
                let splits: Vec<(usize, Bitset)> = masks
                    .iter()
                    .enumerate()
                    .filter(|&(t, _)| cuts[t] < high)
                    .filter_map(|(t, m)| {
                        let ge = base.cover.and(m);
                        admissible(ge.count()).then_some((t, ge))
                    })
                    .collect();
                push_intervals(&mut out, base, pos, n_cols, splits, |t| Literal::interval(j, cuts[t], high));
            }
            _ => {}
        }
    }
    out
}

fn extend(base: &GrowingRule, lit: Literal, k_value: usize, cover: Bitset) -> GrowingRule {
    let mut rule = GrowingRule { literals: base.literals.clone(), k_values: base.k_values.clone(), cover };
    rule.literals.push(lit);
    rule.k_values.push(k_value);
    rule
}

/// Replaces the one-sided literal at `pos` by an interval, moved to the end
/// so the newest literal is always last. The interval keeps the admissible
/// count recorded for the one-sided literal.
fn push_intervals(
    out: &mut Vec<Candidate>,
    base: &GrowingRule,
    pos: usize,
    n_cols: usize,
    splits: Vec<(usize, Bitset)>,
    make: impl Fn(usize) -> Literal,
) {
    if splits.is_empty() {
        return;
    }
    let split_bits = split_code_length(n_cols, FeatureKind::Numeric, splits.len());
    let k_value = base.k_values[pos];
    for (t, cover) in splits {
        let mut rule = GrowingRule { literals: base.literals.clone(), k_values: base.k_values.clone(), cover };
        rule.literals.remove(pos);
        rule.k_values.remove(pos);
        rule.literals.push(make(t));
        rule.k_values.push(k_value);
        out.push(Candidate { rule, split_bits });
    }
}
