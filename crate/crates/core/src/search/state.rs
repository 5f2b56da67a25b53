//! Precomputed literal masks and the incremental scorer used while growing
//! rules against a fixed current model.

use std::sync::Arc;

use crate::bitset::Bitset;
use crate::dataset::{CutPoints, Dataset, FeatureKind};
use crate::model::{Rule, RuleSetModel};
use crate::score::{log2_factorial, rissanen_int_code, RegretTable};

pub(crate) struct SearchContext<'a> {
    pub ds: &'a Dataset,
    pub cuts: &'a CutPoints,
    /// Numeric columns: `x >= cut` per cut point. Indicator columns: a
    /// single mask of `x == 1`.
    pub masks: Vec<Vec<Bitset>>,
    pub regret: Arc<RegretTable>,
    log2_int: Vec<f64>,
}

impl<'a> SearchContext<'a> {
    pub fn new(ds: &'a Dataset, cuts: &'a CutPoints) -> Self {
        let n = ds.n_rows();
        let masks = (0..ds.n_cols())
            .map(|j| match ds.columns()[j].kind {
                FeatureKind::Numeric => cuts
                    .column(j)
                    .iter()
                    .map(|&t| Bitset::from_fn(n, |i| ds.value(i, j) >= t))
                    .collect(),
                FeatureKind::Indicator => vec![Bitset::from_fn(n, |i| ds.value(i, j) == 1.0)],
            })
            .collect();
        let log2_int = (0..=n).map(|i| if i == 0 { 0.0 } else { (i as f64).log2() }).collect();
        Self { ds, cuts, masks, regret: RegretTable::shared(ds.n_classes()), log2_int }
    }

    pub fn n_classes(&self) -> usize {
        self.ds.n_classes()
    }

    pub fn log2_regret(&self, n: u64) -> f64 {
        self.regret.log2_regret(n as usize)
    }

    pub fn ml_bits(&self, counts: &[u64]) -> f64 {
        self.cross_entropy(counts, counts)
    }

    /// `-Σ observed[k] log2 p[k]` with `p` the frequencies of `reference`.
    pub fn cross_entropy(&self, observed: &[u64], reference: &[u64]) -> f64 {
        let total: u64 = reference.iter().sum();
        if total == 0 {
            return 0.0;
        }
        let lt = self.log2_int[total as usize];
        observed
            .iter()
            .zip(reference)
            .filter(|(&o, _)| o > 0)
            .map(|(&o, &r)| o as f64 * (lt - self.log2_int[r as usize]))
            .sum()
    }
}

struct Group {
    union_counts: Vec<u64>,
    /// Nonempty groups whose signature shares a rule with this one,
    /// including itself. Their members make up this group's union cover.
    adjacent: Vec<usize>,
}

/// The current model plus what is needed to score `M ∪ {S}` without
/// rebuilding the signature table.
pub(crate) struct ModelState {
    model: RuleSetModel,
    covers: Vec<Bitset>,
    rule_bits: Vec<f64>,
    else_cover: Bitset,
    group_of: Vec<u32>,
    groups: Vec<Group>,
}

/// Scores of one candidate against the current model.
#[derive(Debug, Clone)]
pub(crate) struct CandidateEval {
    pub counts: Vec<u64>,
    /// Class counts of the candidate's cover restricted to the else group.
    pub else_counts: Vec<u64>,
    pub new_coverage: u64,
    pub learning_speed: f64,
    pub complementary: f64,
    /// Total score of the model with the candidate added.
    pub total_with: f64,
}

impl ModelState {
    pub fn new(ctx: &SearchContext<'_>, rules: Vec<Rule>, covers: Vec<Bitset>) -> Self {
        let n_cols = ctx.ds.n_cols();
        let rule_bits = rules
            .iter()
            .map(|r| crate::score::rule_code_length(r, n_cols).expect("grown rules are nonempty"))
            .collect();
        let model = RuleSetModel::build_with_covers(ctx.ds, ctx.cuts.clone(), rules, &covers);
        let sigs = crate::model::build_signatures(&covers, ctx.ds);
        let n = ctx.ds.n_rows();
        let mut group_of = vec![0u32; n];
        for (g, members) in sigs.members.iter().enumerate() {
            for i in members.iter() {
                group_of[i] = g as u32;
            }
        }
        let c = ctx.n_classes();
        let groups = sigs
            .groups
            .iter()
            .map(|g| {
                let adjacent: Vec<usize> = sigs
                    .groups
                    .iter()
                    .enumerate()
                    .filter(|(_, h)| h.rules.iter().any(|r| g.rules.contains(r)))
                    .map(|(k, _)| k)
                    .collect();
                let mut union_counts = vec![0u64; c];
                for &k in &adjacent {
                    for (u, x) in union_counts.iter_mut().zip(&sigs.groups[k].counts) {
                        *u += x;
                    }
                }
                Group { union_counts, adjacent }
            })
            .collect();
        let else_cover = sigs.members[0].clone();
        Self { model, covers, rule_bits, else_cover, group_of, groups }
    }

    pub fn empty(ctx: &SearchContext<'_>) -> Self {
        Self::new(ctx, Vec::new(), Vec::new())
    }

    pub fn model(&self) -> &RuleSetModel {
        &self.model
    }

    pub fn into_model(self) -> RuleSetModel {
        self.model
    }

    pub fn total(&self) -> f64 {
        self.model.score().total_bits
    }

    pub fn else_cover(&self) -> &Bitset {
        &self.else_cover
    }

    pub fn with_rule(&self, ctx: &SearchContext<'_>, rule: Rule, cover: Bitset) -> Self {
        let mut rules = self.model.rules().to_vec();
        rules.push(rule);
        let mut covers = self.covers.clone();
        covers.push(cover);
        Self::new(ctx, rules, covers)
    }

    /// Learning speed and complementary score of a candidate with cover
    /// `cover` and code length `rule_bits`, or `None` if it covers nothing
    /// the current model leaves to the else rule.
    pub fn evaluate(&self, ctx: &SearchContext<'_>, cover: &Bitset, rule_bits: f64) -> Option<CandidateEval> {
        let c = ctx.n_classes();
        let labels = ctx.ds.labels();
        let mut cnt = vec![0u64; self.groups.len() * c];
        for i in cover.iter() {
            cnt[self.group_of[i] as usize * c + labels[i]] += 1;
        }
        let e = &cnt[..c];
        let new_coverage: u64 = e.iter().sum();
        if new_coverage == 0 {
            return None;
        }
        let mut counts = vec![0u64; c];
        for chunk in cnt.chunks_exact(c) {
            for (a, b) in counts.iter_mut().zip(chunk) {
                *a += b;
            }
        }
        let size: u64 = counts.iter().sum();

        let score = self.model.score();
        let else_counts = self.model.else_counts();
        let else_rest: Vec<u64> = else_counts.iter().zip(e).map(|(a, b)| a - b).collect();
        let else_size: u64 = else_counts.iter().sum();

        let k = self.rule_bits.len();
        let model_with = rissanen_int_code(k as u64 + 2).expect("positive")
            + self.rule_bits.iter().sum::<f64>()
            + rule_bits
            - log2_factorial(k + 1);

        let nll_base = score.nll_bits - ctx.ml_bits(else_counts) + ctx.ml_bits(&else_rest);
        let regret_base = score.regret_bits - ctx.log2_regret(else_size)
            + ctx.log2_regret(else_size - new_coverage);

        // The hypothetical rule covering only the uncovered part of S.
        let comp_total = nll_base
            + ctx.ml_bits(e)
            + regret_base
            + ctx.log2_regret(new_coverage)
            + model_with;

        let mut nll = nll_base + ctx.cross_entropy(e, &counts);
        let mut union_new = vec![0u64; c];
        for (g, group) in self.groups.iter().enumerate().skip(1) {
            let here = &cnt[g * c..(g + 1) * c];
            if here.iter().all(|&x| x == 0) {
                continue;
            }
            // counts(S ∖ U_g) joins the union cover of this group
            for (class, u) in union_new.iter_mut().enumerate() {
                let inside: u64 = group.adjacent.iter().map(|&h| cnt[h * c + class]).sum();
                *u = group.union_counts[class] + counts[class] - inside;
            }
            nll += ctx.cross_entropy(here, &union_new) - ctx.cross_entropy(here, &group.union_counts);
        }
        let total_with = nll + regret_base + ctx.log2_regret(size) + model_with;

        let total = score.total_bits;
        Some(CandidateEval {
            counts,
            else_counts: e.to_vec(),
            new_coverage,
            learning_speed: (total - total_with) / new_coverage as f64,
            complementary: (total - comp_total) / new_coverage as f64,
            total_with,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{compute_cutpoints, Column};
    use crate::model::{rule_cover, Literal};
    use crate::rng;
    use crate::score::{rule_code_length, total_score};
    use rand::Rng;

    fn random_dataset(seed: u64, n: usize, n_classes: usize) -> Dataset {
        let mut r = rng::stream(seed, "state-test", 0);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| vec![r.gen_range(0..10) as f64, r.gen_range(0..10) as f64, f64::from(r.gen_range(0..2u8))])
            .collect();
        let mut labels: Vec<usize> = (0..n).map(|_| r.gen_range(0..n_classes)).collect();
        for (c, l) in labels.iter_mut().take(n_classes).enumerate() {
            *l = c;
        }
        Dataset::new(
            rows,
            labels,
            vec![Column::numeric("a"), Column::numeric("b"), Column::indicator("c")],
            (0..n_classes).map(|c| format!("y{c}")).collect(),
        )
        .unwrap()
    }

    fn random_rule(r: &mut impl Rng) -> Rule {
        let mut literals = vec![if r.gen_bool(0.5) {
            Literal::ge(0, r.gen_range(1..9) as f64)
        } else {
            Literal::lt(0, r.gen_range(1..9) as f64)
        }];
        let mut k_values = vec![r.gen_range(1..10)];
        if r.gen_bool(0.5) {
            let low = r.gen_range(0..5) as f64;
            literals.push(Literal::interval(1, low, low + r.gen_range(1..5) as f64));
            k_values.push(r.gen_range(2..10));
        }
        if r.gen_bool(0.5) {
            literals.push(Literal::indicator(2, r.gen_range(0..2)));
            k_values.push(2);
        }
        Rule::new(literals, k_values, Vec::new())
    }

    #[test]
    fn incremental_scores_match_rebuild() {
        for seed in 0..30 {
            let ds = random_dataset(seed, 120, 2 + (seed as usize % 2));
            let cuts = compute_cutpoints(&ds, 5);
            let ctx = SearchContext::new(&ds, &cuts);
            let mut r = rng::stream(seed, "state-rules", 0);
            let n_existing = r.gen_range(0..4);
            let rules: Vec<Rule> = (0..n_existing).map(|_| random_rule(&mut r)).collect();
            let covers: Vec<Bitset> = rules.iter().map(|x| rule_cover(&x.literals, &ds)).collect();
            let state = ModelState::new(&ctx, rules.clone(), covers.clone());
            for _ in 0..10 {
                let cand = random_rule(&mut r);
                let cover = rule_cover(&cand.literals, &ds);
                let bits = rule_code_length(&cand, 3).unwrap();
                let Some(eval) = state.evaluate(&ctx, &cover, bits) else { continue };
                let mut all_rules = rules.clone();
                all_rules.push(cand.clone());
                let mut all_covers = covers.clone();
                all_covers.push(cover.clone());
                let rebuilt = RuleSetModel::build_with_covers(&ds, cuts.clone(), all_rules, &all_covers);
                let full = total_score(&rebuilt).total_bits;
                assert!((eval.total_with - full).abs() < 1e-9, "seed {seed}: {} vs {full}", eval.total_with);
                let speed = crate::search::learning_speed(state.model(), &cand, &ds).unwrap();
                assert!((eval.learning_speed - speed).abs() < 1e-9);
                let comp = crate::search::complementary_score(state.model(), &cand, &ds).unwrap();
                assert!((eval.complementary - comp).abs() < 1e-9);
            }
        }
    }
}
