use serde::Serialize;

use crate::bitset::Bitset;
use crate::dataset::{compute_cutpoints, Dataset};
use crate::error::{Error, Result};
use crate::model::{rule_cover, Literal, Rule, RuleSetModel};
use crate::score::{rule_code_length, total_score};

use super::beam::{grow_rule, IterationSummary};
use super::config::SearchConfig;
use super::state::{ModelState, SearchContext};

/// One line of a fitting trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    BeamIteration {
        rule_index: usize,
        iteration: usize,
        model_coverage: u64,
        model_total_bits: f64,
        best_learning_speed: Option<f64>,
        best_complementary: Option<f64>,
        beam: Vec<String>,
        auxiliary_beam: Vec<String>,
    },
    RuleAccepted {
        rule_index: usize,
        rule: String,
        coverage: u64,
        total_bits: f64,
    },
    Stopped {
        reason: String,
        n_rules: usize,
        total_bits: f64,
    },
}

fn describe(literals: &[Literal], names: &[String]) -> String {
    literals.iter().map(|l| l.display(names).to_string()).collect::<Vec<_>>().join(" AND ")
}

/// Learns a rule set by repeatedly growing the rule with the best learning
/// speed and keeping it while it lowers the total score.
pub fn fit(ds: &Dataset, cfg: &SearchConfig) -> Result<RuleSetModel> {
    fit_with_trace(ds, cfg, |_| {})
}

pub fn fit_with_trace(
    ds: &Dataset,
    cfg: &SearchConfig,
    mut trace: impl FnMut(&TraceEvent),
) -> Result<RuleSetModel> {
    cfg.validate()?;
    if ds.class_counts().iter().filter(|&&c| c > 0).count() < 2 {
        return Err(Error::SingleClass);
    }
    let cuts = compute_cutpoints(ds, cfg.n_cutpoints);
    let ctx = SearchContext::new(ds, &cuts);
    let names: Vec<String> = ds.columns().iter().map(|c| c.name.clone()).collect();
    let mut state = ModelState::empty(&ctx);
    let reason = loop {
        let rule_index = state.model().n_rules();
        if cfg.max_rules.is_some_and(|m| rule_index >= m) {
            break "rule limit reached";
        }
        let coverage = state.model().covered_count();
        let total = state.total();
        let grown = grow_rule(&ctx, &state, cfg, |s: &IterationSummary| {
            trace(&TraceEvent::BeamIteration {
                rule_index,
                iteration: s.iteration,
                model_coverage: coverage,
                model_total_bits: total,
                best_learning_speed: s.best_speed,
                best_complementary: s.best_complementary,
                beam: s.beam.iter().map(|l| describe(l, &names)).collect(),
                auxiliary_beam: s.auxiliary.iter().map(|l| describe(l, &names)).collect(),
            })
        });
        let Some(entry) = grown else { break "no candidate covers new instances" };
        let rule = entry.rule.as_rule(entry.eval.counts.clone());
        let next = state.with_rule(&ctx, rule, entry.rule.cover.clone());
        debug_assert!((entry.eval.total_with - next.total()).abs() < 1e-6);
        if next.total() < state.total() - cfg.score_tolerance {
            state = next;
            let model = state.model();
            let added = &model.rules()[rule_index];
            trace(&TraceEvent::RuleAccepted {
                rule_index,
                rule: added.display(&names).to_string(),
                coverage: added.coverage(),
                total_bits: state.total(),
            });
        } else {
            break "best rule does not lower the score";
        }
    };
    trace(&TraceEvent::Stopped {
        reason: reason.to_string(),
        n_rules: state.model().n_rules(),
        total_bits: state.total(),
    });
    Ok(state.into_model())
}

/// Grows one rule against `current` (whose rules must be defined on `ds`),
/// without deciding whether to add it.
pub fn learn_single_rule(current: &RuleSetModel, ds: &Dataset, cfg: &SearchConfig) -> Result<Option<Rule>> {
    cfg.validate()?;
    if current.n_columns() != ds.n_cols() {
        return Err(Error::DimensionMismatch { expected: current.n_columns(), got: ds.n_cols() });
    }
    let cuts = current.cutpoints().clone();
    let ctx = SearchContext::new(ds, &cuts);
    let state = current_state(&ctx, current);
    Ok(grow_rule(&ctx, &state, cfg, |_| {}).map(|e| e.rule.as_rule(e.eval.counts)))
}

fn current_state(ctx: &SearchContext<'_>, current: &RuleSetModel) -> ModelState {
    let covers = current.rules().iter().map(|r| rule_cover(&r.literals, ctx.ds)).collect();
    ModelState::new(ctx, current.rules().to_vec(), covers)
}

fn check_candidate(current: &RuleSetModel, candidate: &Rule, ds: &Dataset) -> Result<(Vec<Bitset>, Bitset)> {
    if current.n_columns() != ds.n_cols() {
        return Err(Error::DimensionMismatch { expected: current.n_columns(), got: ds.n_cols() });
    }
    rule_code_length(candidate, ds.n_cols())?;
    let covers: Vec<Bitset> = current.rules().iter().map(|r| rule_cover(&r.literals, ds)).collect();
    let cover = rule_cover(&candidate.literals, ds);
    let mut covered = Bitset::empty(ds.n_rows());
    for c in &covers {
        covered.or_assign(c);
    }
    if cover.is_subset(&covered) {
        return Err(Error::NoNewCoverage);
    }
    Ok((covers, cover))
}

/// `(L(M) - L(M ∪ {S})) / |S ∖ covered(M)|`, computed by rebuilding both
/// models from scratch.
pub fn learning_speed(current: &RuleSetModel, candidate: &Rule, ds: &Dataset) -> Result<f64> {
    let (mut covers, cover) = check_candidate(current, candidate, ds)?;
    let before = rebuilt_total(current, ds, &covers, None);
    let new_coverage = cover.iter().filter(|&i| !covers.iter().any(|c| c.contains(i))).count();
    covers.push(cover);
    let after = rebuilt_total(current, ds, &covers, Some(candidate));
    Ok((before - after) / new_coverage as f64)
}

/// Like [`learning_speed`], but the added rule is taken to cover only the
/// instances no rule of `current` covers, leaving existing overlaps alone.
pub fn complementary_score(current: &RuleSetModel, candidate: &Rule, ds: &Dataset) -> Result<f64> {
    let (mut covers, cover) = check_candidate(current, candidate, ds)?;
    let before = rebuilt_total(current, ds, &covers, None);
    let mut uncovered = cover;
    for c in &covers {
        uncovered = uncovered.and_not(c);
    }
    let new_coverage = uncovered.count();
    covers.push(uncovered);
    let after = rebuilt_total(current, ds, &covers, Some(candidate));
    Ok((before - after) / new_coverage as f64)
}

fn rebuilt_total(current: &RuleSetModel, ds: &Dataset, covers: &[Bitset], extra: Option<&Rule>) -> f64 {
    let mut rules = current.rules().to_vec();
    rules.extend(extra.cloned());
    let model = RuleSetModel::build_with_covers(ds, current.cutpoints().clone(), rules, covers);
    total_score(&model).total_bits
}
