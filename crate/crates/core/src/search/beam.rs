//! Growing one rule with a main beam ranked by learning speed and an
//! auxiliary beam ranked by the complementary score, each kept diverse by
//! clustering candidates on how much of their parent's cover they keep.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::model::{counts_of, Literal};

use super::candidates::{generate, GrowingRule};
use super::config::SearchConfig;
use super::local_test::passes;
use super::state::{CandidateEval, ModelState, SearchContext};

#[derive(Debug, Clone)]
pub(crate) struct BeamEntry {
    pub rule: GrowingRule,
    pub eval: CandidateEval,
    pub cluster: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Rank {
    Speed,
    Complementary,
}

impl BeamEntry {
    fn score(&self, rank: Rank) -> f64 {
        match rank {
            Rank::Speed => self.eval.learning_speed,
            Rank::Complementary => self.eval.complementary,
        }
    }
}

/// What one beam iteration ended with, for tracing.
#[derive(Debug, Clone)]
pub(crate) struct IterationSummary {
    pub iteration: usize,
    pub best_speed: Option<f64>,
    pub best_complementary: Option<f64>,
    pub beam: Vec<Vec<Literal>>,
    pub auxiliary: Vec<Vec<Literal>>,
}

/// `Greater` if `a` is preferred. Scores within `tol` tie; ties go to larger
/// new coverage, then the smaller last literal, then the smaller literal list.
pub(crate) fn prefer(a: &BeamEntry, b: &BeamEntry, rank: Rank, tol: f64) -> Ordering {
    let (sa, sb) = (a.score(rank), b.score(rank));
    if (sa - sb).abs() > tol {
        return sa.total_cmp(&sb);
    }
    a.eval
        .new_coverage
        .cmp(&b.eval.new_coverage)
        .then_with(|| match (a.rule.literals.last(), b.rule.literals.last()) {
            (Some(x), Some(y)) => y.key_cmp(x),
            _ => Ordering::Equal,
        })
        .then_with(|| {
            for (x, y) in a.rule.literals.iter().zip(&b.rule.literals) {
                match y.key_cmp(x) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            b.rule.literals.len().cmp(&a.rule.literals.len())
        })
}

fn best_index(entries: &[BeamEntry], rank: Rank, tol: f64) -> Option<usize> {
    let mut best: Option<usize> = None;
    for i in 0..entries.len() {
        if best.is_none_or(|b| prefer(&entries[i], &entries[b], rank, tol) == Ordering::Greater) {
            best = Some(i);
        }
    }
    best
}

/// Keeps the best entry per cluster (clusters in ascending order), or the
/// best `width` overall when `diverse` is off. A rule already kept is not
/// kept again.
fn reduce(mut pool: Vec<BeamEntry>, width: usize, diverse: bool, rank: Rank, tol: f64) -> Vec<BeamEntry> {
    let mut kept: Vec<BeamEntry> = Vec::new();
    let mut seen: Vec<Vec<Literal>> = Vec::new();
    if diverse {
        let mut clusters: Vec<usize> = pool.iter().map(|e| e.cluster).collect();
        clusters.sort_unstable();
        clusters.dedup();
        for c in clusters {
            let mut members: Vec<BeamEntry> = Vec::new();
            pool.retain(|e| {
                if e.cluster == c {
                    members.push(e.clone());
                    false
                } else {
                    true
                }
            });
            members.retain(|e| !seen.contains(&e.rule.canonical()));
            if let Some(i) = best_index(&members, rank, tol) {
                seen.push(members[i].rule.canonical());
                kept.push(members.swap_remove(i));
            }
        }
    } else {
        while kept.len() < width {
            pool.retain(|e| !seen.contains(&e.rule.canonical()));
            let Some(i) = best_index(&pool, rank, tol) else { break };
            seen.push(pool[i].rule.canonical());
            kept.push(pool.swap_remove(i));
        }
    }
    kept
}

/// Coverage-ratio cluster in `1..=width`: `[(w-1)/W, w/W)`, with ratio 1
/// in the last cluster.
pub(crate) fn cluster_of(kept: u64, of: u64, width: usize) -> usize {
    let q = kept as f64 / of as f64;
    if q >= 1.0 {
        width
    } else {
        ((q * width as f64).floor() as usize + 1).min(width)
    }
}

/// Grows one rule against the current model. Returns the candidate with the
/// highest learning speed seen in any main beam, or `None` if no candidate
/// covered anything new.
pub(crate) fn grow_rule(
    ctx: &SearchContext<'_>,
    state: &ModelState,
    cfg: &SearchConfig,
    mut on_iteration: impl FnMut(&IterationSummary),
) -> Option<BeamEntry> {
    let n = ctx.ds.n_rows();
    let n_cols = ctx.ds.n_cols();
    let width = cfg.beam_width;
    let tol = cfg.score_tolerance;
    let diverse = cfg.patience_diversity;
    let aux_rank = if cfg.auxiliary_rank_complementary { Rank::Complementary } else { Rank::Speed };
    let else_cover = state.else_cover();

    let mut bases = vec![GrowingRule::root(n)];
    let mut all_candidates: Vec<BeamEntry> = Vec::new();
    let mut prev = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut worse_streak = 0;

    for iteration in 0.. {
        let mut main_pool = Vec::new();
        let mut aux_pool = Vec::new();
        for base in &bases {
            let base_counts = counts_of(&base.cover, ctx.ds);
            let base_else = base.cover.and(else_cover);
            let base_else_counts = counts_of(&base_else, ctx.ds);
            let base_size = base.cover.count() as u64;
            let base_else_size = base_else.count() as u64;

            let scored: Vec<(GrowingRule, CandidateEval, f64)> = generate(ctx, base)
                .into_par_iter()
                .filter_map(|cand| {
                    let bits = cand.rule.code_bits(n_cols);
                    let eval = state.evaluate(ctx, &cand.rule.cover, bits)?;
                    Some((cand.rule, eval, cand.split_bits))
                })
                .collect();

            let mut main_here = Vec::new();
            let mut aux_here = Vec::new();
            for (rule, eval, split_bits) in scored {
                let size: u64 = eval.counts.iter().sum();
                let main_ok = !cfg.local_test || {
                    let leftout: Vec<u64> = base_counts.iter().zip(&eval.counts).map(|(p, c)| p - c).collect();
                    passes(&ctx.regret, &base_counts, &eval.counts, &leftout, split_bits)
                };
                let aux_ok = !cfg.local_test || {
                    let leftout: Vec<u64> =
                        base_else_counts.iter().zip(&eval.else_counts).map(|(p, c)| p - c).collect();
                    passes(&ctx.regret, &base_else_counts, &eval.else_counts, &leftout, split_bits)
                };
                let cluster_main = if diverse { cluster_of(size, base_size, width) } else { 0 };
                let cluster_aux =
                    if diverse { cluster_of(eval.new_coverage, base_else_size, width) } else { 0 };
                match (main_ok, aux_ok) {
                    (true, true) => {
                        aux_here.push(BeamEntry { rule: rule.clone(), eval: eval.clone(), cluster: cluster_aux });
                        main_here.push(BeamEntry { rule, eval, cluster: cluster_main });
                    }
                    (true, false) => main_here.push(BeamEntry { rule, eval, cluster: cluster_main }),
                    (false, true) => aux_here.push(BeamEntry { rule, eval, cluster: cluster_aux }),
                    (false, false) => {}
                }
            }
            main_pool.extend(reduce(main_here, width, diverse, Rank::Speed, tol));
            aux_pool.extend(reduce(aux_here, width, diverse, Rank::Complementary, tol));
        }

        if main_pool.is_empty() && aux_pool.is_empty() {
            break;
        }
        let best_speed = main_pool.iter().map(|e| e.eval.learning_speed).fold(f64::NEG_INFINITY, f64::max);
        let best_comp = aux_pool.iter().map(|e| e.eval.complementary).fold(f64::NEG_INFINITY, f64::max);
        if best_speed <= prev.0 && best_comp <= prev.1 {
            worse_streak += 1;
        } else {
            worse_streak = 0;
        }
        prev = (best_speed, best_comp);

        let beam = reduce(main_pool, width, diverse, Rank::Speed, tol);
        let aux = reduce(aux_pool, width, diverse, aux_rank, tol);
        on_iteration(&IterationSummary {
            iteration,
            best_speed: best_speed.is_finite().then_some(best_speed),
            best_complementary: best_comp.is_finite().then_some(best_comp),
            beam: beam.iter().map(|e| e.rule.literals.clone()).collect(),
            auxiliary: aux.iter().map(|e| e.rule.literals.clone()).collect(),
        });
        if worse_streak >= cfg.k_stop {
            break;
        }
        all_candidates.extend(beam.iter().cloned());

        let mut next: Vec<GrowingRule> = Vec::new();
        let mut seen: Vec<Vec<Literal>> = Vec::new();
        for e in beam.into_iter().chain(aux) {
            let key = e.rule.canonical();
            if !seen.contains(&key) {
                seen.push(key);
                next.push(e.rule);
            }
        }
        bases = next;
    }

    let i = best_index(&all_candidates, Rank::Speed, tol)?;
    Some(all_candidates.swap_remove(i))
}
