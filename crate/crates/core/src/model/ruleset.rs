use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::rule::{format_probs, ml_estimate, rule_cover};
use super::Rule;
use crate::bitset::Bitset;
use crate::dataset::{Column, CutPoints, Dataset};
use crate::error::{Error, Result};
use crate::rng;
use crate::score::{total_score, ScoreBreakdown};

pub const MODEL_FORMAT: &str = "turs-model";
pub const MODEL_VERSION: u32 = 1;

/// Training instances covered by exactly the rules in `rules` (sorted).
/// The empty signature is the else rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignatureGroup {
    pub rules: Vec<usize>,
    pub counts: Vec<u64>,
}

impl SignatureGroup {
    pub fn size(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// The exact partition of a training set by covering-rule sets.
#[derive(Debug, Clone)]
pub struct Signatures {
    /// Groups ordered by their sorted rule-index list; the else group
    /// (empty list) is always first, possibly with zero members.
    pub groups: Vec<SignatureGroup>,
    pub members: Vec<Bitset>,
}

pub fn build_signatures(covers: &[Bitset], ds: &Dataset) -> Signatures {
    let mut table: BTreeMap<Vec<usize>, (Vec<u64>, Bitset)> = BTreeMap::new();
    table.insert(Vec::new(), (vec![0; ds.n_classes()], Bitset::empty(ds.n_rows())));
    for (i, &y) in ds.labels().iter().enumerate() {
        let sig: Vec<usize> = (0..covers.len()).filter(|&r| covers[r].contains(i)).collect();
        let entry = table
            .entry(sig)
            .or_insert_with(|| (vec![0; ds.n_classes()], Bitset::empty(ds.n_rows())));
        entry.0[y] += 1;
        entry.1.insert(i);
    }
    let (groups, members) = table
        .into_iter()
        .map(|(rules, (counts, members))| (SignatureGroup { rules, counts }, members))
        .unzip();
    Signatures { groups, members }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Single(usize),
    Union(Vec<usize>),
    Else,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Single(i) => write!(f, "rule:{i}"),
            Provenance::Union(ids) => {
                let ids: Vec<String> = ids.iter().map(usize::to_string).collect();
                write!(f, "union:{}", ids.join(","))
            }
            Provenance::Else => write!(f, "else"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictedDistribution {
    pub probs: Vec<f64>,
    pub provenance: Provenance,
}

/// A fitted rule set. Everything needed for prediction travels with it; the
/// training data is not required after fitting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleSetModel {
    format: String,
    version: u32,
    columns: Vec<Column>,
    class_names: Vec<String>,
    cutpoints: CutPoints,
    rules: Vec<Rule>,
    else_counts: Vec<u64>,
    signatures: Vec<SignatureGroup>,
    score: ScoreBreakdown,
}

impl RuleSetModel {
    /// Builds the model for `rules` on `ds`. Rule class counts are recomputed
    /// from the covers.
    pub fn build(ds: &Dataset, cutpoints: CutPoints, rules: Vec<Rule>) -> Self {
        let covers: Vec<Bitset> = rules.iter().map(|r| rule_cover(&r.literals, ds)).collect();
        Self::build_with_covers(ds, cutpoints, rules, &covers)
    }

    pub(crate) fn build_with_covers(
        ds: &Dataset,
        cutpoints: CutPoints,
        mut rules: Vec<Rule>,
        covers: &[Bitset],
    ) -> Self {
        let sigs = build_signatures(covers, ds);
        for (rule, cover) in rules.iter_mut().zip(covers) {
            rule.class_counts = super::rule::counts_of(cover, ds);
        }
        let mut model = Self {
            format: MODEL_FORMAT.to_string(),
            version: MODEL_VERSION,
            columns: ds.columns().to_vec(),
            class_names: ds.class_names().to_vec(),
            cutpoints,
            rules,
            else_counts: sigs.groups[0].counts.clone(),
            signatures: sigs.groups,
            score: ScoreBreakdown::default(),
        };
        model.score = total_score(&model);
        model
    }

    pub fn empty(ds: &Dataset, cutpoints: CutPoints) -> Self {
        Self::build_with_covers(ds, cutpoints, Vec::new(), &[])
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn n_rules(&self) -> usize {
        self.rules.len()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn n_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column_names(&self) -> Vec<String> {
        self.columns.iter().map(|c| c.name.clone()).collect()
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn cutpoints(&self) -> &CutPoints {
        &self.cutpoints
    }

    pub fn else_counts(&self) -> &[u64] {
        &self.else_counts
    }

    pub fn else_prob(&self) -> Vec<f64> {
        ml_estimate(&self.else_counts)
    }

    pub fn signatures(&self) -> &[SignatureGroup] {
        &self.signatures
    }

    pub fn score(&self) -> &ScoreBreakdown {
        &self.score
    }

    /// Number of training instances covered by at least one rule.
    pub fn covered_count(&self) -> u64 {
        self.signatures.iter().filter(|g| !g.rules.is_empty()).map(SignatureGroup::size).sum()
    }

    /// Class counts of the union of the rules in `ids`, aggregated over every
    /// signature group that shares a rule with `ids`.
    pub fn union_counts(&self, ids: &[usize]) -> Result<Vec<u64>> {
        if ids.is_empty() {
            return Err(Error::EmptyIndexSet);
        }
        if let Some(&bad) = ids.iter().find(|&&i| i >= self.rules.len()) {
            return Err(Error::RuleIndexOutOfRange { index: bad, n_rules: self.rules.len() });
        }
        let mut counts = vec![0u64; self.n_classes()];
        for g in &self.signatures {
            if g.rules.iter().any(|r| ids.contains(r)) {
                for (c, v) in counts.iter_mut().zip(&g.counts) {
                    *c += v;
                }
            }
        }
        Ok(counts)
    }

    pub fn union_estimate(&self, ids: &[usize]) -> Result<Vec<f64>> {
        Ok(ml_estimate(&self.union_counts(ids)?))
    }

    /// `-log2` likelihood of the training labels: single-rule groups use the
    /// rule's own estimate, overlap groups the estimate on the union of their
    /// rules, and the else group its own frequencies.
    pub fn log_likelihood_bits(&self) -> f64 {
        let mut bits = 0.0;
        for g in &self.signatures {
            let counts = if g.rules.is_empty() {
                g.counts.clone()
            } else {
                self.union_counts(&g.rules).expect("signature indices are valid")
            };
            bits += cross_entropy_bits(&g.counts, &counts);
        }
        bits
    }

    /// Indices of the rules whose condition holds for `row`, ascending.
    pub fn covering_rules(&self, row: &[f64]) -> Result<Vec<usize>> {
        if row.len() != self.columns.len() {
            return Err(Error::DimensionMismatch { expected: self.columns.len(), got: row.len() });
        }
        Ok((0..self.rules.len()).filter(|&i| self.rules[i].matches(row)).collect())
    }

    pub fn predict(&self, row: &[f64]) -> Result<PredictedDistribution> {
        let ids = self.covering_rules(row)?;
        Ok(match ids.len() {
            0 => PredictedDistribution { probs: self.else_prob(), provenance: Provenance::Else },
            1 => PredictedDistribution {
                probs: self.rules[ids[0]].prob(),
                provenance: Provenance::Single(ids[0]),
            },
            _ => PredictedDistribution {
                probs: self.union_estimate(&ids)?,
                provenance: Provenance::Union(ids),
            },
        })
    }

    /// Like [`predict`](Self::predict), but an instance covered by several
    /// rules gets the estimate of one of them, picked uniformly.
    pub fn predict_random_pick_with<R: Rng + ?Sized>(
        &self,
        row: &[f64],
        rng: &mut R,
    ) -> Result<PredictedDistribution> {
        let ids = self.covering_rules(row)?;
        if ids.len() < 2 {
            return self.predict(row);
        }
        let pick = ids[rng.gen_range(0..ids.len())];
        Ok(PredictedDistribution {
            probs: self.rules[pick].prob(),
            provenance: Provenance::Single(pick),
        })
    }

    pub fn predict_random_pick(&self, row: &[f64], seed: u64) -> Result<PredictedDistribution> {
        self.predict_random_pick_with(row, &mut rng::stream(seed, "random-pick", 0))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: Self = serde_json::from_str(text)?;
        model.validate()?;
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidDataset(format!("model file: {msg}")));
        if self.format != MODEL_FORMAT {
            return bad(format!("unknown format `{}`", self.format));
        }
        if self.version != MODEL_VERSION {
            return Err(Error::UnsupportedVersion(self.version));
        }
        let c = self.class_names.len();
        let k = self.rules.len();
        let lengths_ok = self.else_counts.len() == c
            && self.rules.iter().all(|r| r.class_counts.len() == c && r.k_values.len() == r.literals.len())
            && self.signatures.iter().all(|g| g.counts.len() == c);
        if !lengths_ok {
            return bad("count vectors do not match the number of classes".into());
        }
        if self.rules.iter().flat_map(|r| &r.literals).any(|l| l.column >= self.columns.len()) {
            return bad("literal refers to an unknown column".into());
        }
        if self.signatures.iter().flat_map(|g| &g.rules).any(|&i| i >= k) {
            return bad("signature refers to an unknown rule".into());
        }
        let else_group = self.signatures.iter().find(|g| g.rules.is_empty());
        if else_group.map(|g| &g.counts) != Some(&self.else_counts) {
            return bad("else counts disagree with the signature table".into());
        }
        for (i, rule) in self.rules.iter().enumerate() {
            let mut sum = vec![0u64; c];
            for g in self.signatures.iter().filter(|g| g.rules.contains(&i)) {
                for (s, v) in sum.iter_mut().zip(&g.counts) {
                    *s += v;
                }
            }
            if sum != rule.class_counts {
                return bad(format!("rule {i} counts disagree with the signature table"));
            }
        }
        Ok(())
    }
}

/// `-Σ observed[k] · log2(p[k])` with `p` the frequencies of `reference`.
pub(crate) fn cross_entropy_bits(observed: &[u64], reference: &[u64]) -> f64 {
    let total: u64 = reference.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let log_total = (total as f64).log2();
    observed
        .iter()
        .zip(reference)
        .filter(|(&o, _)| o > 0)
        .map(|(&o, &r)| o as f64 * (log_total - (r as f64).log2()))
        .sum()
}

impl fmt::Display for RuleSetModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.column_names();
        for rule in &self.rules {
            writeln!(f, "{}", rule.display(&names))?;
        }
        let n: u64 = self.else_counts.iter().sum();
        writeln!(f, "ELSE p = {} (n={n})", format_probs(&self.else_prob()))
    }
}
