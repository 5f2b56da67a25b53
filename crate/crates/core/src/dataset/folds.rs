use std::io::Write;

use rand::seq::SliceRandom;

use super::Dataset;
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldAssignment {
    folds: Vec<usize>,
    k: usize,
    seed: u64,
}

impl FoldAssignment {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn fold_of(&self, i: usize) -> usize {
        self.folds[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.folds
    }

    /// `(train, test)` row indices for one fold, both ascending.
    pub fn split(&self, fold: usize) -> (Vec<usize>, Vec<usize>) {
        (0..self.folds.len()).partition(|&i| self.folds[i] != fold)
    }

    /// Writes `instance_index,fold` rows with a header.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["instance_index", "fold"])?;
        for (i, f) in self.folds.iter().enumerate() {
            out.write_record([i.to_string(), f.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Shuffles each class with a seeded stream and deals its members round-robin
/// over the folds. The dealing position carries over from one class to the
/// next so fold sizes stay balanced as well.
pub fn stratified_kfold(ds: &Dataset, k: usize, seed: u64) -> Result<FoldAssignment> {
    if k < 2 {
        return Err(Error::InvalidConfig(format!("need at least 2 folds, got {k}")));
    }
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); ds.n_classes()];
    for (i, &y) in ds.labels().iter().enumerate() {
        by_class[y].push(i);
    }
    if let Some((class, members)) = by_class.iter().enumerate().find(|(_, m)| m.len() < k) {
        return Err(Error::ClassTooSmall { class, count: members.len(), folds: k });
    }
    let mut rng = rng::stream(seed, "folds", 0);
    let mut folds = vec![0; ds.n_rows()];
    let mut next = 0;
    for members in &mut by_class {
        members.shuffle(&mut rng);
        for &i in members.iter() {
            folds[i] = next;
            next = (next + 1) % k;
        }
    }
    Ok(FoldAssignment { folds, k, seed })
}
