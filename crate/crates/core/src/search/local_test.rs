//! The MDL local test: a growth step is accepted only if encoding the
//! parent's labels as two parts (child and left-out) plus the split itself
//! is shorter than encoding them as one.

use crate::bitset::Bitset;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::model::counts_of;
use crate::score::RegretTable;

/// Counts-level form of the test.
pub(crate) fn passes(table: &RegretTable, parent: &[u64], child: &[u64], leftout: &[u64], split_bits: f64) -> bool {
    table.nml_bits(parent) > table.nml_bits(child) + table.nml_bits(leftout) + split_bits
}

/// Runs the local test on explicit covers. With `restrict_to`, every cover
/// is first intersected with it (the auxiliary-beam variant, restricted to
/// instances the current model leaves uncovered). `child` and `leftout`
/// must partition `parent` after restriction.
pub fn mdl_local_test(
    ds: &Dataset,
    parent: &Bitset,
    child: &Bitset,
    leftout: &Bitset,
    split_bits: f64,
    restrict_to: Option<&Bitset>,
) -> Result<bool> {
    let restrict = |b: &Bitset| match restrict_to {
        Some(r) => b.and(r),
        None => b.clone(),
    };
    let (parent, child, leftout) = (restrict(parent), restrict(child), restrict(leftout));
    if child.intersects(&leftout) || child.or(&leftout) != parent {
        return Err(Error::CoverMismatch);
    }
    let table = RegretTable::shared(ds.n_classes());
    Ok(passes(
        &table,
        &counts_of(&parent, ds),
        &counts_of(&child, ds),
        &counts_of(&leftout, ds),
        split_bits,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Column;

    fn labelled(labels: Vec<usize>) -> Dataset {
        let n = labels.len();
        Dataset::new(
            (0..n).map(|i| vec![i as f64]).collect(),
            labels,
            vec![Column::numeric("x")],
            vec!["a".into(), "b".into()],
        )
        .unwrap()
    }

    #[test]
    fn pure_split_passes_and_random_split_fails() {
        let ds = labelled((0..200).map(|i| usize::from(i >= 100)).collect());
        let all = Bitset::full(200);
        let low = Bitset::from_fn(200, |i| i < 100);
        let high = all.and_not(&low);
        assert!(mdl_local_test(&ds, &all, &low, &high, 5.0, None).unwrap());

        let ds = labelled((0..200).map(|i| i % 2).collect());
        assert!(!mdl_local_test(&ds, &all, &low, &high, 5.0, None).unwrap());
    }

    #[test]
    fn restriction_and_mismatch() {
        let ds = labelled((0..40).map(|i| usize::from(i >= 20)).collect());
        let all = Bitset::full(40);
        let low = Bitset::from_fn(40, |i| i < 20);
        let high = all.and_not(&low);
        // restricted to a set with one class only, nothing is gained
        let only_low = Bitset::from_fn(40, |i| i < 10);
        assert!(!mdl_local_test(&ds, &all, &low, &high, 1.0, Some(&only_low)).unwrap());
        assert!(matches!(
            mdl_local_test(&ds, &all, &low, &low, 1.0, None),
            Err(Error::CoverMismatch)
        ));
    }
}
