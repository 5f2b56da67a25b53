use serde::{Deserialize, Serialize};

use super::{Dataset, FeatureKind};

/// Candidate thresholds per column. Indicator columns have none.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutPoints {
    per_column: Vec<Vec<f64>>,
}

impl CutPoints {
    pub fn new(per_column: Vec<Vec<f64>>) -> Self {
        Self { per_column }
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.per_column[j]
    }

    pub fn n_columns(&self) -> usize {
        self.per_column.len()
    }
}

/// Lower empirical quantiles at levels `i / (n_cutpoints + 1)`, deduplicated,
/// with values equal to the column minimum or maximum dropped.
pub fn compute_cutpoints(ds: &Dataset, n_cutpoints: usize) -> CutPoints {
    assert!(n_cutpoints >= 1, "n_cutpoints must be positive");
    let per_column = (0..ds.n_cols())
        .map(|j| match ds.columns()[j].kind {
            FeatureKind::Indicator => Vec::new(),
            FeatureKind::Numeric => {
                let mut values: Vec<f64> = ds.column_values(j).collect();
                values.sort_by(f64::total_cmp);
                quantile_cuts(&values, n_cutpoints)
            }
        })
        .collect();
    CutPoints { per_column }
}

fn quantile_cuts(sorted: &[f64], n_cutpoints: usize) -> Vec<f64> {
    let n = sorted.len();
    let (lo, hi) = (sorted[0], sorted[n - 1]);
    let mut cuts: Vec<f64> = Vec::with_capacity(n_cutpoints);
    for i in 1..=n_cutpoints {
        // floor(q * (n - 1)) with q = i / (n_cutpoints + 1), in integers
        let v = sorted[i * (n - 1) / (n_cutpoints + 1)];
        if v > lo && v < hi && cuts.last() != Some(&v) {
            cuts.push(v);
        }
    }
    cuts
}
