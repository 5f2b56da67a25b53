use crate::error::{Error, Result};

/// Area under the ROC curve as the Mann–Whitney statistic with midranks:
/// the probability that a random positive scores above a random negative,
/// ties counting one half.
pub fn roc_auc_binary(scores: &[f64], positive: &[bool]) -> Result<f64> {
    if scores.len() != positive.len() {
        return Err(Error::DimensionMismatch { expected: scores.len(), got: positive.len() });
    }
    let n_pos = positive.iter().filter(|&&p| p).count();
    let n_neg = positive.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut pos_rank_sum = 0.0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        // ranks start+1 ..= end share their mean
        let midrank = (start + 1 + end) as f64 / 2.0;
        let tied_pos = order[start..end].iter().filter(|&&i| positive[i]).count();
        pos_rank_sum += midrank * tied_pos as f64;
        start = end;
    }
    let u = pos_rank_sum - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos as f64 * n_neg as f64))
}

/// Unweighted mean over classes of the one-vs-rest AUC. Every class must
/// occur in `labels` (and not be the only one).
pub fn macro_ovr_auc(probs: &[Vec<f64>], labels: &[usize], n_classes: usize) -> Result<f64> {
    if probs.len() != labels.len() {
        return Err(Error::DimensionMismatch { expected: labels.len(), got: probs.len() });
    }
    if let Some(row) = probs.iter().find(|p| p.len() != n_classes) {
        return Err(Error::DimensionMismatch { expected: n_classes, got: row.len() });
    }
    let mut total = 0.0;
    for c in 0..n_classes {
        let scores: Vec<f64> = probs.iter().map(|p| p[c]).collect();
        let positive: Vec<bool> = labels.iter().map(|&y| y == c).collect();
        total += roc_auc_binary(&scores, &positive)?;
    }
    Ok(total / n_classes as f64)
}
