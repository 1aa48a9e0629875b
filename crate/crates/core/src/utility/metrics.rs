//! Binary classification metrics from scores and true labels.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassificationMetrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Absent when the true labels contain a single class.
    pub roc_auc: Option<f64>,
}

/// Thresholds scores into hard predictions (positive iff score >= threshold)
/// and computes confusion-matrix metrics plus rank-based ROC AUC.
///
/// Zero-denominator conventions: precision is 0 when nothing is predicted
/// positive, recall is 0 when there are no true positives to find.
pub fn classification_metrics(
    y_true: &[bool],
    scores: &[f64],
    threshold: f64,
) -> Result<ClassificationMetrics> {
    if y_true.len() != scores.len() {
        return Err(Error::LengthMismatch {
            left: y_true.len(),
            right: scores.len(),
        });
    }
    if y_true.is_empty() {
        return Err(Error::EmptyInput("no labeled rows to score"));
    }

    let mut tp = 0.0;
    let mut fp = 0.0;
    let mut tn = 0.0;
    let mut fn_ = 0.0;
    for (&truth, &score) in y_true.iter().zip(scores) {
        let predicted = score >= threshold;
        match (truth, predicted) {
            (true, true) => tp += 1.0,
            (false, true) => fp += 1.0,
            (false, false) => tn += 1.0,
            (true, false) => fn_ += 1.0,
        }
    }

    let n = y_true.len() as f64;
    let accuracy = (tp + tn) / n;
    let precision = if tp + fp > 0.0 { tp / (tp + fp) } else { 0.0 };
    let recall = if tp + fn_ > 0.0 { tp / (tp + fn_) } else { 0.0 };
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    let roc_auc = match roc_auc(y_true, scores) {
        Ok(auc) => Some(auc),
        Err(Error::SingleClassTruth) => None,
        Err(e) => return Err(e),
    };

    Ok(ClassificationMetrics {
        accuracy,
        precision,
        recall,
        f1,
        roc_auc,
    })
}

/// Mann-Whitney ROC AUC: the probability a random positive outranks a random
/// negative, with tied scores counting half. Computed via average ranks, so
/// it stays O(n log n) on large evaluation sets.
pub fn roc_auc(y_true: &[bool], scores: &[f64]) -> Result<f64> {
    if y_true.len() != scores.len() {
        return Err(Error::LengthMismatch {
            left: y_true.len(),
            right: scores.len(),
        });
    }
    let n_pos = y_true.iter().filter(|t| **t).count();
    let n_neg = y_true.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClassTruth);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    // Average 1-based ranks over tie groups, summed for positives.
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        let avg_rank = (i + 1 + j) as f64 / 2.0; // mean of ranks i+1 ..= j
        for &row in &order[i..j] {
            if y_true[row] {
                rank_sum_pos += avg_rank;
            }
        }
        i = j;
    }

    let n_pos = n_pos as f64;
    let auc = (rank_sum_pos - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg as f64);
    Ok(auc.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn confusion_matrix_hand_example() {
        // TP=2, FP=1, FN=1, TN=6.
        let y_true = [
            true, true, true, false, false, false, false, false, false, false,
        ];
        let scores = [0.9, 0.8, 0.2, 0.7, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1];
        let m = classification_metrics(&y_true, &scores, 0.5).unwrap();
        assert!((m.accuracy - 0.8).abs() < 1e-12);
        assert!((m.precision - 2.0 / 3.0).abs() < 1e-12);
        assert!((m.recall - 2.0 / 3.0).abs() < 1e-12);
        assert!((m.f1 - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn f1_harmonic_identity() {
        let y_true = [true, true, false, false, true, false];
        let scores = [0.9, 0.2, 0.6, 0.1, 0.7, 0.8];
        let m = classification_metrics(&y_true, &scores, 0.5).unwrap();
        let expected = 2.0 * m.precision * m.recall / (m.precision + m.recall);
        assert!((m.f1 - expected).abs() < 1e-12);
    }

    #[test]
    fn perfect_ranking_gives_auc_one() {
        let y_true = [false, false, true, true];
        let scores = [0.1, 0.2, 0.8, 0.9];
        assert_eq!(roc_auc(&y_true, &scores).unwrap(), 1.0);
    }

    #[test]
    fn auc_hand_example() {
        let y_true = [true, true, false, false];
        let scores = [0.9, 0.4, 0.6, 0.2];
        assert!((roc_auc(&y_true, &scores).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn tied_scores_count_half() {
        let y_true = [true, false];
        let scores = [0.5, 0.5];
        assert!((roc_auc(&y_true, &scores).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn single_class_truth_reports_absent_auc() {
        let y_true = [true, true];
        let scores = [0.9, 0.1];
        assert!(matches!(
            roc_auc(&y_true, &scores),
            Err(Error::SingleClassTruth)
        ));
        let m = classification_metrics(&y_true, &scores, 0.5).unwrap();
        assert_eq!(m.roc_auc, None);
        assert!((m.accuracy - 0.5).abs() < 1e-12);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        assert!(matches!(
            classification_metrics(&[true], &[0.5, 0.1], 0.5),
            Err(Error::LengthMismatch { .. })
        ));
    }
}
