//! Segmentation evaluation: confusion counts at a threshold plus ROC AUC.
//!
//! The threshold counts `score >= threshold` as foreground. AUC integrates
//! the ROC curve by trapezoids with tied scores grouped into single sweep
//! points; a single-class ground truth yields the uninformative 0.5.

use crate::error::{Error, Result};
use crate::field::ScalarField2D;
use crate::synth::BinaryMask;

/// Confusion counts and the derived scores at one threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfusionMetrics {
    pub sensitivity: f64,
    pub specificity: f64,
    pub f1: f64,
    pub auc: f64,
    pub true_pos: u64,
    pub false_pos: u64,
    pub true_neg: u64,
    pub false_neg: u64,
}

/// F1 between two masks, with the empty-denominator convention of 0.
pub fn f1_score(gt: &BinaryMask, pred: &BinaryMask) -> Result<f64> {
    gt.check_same_shape(pred)?;
    let mut tp = 0u64;
    let mut fp = 0u64;
    let mut false_neg = 0u64;
    for (&g, &p) in gt.bits().iter().zip(pred.bits()) {
        match (g != 0, p != 0) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (true, false) => false_neg += 1,
            (false, false) => {}
        }
    }
    let denom = 2 * tp + fp + false_neg;
    if denom == 0 {
        Ok(0.0)
    } else {
        Ok(2.0 * tp as f64 / denom as f64)
    }
}

/// Trapezoidal ROC area over score/label pairs; ties grouped.
fn roc_auc(scores: &[f64], labels: &[u8]) -> f64 {
    let pos: u64 = labels.iter().map(|&l| l as u64).sum();
    let neg = labels.len() as u64 - pos;
    if pos == 0 || neg == 0 {
        return 0.5;
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut auc = 0.0;
    let mut tp = 0u64;
    let mut fp = 0u64;
    let (mut prev_tpr, mut prev_fpr) = (0.0f64, 0.0f64);
    let mut k = 0;
    while k < order.len() {
        // Consume the whole group of equal scores before emitting a point.
        let s = scores[order[k]];
        while k < order.len() && scores[order[k]] == s {
            if labels[order[k]] != 0 {
                tp += 1;
            } else {
                fp += 1;
            }
            k += 1;
        }
        let tpr = tp as f64 / pos as f64;
        let fpr = fp as f64 / neg as f64;
        auc += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
        prev_tpr = tpr;
        prev_fpr = fpr;
    }
    auc
}

/// Confusion metrics of a score field against a binary ground truth.
pub fn compute_metrics(
    gt: &BinaryMask,
    score: &ScalarField2D,
    threshold: f64,
) -> Result<ConfusionMetrics> {
    if gt.shape() != score.shape() {
        let (height, width) = score.shape();
        return Err(Error::ShapeMismatch {
            expected_height: gt.height(),
            expected_width: gt.width(),
            height,
            width,
        });
    }
    if !threshold.is_finite() {
        return Err(Error::InvalidInput(format!(
            "threshold must be finite, got {threshold}"
        )));
    }
    score.check_finite("score field")?;
    if let Some(&bad) = score.data().iter().find(|v| **v < 0.0 || **v > 1.0) {
        return Err(Error::InvalidInput(format!(
            "score value {bad} is outside [0, 1]"
        )));
    }

    let mut tp = 0u64;
    let mut fp = 0u64;
    let mut tn = 0u64;
    let mut false_neg = 0u64;
    for (&g, &s) in gt.bits().iter().zip(score.data()) {
        match (g != 0, s >= threshold) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (false, false) => tn += 1,
            (true, false) => false_neg += 1,
        }
    }

    let ratio = |num: u64, den: u64| {
        if den == 0 {
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    let f1_denom = 2 * tp + fp + false_neg;

    Ok(ConfusionMetrics {
        sensitivity: ratio(tp, tp + false_neg),
        specificity: ratio(tn, tn + fp),
        f1: if f1_denom == 0 {
            0.0
        } else {
            2.0 * tp as f64 / f1_denom as f64
        },
        auc: roc_auc(score.data(), gt.bits()),
        true_pos: tp,
        false_pos: fp,
        true_neg: tn,
        false_neg,
    })
}
