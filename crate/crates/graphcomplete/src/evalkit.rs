//! Binary-classification metrics with exact tie handling.
//!
//! ROC-AUC is the rank statistic P(s+ > s-) + 0.5 P(s+ = s-), computed with
//! midranks over tie groups. AP is the step sum over the descending-score
//! ranking with ties broken by stable input order. These conventions are
//! fixed so that cross-implementation numbers match bit for bit.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Scores with their 0/1 labels.
#[derive(Clone, Debug)]
pub struct ScoredLabels {
    scores: Vec<f64>,
    labels: Vec<u8>,
}

impl ScoredLabels {
    pub fn new(scores: Vec<f64>, labels: Vec<u8>) -> Result<ScoredLabels> {
        if scores.len() != labels.len() {
            return Err(Error::invalid(format!(
                "scores ({}) and labels ({}) differ in length",
                scores.len(),
                labels.len()
            )));
        }
        if scores.iter().any(|s| !s.is_finite()) {
            return Err(Error::NonFinite("score".into()));
        }
        if labels.iter().any(|&l| l > 1) {
            return Err(Error::invalid("labels must be 0 or 1"));
        }
        Ok(ScoredLabels { scores, labels })
    }

    /// Positives first, then negatives.
    pub fn from_pos_neg(pos: &[f64], neg: &[f64]) -> Result<ScoredLabels> {
        let mut scores = Vec::with_capacity(pos.len() + neg.len());
        let mut labels = Vec::with_capacity(pos.len() + neg.len());
        scores.extend_from_slice(pos);
        labels.extend(std::iter::repeat(1u8).take(pos.len()));
        scores.extend_from_slice(neg);
        labels.extend(std::iter::repeat(0u8).take(neg.len()));
        ScoredLabels::new(scores, labels)
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    fn class_counts(&self) -> (usize, usize) {
        let p = self.labels.iter().filter(|&&l| l == 1).count();
        (p, self.labels.len() - p)
    }
}

/// Rank-statistic ROC-AUC with midrank tie handling.
pub fn roc_auc(d: &ScoredLabels) -> Result<f64> {
    let (p, n) = d.class_counts();
    if p == 0 || n == 0 {
        return Err(Error::invalid("roc_auc needs at least one positive and one negative"));
    }
    let mut idx: Vec<usize> = (0..d.len()).collect();
    idx.sort_by(|&a, &b| d.scores[a].partial_cmp(&d.scores[b]).unwrap());
    // midranks over tie groups, 1-based
    let mut rank_sum_pos = 0.0f64;
    let mut i = 0usize;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && d.scores[idx[j + 1]] == d.scores[idx[i]] {
            j += 1;
        }
        let midrank = (i + 1 + j + 1) as f64 / 2.0;
        for &k in &idx[i..=j] {
            if d.labels[k] == 1 {
                rank_sum_pos += midrank;
            }
        }
        i = j + 1;
    }
    let p_f = p as f64;
    Ok((rank_sum_pos - p_f * (p_f + 1.0) / 2.0) / (p_f * n as f64))
}

/// Average precision: AP = sum_k (R_k - R_{k-1}) P_k over the descending-score
/// order, ties broken by stable input order.
pub fn average_precision(d: &ScoredLabels) -> Result<f64> {
    let (p, _) = d.class_counts();
    if p == 0 {
        return Err(Error::invalid("average_precision needs at least one positive"));
    }
    let mut idx: Vec<usize> = (0..d.len()).collect();
    // stable sort keeps input order within equal scores
    idx.sort_by(|&a, &b| d.scores[b].partial_cmp(&d.scores[a]).unwrap());
    let mut tp = 0usize;
    let mut ap = 0.0f64;
    for (k, &i) in idx.iter().enumerate() {
        if d.labels[i] == 1 {
            tp += 1;
            let precision = tp as f64 / (k + 1) as f64;
            ap += precision / p as f64;
        }
    }
    Ok(ap)
}

/// Fraction of items where (score >= threshold) agrees with the label.
pub fn accuracy(d: &ScoredLabels, threshold: f64) -> Result<f64> {
    if d.is_empty() {
        return Err(Error::invalid("accuracy of an empty set is undefined"));
    }
    let correct = d
        .scores
        .iter()
        .zip(&d.labels)
        .filter(|&(&s, &l)| (s >= threshold) == (l == 1))
        .count();
    Ok(correct as f64 / d.len() as f64)
}

/// The three evaluation metrics reported by the pipeline.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub roc_auc: f64,
    pub ap: f64,
}

/// Computes all metrics from positive and negative scores (accuracy at 0.5).
pub fn metrics_from_scores(pos: &[f64], neg: &[f64]) -> Result<Metrics> {
    let d = ScoredLabels::from_pos_neg(pos, neg)?;
    Ok(Metrics {
        accuracy: accuracy(&d, 0.5)?,
        roc_auc: roc_auc(&d)?,
        ap: average_precision(&d)?,
    })
}

/// O(n^2) pair-counting AUC used as an independent oracle in tests.
pub fn roc_auc_bruteforce(d: &ScoredLabels) -> Result<f64> {
    let (p, n) = d.class_counts();
    if p == 0 || n == 0 {
        return Err(Error::invalid("single-class input"));
    }
    let mut total = 0.0f64;
    for i in 0..d.len() {
        if d.labels[i] != 1 {
            continue;
        }
        for j in 0..d.len() {
            if d.labels[j] != 0 {
                continue;
            }
            if d.scores[i] > d.scores[j] {
                total += 1.0;
            } else if d.scores[i] == d.scores[j] {
                total += 0.5;
            }
        }
    }
    Ok(total / (p as f64 * n as f64))
}
