//! Per-class, per-output confusion accounting and the aggregate scores used
//! to judge classifiers: balanced accuracy (mean per-class recall) and
//! inverse-prevalence weighted precision/recall/F1.
//!
//! Zero denominators never produce NaN: the affected score is 0 and the
//! condition is flagged so callers can report it.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("predictions and actuals differ in length ({preds} vs {actuals})")]
    LengthMismatch { preds: usize, actuals: usize },
    #[error("label {label} outside the {classes}-class domain")]
    LabelOutOfRange { label: u8, classes: usize },
    #[error("empty input")]
    Empty,
    #[error("no class has support")]
    NoSupport,
}

/// TP/TN/FP/FN tallies for every (output, class) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionCounts {
    pub outputs: usize,
    pub classes: usize,
    pub total: u64,
    tp: Vec<u64>,
    tn: Vec<u64>,
    fp: Vec<u64>,
    fn_: Vec<u64>,
}

impl ConfusionCounts {
    fn idx(&self, output: usize, class: usize) -> usize {
        output * self.classes + class
    }

    pub fn tp(&self, output: usize, class: usize) -> u64 {
        self.tp[self.idx(output, class)]
    }

    pub fn tn(&self, output: usize, class: usize) -> u64 {
        self.tn[self.idx(output, class)]
    }

    pub fn fp(&self, output: usize, class: usize) -> u64 {
        self.fp[self.idx(output, class)]
    }

    pub fn fn_(&self, output: usize, class: usize) -> u64 {
        self.fn_[self.idx(output, class)]
    }

    /// Number of samples whose true label is `class`.
    pub fn support(&self, output: usize, class: usize) -> u64 {
        self.tp(output, class) + self.fn_(output, class)
    }
}

/// Tallies confusion counts over flattened row-major label matrices
/// (`samples × outputs`), independently per output:
/// correct prediction of `c` counts as TP for `c` and TN for every other
/// class; a wrong prediction counts FP for the predicted class, FN for the
/// actual one and TN for the rest.
pub fn confusion_counts(
    outputs: usize,
    classes: usize,
    preds: &[u8],
    actuals: &[u8],
) -> Result<ConfusionCounts, MetricsError> {
    if preds.len() != actuals.len() {
        return Err(MetricsError::LengthMismatch { preds: preds.len(), actuals: actuals.len() });
    }
    if preds.is_empty() || outputs == 0 || preds.len() % outputs != 0 {
        return Err(MetricsError::Empty);
    }
    let n = preds.len() / outputs;
    let cells = outputs * classes;
    let mut counts = ConfusionCounts {
        outputs,
        classes,
        total: n as u64,
        tp: vec![0; cells],
        tn: vec![0; cells],
        fp: vec![0; cells],
        fn_: vec![0; cells],
    };
    for row in 0..n {
        for o in 0..outputs {
            let p = preds[row * outputs + o];
            let a = actuals[row * outputs + o];
            for label in [p, a] {
                if label as usize >= classes {
                    return Err(MetricsError::LabelOutOfRange { label, classes });
                }
            }
            for c in 0..classes {
                let i = o * classes + c;
                let pc = p as usize == c;
                let ac = a as usize == c;
                match (pc, ac) {
                    (true, true) => counts.tp[i] += 1,
                    (true, false) => counts.fp[i] += 1,
                    (false, true) => counts.fn_[i] += 1,
                    (false, false) => counts.tn[i] += 1,
                }
            }
        }
    }
    Ok(counts)
}

/// Scores of one class of one output. `flagged` marks a zero denominator
/// (precision with no positive predictions, recall with no support).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassScores {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub precision_flagged: bool,
    pub recall_flagged: bool,
}

pub fn per_class_scores(counts: &ConfusionCounts, output: usize, class: usize) -> ClassScores {
    let tp = counts.tp(output, class) as f64;
    let tn = counts.tn(output, class) as f64;
    let fp = counts.fp(output, class) as f64;
    let fn_ = counts.fn_(output, class) as f64;
    let accuracy = (tp + tn) / (tp + tn + fp + fn_);
    let precision_flagged = tp + fp == 0.0;
    let recall_flagged = tp + fn_ == 0.0;
    let precision = if precision_flagged { 0.0 } else { tp / (tp + fp) };
    let recall = if recall_flagged { 0.0 } else { tp / (tp + fn_) };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    ClassScores { accuracy, precision, recall, f1, precision_flagged, recall_flagged }
}

/// Balanced accuracy of one output: the mean per-class recall over classes
/// with support, zero-support classes excluded and reported.
#[derive(Debug, Clone, PartialEq)]
pub struct BalancedAccuracy {
    pub value: f64,
    pub excluded_classes: Vec<usize>,
}

pub fn balanced_accuracy(
    counts: &ConfusionCounts,
    output: usize,
) -> Result<BalancedAccuracy, MetricsError> {
    let mut sum = 0.0;
    let mut present = 0usize;
    let mut excluded = Vec::new();
    for c in 0..counts.classes {
        if counts.support(output, c) == 0 {
            excluded.push(c);
            continue;
        }
        sum += per_class_scores(counts, output, c).recall;
        present += 1;
    }
    if present == 0 {
        return Err(MetricsError::NoSupport);
    }
    Ok(BalancedAccuracy { value: sum / present as f64, excluded_classes: excluded })
}

/// Mean balanced accuracy over all outputs.
pub fn balanced_accuracy_mean(counts: &ConfusionCounts) -> Result<f64, MetricsError> {
    let mut sum = 0.0;
    for o in 0..counts.outputs {
        sum += balanced_accuracy(counts, o)?.value;
    }
    Ok(sum / counts.outputs as f64)
}

/// Inverse-prevalence weighted precision/recall/F1 of one output: per-class
/// scores averaged with weights proportional to 1/support over the classes
/// that are present.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedPrf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

pub fn weighted_prf(counts: &ConfusionCounts, output: usize) -> Result<WeightedPrf, MetricsError> {
    let mut weight_sum = 0.0;
    let mut p = 0.0;
    let mut r = 0.0;
    let mut f = 0.0;
    for c in 0..counts.classes {
        let support = counts.support(output, c);
        if support == 0 {
            continue;
        }
        let w = 1.0 / support as f64;
        let s = per_class_scores(counts, output, c);
        p += w * s.precision;
        r += w * s.recall;
        f += w * s.f1;
        weight_sum += w;
    }
    if weight_sum == 0.0 {
        return Err(MetricsError::NoSupport);
    }
    Ok(WeightedPrf { precision: p / weight_sum, recall: r / weight_sum, f1: f / weight_sum })
}

pub fn weighted_prf_mean(counts: &ConfusionCounts) -> Result<WeightedPrf, MetricsError> {
    let mut p = 0.0;
    let mut r = 0.0;
    let mut f = 0.0;
    for o in 0..counts.outputs {
        let w = weighted_prf(counts, o)?;
        p += w.precision;
        r += w.recall;
        f += w.f1;
    }
    let n = counts.outputs as f64;
    Ok(WeightedPrf { precision: p / n, recall: r / n, f1: f / n })
}

/// Plain accuracy of one output (fraction of correct predictions).
pub fn plain_accuracy(counts: &ConfusionCounts, output: usize) -> f64 {
    let correct: u64 = (0..counts.classes).map(|c| counts.tp(output, c)).sum();
    correct as f64 / counts.total as f64
}
