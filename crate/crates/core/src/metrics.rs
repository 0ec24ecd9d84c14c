//! Weighted multi-class precision, recall and F1.

use alloc::collections::BTreeMap;

use thiserror::Error;

use crate::model::ClassLabel;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("{golds} gold labels but {preds} predictions")]
    LengthMismatch { golds: usize, preds: usize },
    #[error("no labels to evaluate")]
    EmptyInput,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Number of gold labels of this class.
    pub support: usize,
    /// Set when a ratio had a zero denominator and was reported as 0.
    pub zero_division: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub weighted_precision: f64,
    pub weighted_recall: f64,
    pub weighted_f1: f64,
    pub per_class: BTreeMap<ClassLabel, ClassMetrics>,
    pub n_eval: usize,
    pub n_nomatch: usize,
}

#[derive(Default, Clone, Copy)]
struct Counts {
    tp: usize,
    fp: usize,
    fn_: usize,
}

fn ratio(num: usize, den: usize, zero: &mut bool) -> f64 {
    if den == 0 {
        *zero = true;
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Per-class metrics averaged with weights equal to each class's share of the
/// gold labels. A `None` prediction (no pattern matched) is wrong for every
/// gold class and is tallied in `n_nomatch`.
pub fn weighted_metrics(golds: &[ClassLabel], preds: &[Option<ClassLabel>]) -> Result<MetricsReport, MetricsError> {
    if golds.len() != preds.len() {
        return Err(MetricsError::LengthMismatch { golds: golds.len(), preds: preds.len() });
    }
    if golds.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let mut counts: BTreeMap<ClassLabel, Counts> = BTreeMap::new();
    let mut n_nomatch = 0;
    for (gold, pred) in golds.iter().zip(preds) {
        match pred {
            Some(p) if p == gold => counts.entry(*gold).or_default().tp += 1,
            Some(p) => {
                counts.entry(*gold).or_default().fn_ += 1;
                counts.entry(*p).or_default().fp += 1;
            }
            None => {
                counts.entry(*gold).or_default().fn_ += 1;
                n_nomatch += 1;
            }
        }
    }

    let n = golds.len() as f64;
    let (mut wp, mut wr, mut wf) = (0.0, 0.0, 0.0);
    let mut per_class = BTreeMap::new();
    for (label, c) in counts {
        let mut zero_division = false;
        let precision = ratio(c.tp, c.tp + c.fp, &mut zero_division);
        let recall = ratio(c.tp, c.tp + c.fn_, &mut zero_division);
        let f1 = if precision + recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };
        let support = c.tp + c.fn_;
        let weight = support as f64;
        wp += weight * precision;
        wr += weight * recall;
        wf += weight * f1;
        per_class.insert(label, ClassMetrics { precision, recall, f1, support, zero_division });
    }
    Ok(MetricsReport {
        weighted_precision: wp / n,
        weighted_recall: wr / n,
        weighted_f1: wf / n,
        per_class,
        n_eval: golds.len(),
        n_nomatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::FragmentKind::{Equal as E, Greater as G, Smaller as S};
    use alloc::vec;
    use alloc::vec::Vec;

    const A: ClassLabel = ClassLabel::new(E, S);
    const B: ClassLabel = ClassLabel::new(G, E);

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn perfect_predictions() {
        let golds = vec![A, B, B, ClassLabel::new(S, S)];
        let preds: Vec<_> = golds.iter().copied().map(Some).collect();
        let r = weighted_metrics(&golds, &preds).unwrap();
        assert_eq!((r.weighted_precision, r.weighted_recall, r.weighted_f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn hand_computed_confusion() {
        let r = weighted_metrics(&[A, A, B], &[Some(A), Some(B), Some(B)]).unwrap();
        assert!(close(r.weighted_precision, 5.0 / 6.0));
        assert!(close(r.weighted_recall, 2.0 / 3.0));
        assert!(close(r.weighted_f1, 2.0 / 3.0));
        assert_eq!(r.per_class[&A].support + r.per_class[&B].support, 3);
    }

    #[test]
    fn total_miss() {
        let r = weighted_metrics(&[A, A], &[Some(B), Some(B)]).unwrap();
        assert_eq!((r.weighted_precision, r.weighted_recall, r.weighted_f1), (0.0, 0.0, 0.0));
        assert!(r.per_class[&A].zero_division);
        assert_eq!(r.per_class[&B].support, 0);
    }

    #[test]
    fn no_match_counts_as_wrong() {
        let r = weighted_metrics(&[A, A], &[Some(A), None]).unwrap();
        assert_eq!(r.n_nomatch, 1);
        assert!(close(r.weighted_recall, 0.5));
        assert!(close(r.weighted_precision, 1.0));
    }

    #[test]
    fn input_errors() {
        assert_eq!(weighted_metrics(&[A], &[]), Err(MetricsError::LengthMismatch { golds: 1, preds: 0 }));
        assert_eq!(weighted_metrics(&[], &[]), Err(MetricsError::EmptyInput));
    }
}
