// Copyright 2026 The qksvm Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the
// License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either
// express or implied. See the License for the specific language governing permissions and
// limitations under the License.

//! Confusion-count classification metrics.
//!
//! The positive class (+1) is the malware class. Precision, recall and F1
//! return 0 when their denominator is 0; accuracy instead rejects an empty
//! evaluation, since 0/0 accuracy has no sensible default. F1 is computed as
//! `2 TP / (2 TP + FP + FN)`, which equals the harmonic mean of precision and
//! recall whenever the latter is defined.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Outcome counts of a binary evaluation; +1 is the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.tn + self.fp + self.fn_
    }
}

/// Counts prediction outcomes against ground truth; labels must be ±1.
pub fn confusion(y_true: &[i8], y_pred: &[i8]) -> Result<ConfusionCounts> {
    if y_true.len() != y_pred.len() {
        return Err(Error::InvalidArgument(format!(
            "{} true labels vs {} predictions",
            y_true.len(),
            y_pred.len()
        )));
    }
    if y_true.is_empty() {
        return Err(Error::InvalidArgument("empty evaluation".into()));
    }
    let mut c = ConfusionCounts::default();
    for (&t, &p) in y_true.iter().zip(y_pred) {
        if (t != 1 && t != -1) || (p != 1 && p != -1) {
            return Err(Error::InvalidArgument(format!("labels must be +1 or -1, got ({t}, {p})")));
        }
        match (t, p) {
            (1, 1) => c.tp += 1,
            (-1, -1) => c.tn += 1,
            (-1, 1) => c.fp += 1,
            _ => c.fn_ += 1,
        }
    }
    Ok(c)
}

/// `(TP + TN) / total`; empty counts are an error.
pub fn accuracy(c: &ConfusionCounts) -> Result<f64> {
    let total = c.total();
    if total == 0 {
        return Err(Error::InvalidArgument("accuracy of zero samples".into()));
    }
    Ok((c.tp + c.tn) as f64 / total as f64)
}

/// `TP / (TP + FP)`, or 0 when nothing was predicted positive.
pub fn precision(c: &ConfusionCounts) -> f64 {
    ratio(c.tp, c.tp + c.fp)
}

/// `TP / (TP + FN)`, or 0 when nothing is actually positive.
pub fn recall(c: &ConfusionCounts) -> f64 {
    ratio(c.tp, c.tp + c.fn_)
}

/// `2 TP / (2 TP + FP + FN)`, or 0 when the denominator is 0.
pub fn f1(c: &ConfusionCounts) -> f64 {
    ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn_)
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// All four metrics plus the counts they came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub counts: ConfusionCounts,
}

impl MetricsReport {
    pub fn from_counts(counts: ConfusionCounts) -> Result<MetricsReport> {
        Ok(MetricsReport {
            accuracy: accuracy(&counts)?,
            precision: precision(&counts),
            recall: recall(&counts),
            f1: f1(&counts),
            counts,
        })
    }

    pub fn from_labels(y_true: &[i8], y_pred: &[i8]) -> Result<MetricsReport> {
        MetricsReport::from_counts(confusion(y_true, y_pred)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_correct_counts() {
        let t = [1, 1, 1, -1, -1];
        let c = confusion(&t, &t).unwrap();
        assert_eq!(c, ConfusionCounts { tp: 3, tn: 2, fp: 0, fn_: 0 });
        assert_eq!(accuracy(&c).unwrap(), 1.0);
        assert_eq!(precision(&c), 1.0);
        assert_eq!(recall(&c), 1.0);
        assert_eq!(f1(&c), 1.0);
    }

    #[test]
    fn all_flipped_counts() {
        let t = [1, 1, 1, -1, -1];
        let p = [-1, -1, -1, 1, 1];
        let c = confusion(&t, &p).unwrap();
        assert_eq!(c, ConfusionCounts { tp: 0, tn: 0, fp: 2, fn_: 3 });
        assert_eq!(accuracy(&c).unwrap(), 0.0);
    }

    #[test]
    fn mixed_hand_case() {
        let t = [1, 1, -1, -1];
        let p = [1, -1, 1, -1];
        let c = confusion(&t, &p).unwrap();
        assert_eq!(c, ConfusionCounts { tp: 1, tn: 1, fp: 1, fn_: 1 });
        assert_eq!(accuracy(&c).unwrap(), 0.5);
        assert_eq!(precision(&c), 0.5);
        assert_eq!(recall(&c), 0.5);
        assert_eq!(f1(&c), 0.5);
    }

    #[test]
    fn zero_denominators_default_to_zero() {
        // Nothing predicted positive and nothing actually positive.
        let c = ConfusionCounts { tp: 0, tn: 4, fp: 0, fn_: 0 };
        assert_eq!(precision(&c), 0.0);
        assert_eq!(recall(&c), 0.0);
        assert_eq!(f1(&c), 0.0);
        assert_eq!(accuracy(&c).unwrap(), 1.0);
    }

    #[test]
    fn empty_evaluation_is_rejected() {
        assert!(accuracy(&ConfusionCounts::default()).is_err());
        assert!(confusion(&[], &[]).is_err());
        assert!(confusion(&[1], &[1, -1]).is_err());
        assert!(confusion(&[1], &[0]).is_err());
    }

    #[test]
    fn f1_equals_harmonic_mean_when_defined() {
        for tp in 0..5u64 {
            for fp in 0..5u64 {
                for fn_ in 0..5u64 {
                    let c = ConfusionCounts { tp, tn: 1, fp, fn_ };
                    let (p, r) = (precision(&c), recall(&c));
                    if p + r > 0.0 {
                        let hm = 2.0 * p * r / (p + r);
                        assert!((f1(&c) - hm).abs() < 1e-12, "tp={tp} fp={fp} fn={fn_}");
                    }
                }
            }
        }
    }

    #[test]
    fn accuracy_is_class_symmetric() {
        for tp in 0..4u64 {
            for tn in 0..4u64 {
                for fp in 0..4u64 {
                    for fn_ in 0..4u64 {
                        let c = ConfusionCounts { tp, tn, fp, fn_ };
                        let swapped = ConfusionCounts { tp: tn, tn: tp, fp: fn_, fn_: fp };
                        if c.total() > 0 {
                            assert_eq!(
                                accuracy(&c).unwrap(),
                                accuracy(&swapped).unwrap()
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn metrics_improve_with_more_true_positives() {
        // Convert one false negative into a true positive; every metric must
        // not decrease.
        for tp in 0..4u64 {
            for fn_ in 1..4u64 {
                let worse = ConfusionCounts { tp, tn: 2, fp: 2, fn_ };
                let better = ConfusionCounts { tp: tp + 1, tn: 2, fp: 2, fn_: fn_ - 1 };
                assert!(accuracy(&better).unwrap() >= accuracy(&worse).unwrap());
                assert!(precision(&better) >= precision(&worse));
                assert!(recall(&better) >= recall(&worse));
                assert!(f1(&better) >= f1(&worse));
            }
        }
    }

    #[test]
    fn report_json_shape() {
        let report = MetricsReport::from_labels(&[1, -1, 1, -1], &[1, 1, 1, -1]).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["counts"]["fn"], 0);
        assert_eq!(json["counts"]["tp"], 2);
        assert_eq!(json["accuracy"], 0.75);
        let back: MetricsReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, report);
    }
}
