//! Gain, cumulative gain and cutoff-based classification metrics.
//!
//! Gain for quantile `q` is the number of positives ranked inside `q` divided
//! by the number of positives in the whole test set. Cumulative gain is the
//! running sum of gain. Everything is tallied in integer counts first; the
//! real-valued fields are derived from those counts with a single division,
//! so the last cumulative value is exactly `1.0`.

use serde::Serialize;
use thiserror::Error;

use crate::format::{serialize_ratio, serialize_ratios};
use crate::ranking::{quantile_boundaries, QuantilePartition, RankedList};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("dataset has no positive instances; gain is undefined")]
    NoPositives,
    #[error("cutoff {k} is outside 0..={n}")]
    CutoffOutOfRange { k: usize, n: usize },
    #[error("cutoff fraction {0} is outside [0, 1]")]
    CutoffFraction(String),
    #[error("invalid profile parameters: {0}")]
    Parameters(String),
    #[error("supports ({positive}, {negative}) do not match the confusion matrix")]
    InconsistentSupport { positive: usize, negative: usize },
}

/// Per-quantile and cumulative gain of one ranking.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GainProfile {
    pub model_name: String,
    pub quantiles: usize,
    pub n: usize,
    pub positive_total: usize,
    pub boundaries: Vec<usize>,
    pub per_quantile_positive: Vec<usize>,
    pub cumulative_positive_count: Vec<usize>,
    #[serde(serialize_with = "serialize_ratios")]
    pub gain: Vec<f64>,
    #[serde(serialize_with = "serialize_ratios")]
    pub cumulative: Vec<f64>,
}

impl GainProfile {
    fn from_counts(
        model_name: impl Into<String>,
        n: usize,
        boundaries: Vec<usize>,
        per_quantile_positive: Vec<usize>,
    ) -> Result<Self, MetricsError> {
        let positive_total: usize = per_quantile_positive.iter().sum();
        if positive_total == 0 {
            return Err(MetricsError::NoPositives);
        }
        let cumulative_positive_count: Vec<usize> = per_quantile_positive
            .iter()
            .scan(0, |acc, &c| {
                *acc += c;
                Some(*acc)
            })
            .collect();
        let total = positive_total as f64;
        let gain = per_quantile_positive.iter().map(|&c| c as f64 / total).collect();
        let cumulative = cumulative_positive_count.iter().map(|&c| c as f64 / total).collect();
        Ok(GainProfile {
            model_name: model_name.into(),
            quantiles: per_quantile_positive.len(),
            n,
            positive_total,
            boundaries,
            per_quantile_positive,
            cumulative_positive_count,
            gain,
            cumulative,
        })
    }

    /// Positives found after annotating the first `q` quantiles (0 for `q = 0`).
    pub fn positives_through(&self, q: usize) -> usize {
        if q == 0 {
            0
        } else {
            self.cumulative_positive_count[q - 1]
        }
    }

    /// Smallest number of quantiles whose cumulative count reaches `target`.
    pub fn quantiles_to_reach(&self, target: usize) -> Option<usize> {
        if target == 0 {
            return Some(0);
        }
        self.cumulative_positive_count
            .iter()
            .position(|&c| c >= target)
            .map(|idx| idx + 1)
    }

    /// Gain of quantile `q` as an exact fraction `(numerator, denominator)`.
    pub fn gain_ratio(&self, q: usize) -> (usize, usize) {
        (self.per_quantile_positive[q], self.positive_total)
    }
}

/// Computes the gain profile of a partitioned ranking.
pub fn gain_profile(p: &QuantilePartition) -> Result<GainProfile, MetricsError> {
    GainProfile::from_counts(
        p.ranked.dataset_name.clone(),
        p.ranked.len(),
        p.boundaries.clone(),
        p.per_quantile_positive.clone(),
    )
}

/// Profile of a perfect ranker: all `positives` at the top of `n` instances.
pub fn ideal_profile(n: usize, positives: usize, quantiles: usize) -> Result<GainProfile, MetricsError> {
    if positives < 1 || positives > n {
        return Err(MetricsError::Parameters(format!("positives {positives} outside 1..={n}")));
    }
    if quantiles < 1 || quantiles > n {
        return Err(MetricsError::Parameters(format!("quantiles {quantiles} outside 1..={n}")));
    }
    let boundaries = quantile_boundaries(n, quantiles);
    let counts = boundaries
        .windows(2)
        .map(|w| w[1].min(positives) - w[0].min(positives))
        .collect();
    GainProfile::from_counts("ideal", n, boundaries, counts)
}

/// Profile of a random ranking: gain `1/Q` in every quantile. Encoded as a
/// list of `Q` instances, one positive per quantile.
pub fn random_baseline(quantiles: usize) -> Result<GainProfile, MetricsError> {
    if quantiles < 1 {
        return Err(MetricsError::Parameters("quantiles must be at least 1".into()));
    }
    GainProfile::from_counts(
        "random",
        quantiles,
        (0..=quantiles).collect(),
        vec![1; quantiles],
    )
}

/// Outcome of predicting the top `cutoff_k` ranks positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub cutoff_k: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn positive_support(&self) -> usize {
        self.tp + self.fn_
    }

    pub fn negative_support(&self) -> usize {
        self.tn + self.fp
    }

    pub fn accuracy(&self) -> f64 {
        (self.tp + self.tn) as f64 / self.total() as f64
    }
}

/// Where to threshold a ranked list.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cutoff {
    Count(usize),
    /// Fraction of `N`; resolves to `round(fraction * N)`.
    Fraction(f64),
}

impl Cutoff {
    pub fn resolve(self, n: usize) -> Result<usize, MetricsError> {
        match self {
            Cutoff::Count(k) if k <= n => Ok(k),
            Cutoff::Count(k) => Err(MetricsError::CutoffOutOfRange { k, n }),
            Cutoff::Fraction(f) if (0.0..=1.0).contains(&f) => Ok((f * n as f64).round() as usize),
            Cutoff::Fraction(f) => Err(MetricsError::CutoffFraction(f.to_string())),
        }
    }
}

pub fn confusion_at_cutoff(r: &RankedList, k: usize) -> Result<ConfusionMatrix, MetricsError> {
    let n = r.len();
    if k > n {
        return Err(MetricsError::CutoffOutOfRange { k, n });
    }
    let tp = r.order[..k].iter().filter(|i| i.label.is_positive()).count();
    let fp = k - tp;
    let fn_ = r.positive_total - tp;
    let tn = n - k - fn_;
    Ok(ConfusionMatrix {
        tp,
        fp,
        tn,
        fn_,
        cutoff_k: k,
    })
}

pub fn accuracy_at_cutoff(r: &RankedList, k: usize) -> Result<f64, MetricsError> {
    confusion_at_cutoff(r, k).map(|c| c.accuracy())
}

/// Precision, recall and F1 of one class.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassScores {
    #[serde(serialize_with = "serialize_ratio")]
    pub precision: f64,
    #[serde(serialize_with = "serialize_ratio")]
    pub recall: f64,
    #[serde(serialize_with = "serialize_ratio")]
    pub f1: f64,
    pub support: usize,
    /// The class was never predicted; precision set to 0.
    pub zero_predicted: bool,
    /// Precision and recall are both 0; F1 set to 0.
    pub zero_f1_denominator: bool,
}

impl ClassScores {
    fn from_counts(hits: usize, predicted: usize, support: usize) -> Self {
        let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let precision = ratio(hits, predicted);
        let recall = ratio(hits, support);
        let denom = precision + recall;
        let f1 = if denom == 0.0 { 0.0 } else { 2.0 * precision * recall / denom };
        ClassScores {
            precision,
            recall,
            f1,
            support,
            zero_predicted: predicted == 0,
            zero_f1_denominator: denom == 0.0,
        }
    }
}

/// Per-class and support-weighted classification scores.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassMetrics {
    pub positive: ClassScores,
    pub negative: ClassScores,
    #[serde(serialize_with = "serialize_ratio")]
    pub weighted_precision: f64,
    #[serde(serialize_with = "serialize_ratio")]
    pub weighted_recall: f64,
    #[serde(serialize_with = "serialize_ratio")]
    pub weighted_f1: f64,
    #[serde(serialize_with = "serialize_ratio")]
    pub accuracy: f64,
}

/// Scores both classes of `c`; the negative class swaps the roles of the
/// cells. Weighted values are means weighted by class support.
pub fn class_metrics(
    c: &ConfusionMatrix,
    positive_support: usize,
    negative_support: usize,
) -> Result<ClassMetrics, MetricsError> {
    if positive_support != c.positive_support() || negative_support != c.negative_support() {
        return Err(MetricsError::InconsistentSupport {
            positive: positive_support,
            negative: negative_support,
        });
    }
    let positive = ClassScores::from_counts(c.tp, c.tp + c.fp, positive_support);
    let negative = ClassScores::from_counts(c.tn, c.tn + c.fn_, negative_support);
    let total = (positive_support + negative_support) as f64;
    let weighted = |p: f64, n: f64| (p * positive_support as f64 + n * negative_support as f64) / total;
    Ok(ClassMetrics {
        positive,
        negative,
        weighted_precision: weighted(positive.precision, negative.precision),
        weighted_recall: weighted(positive.recall, negative.recall),
        weighted_f1: weighted(positive.f1, negative.f1),
        accuracy: c.accuracy(),
    })
}
