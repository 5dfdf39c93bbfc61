//! Ordering instances by score and cutting the order into quantiles.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::dataset::{LabeledDataset, LabeledInstance};

/// How instances with equal scores are ordered.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TiePolicy {
    /// Input-file order.
    #[default]
    Stable,
    /// Negatives before positives; gives a lower bound on gain.
    Pessimistic,
    /// Positives before negatives; gives an upper bound on gain.
    Optimistic,
}

impl TiePolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            TiePolicy::Stable => "stable",
            TiePolicy::Pessimistic => "pessimistic",
            TiePolicy::Optimistic => "optimistic",
        }
    }
}

impl fmt::Display for TiePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TiePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "stable" => Ok(TiePolicy::Stable),
            "pessimistic" => Ok(TiePolicy::Pessimistic),
            "optimistic" => Ok(TiePolicy::Optimistic),
            other => Err(format!("unknown tie policy {other:?}")),
        }
    }
}

/// A dataset ordered by descending score.
#[derive(Clone, Debug, PartialEq)]
pub struct RankedList {
    pub dataset_name: String,
    pub order: Vec<LabeledInstance>,
    pub policy: TiePolicy,
    pub positive_total: usize,
}

impl RankedList {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Ids in rank order.
    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.order.iter().map(|i| i.id.as_str())
    }

    /// Number of positives among the first `k` ranks, for every `k` in `0..=N`.
    pub fn prefix_positives(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.order.len() + 1);
        let mut acc = 0;
        out.push(0);
        for inst in &self.order {
            acc += inst.label.is_positive() as usize;
            out.push(acc);
        }
        out
    }
}

/// Sorts a dataset by descending score, resolving ties with `policy`.
/// Under every policy, remaining ties fall back to input order.
pub fn rank_instances(d: &LabeledDataset, policy: TiePolicy) -> RankedList {
    let mut order = d.instances.clone();
    // sort_by is stable, so equal keys keep input order
    order.sort_by(|a, b| {
        let by_score = b.score.partial_cmp(&a.score).unwrap_or(Ordering::Equal);
        by_score.then_with(|| match policy {
            TiePolicy::Stable => Ordering::Equal,
            TiePolicy::Pessimistic => a.label.is_positive().cmp(&b.label.is_positive()),
            TiePolicy::Optimistic => b.label.is_positive().cmp(&a.label.is_positive()),
        })
    });
    let positive_total = order.iter().filter(|i| i.label.is_positive()).count();
    RankedList {
        dataset_name: d.name.clone(),
        order,
        policy,
        positive_total,
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("quantile count {quantiles} is outside 1..={n}")]
    QuantileCount { quantiles: usize, n: usize },
}

/// Cut indices `floor(q * n / quantiles)` for `q` in `0..=quantiles`.
pub fn quantile_boundaries(n: usize, quantiles: usize) -> Vec<usize> {
    (0..=quantiles)
        .map(|q| ((q as u128 * n as u128) / quantiles as u128) as usize)
        .collect()
}

/// A ranked list split into contiguous, near-equal quantiles.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantilePartition {
    pub ranked: RankedList,
    pub quantile_count: usize,
    pub boundaries: Vec<usize>,
    pub per_quantile_positive: Vec<usize>,
    pub per_quantile_size: Vec<usize>,
}

impl QuantilePartition {
    /// The instances in quantile `q` (0-based).
    pub fn segment(&self, q: usize) -> &[LabeledInstance] {
        &self.ranked.order[self.boundaries[q]..self.boundaries[q + 1]]
    }
}

/// Splits `r` into `quantiles` groups using the floor boundary rule.
pub fn partition_quantiles(r: &RankedList, quantiles: usize) -> Result<QuantilePartition, PartitionError> {
    let n = r.len();
    if quantiles < 1 || quantiles > n {
        return Err(PartitionError::QuantileCount { quantiles, n });
    }
    let boundaries = quantile_boundaries(n, quantiles);
    let prefix = r.prefix_positives();
    let per_quantile_size = boundaries.windows(2).map(|w| w[1] - w[0]).collect();
    let per_quantile_positive = boundaries.windows(2).map(|w| prefix[w[1]] - prefix[w[0]]).collect();
    Ok(QuantilePartition {
        ranked: r.clone(),
        quantile_count: quantiles,
        boundaries,
        per_quantile_positive,
        per_quantile_size,
    })
}
