//! Reference datasets used by the tests, the guide and the CLI examples.
//!
//! Two families are provided. The six-phrase worked example has ids `1`..`6`
//! with `1`, `2` and `3` positive; each model is given as the id order it
//! produces. The idiom case study has 2,091 candidates of which 414 are
//! positive, ranked by three models whose per-decile positive counts reproduce
//! the published budget figures.

use crate::dataset::{Label, LabeledDataset, LabeledInstance};

/// Size of the case-study test set.
pub const CASE_STUDY_N: usize = 2091;
/// Positives in the case-study test set.
pub const CASE_STUDY_POSITIVES: usize = 414;
/// Per-candidate annotation cost of the case study, in cents.
pub const CASE_STUDY_UNIT_COST_CENTS: i64 = 4;

/// The four worked-example orderings: (scenario-model, ranked ids).
pub const WORKED_EXAMPLE_ORDERS: [(&str, [u32; 6]); 4] = [
    ("S1-M1", [1, 5, 4, 2, 6, 3]),
    ("S1-M2", [1, 2, 6, 5, 3, 4]),
    ("S2-M1", [3, 6, 4, 5, 2, 1]),
    ("S2-M2", [5, 4, 3, 1, 6, 2]),
];

/// Builds the six-phrase dataset ranked in `order`. Scores are `6, 5, .., 1`
/// along the order; rows are emitted in id order.
pub fn worked_example(name: &str, order: &[u32]) -> LabeledDataset {
    let n = order.len();
    let mut instances: Vec<LabeledInstance> = order
        .iter()
        .enumerate()
        .map(|(rank, &id)| {
            let label = if id <= 3 { Label::Positive } else { Label::Negative };
            LabeledInstance::new(id.to_string(), (n - rank) as f64, label)
        })
        .collect();
    instances.sort_by_key(|i| i.id.parse::<u32>().unwrap_or(u32::MAX));
    LabeledDataset::new(name, instances).expect("worked example is valid")
}

/// Builds a dataset from labels listed in rank order. Positives get ids
/// `p0001..`, negatives `n0001..`; scores strictly decrease along the ranks
/// and rows are emitted sorted by id, so ranking has real work to do.
pub fn from_ranked_labels(name: &str, ranked: &[Label]) -> LabeledDataset {
    let n = ranked.len();
    let (mut pos, mut neg) = (0usize, 0usize);
    let mut instances: Vec<LabeledInstance> = ranked
        .iter()
        .enumerate()
        .map(|(rank, &label)| {
            let id = match label {
                Label::Positive => {
                    pos += 1;
                    format!("p{pos:04}")
                }
                Label::Negative => {
                    neg += 1;
                    format!("n{neg:04}")
                }
            };
            let score = (n - rank) as f64 / n as f64;
            LabeledInstance::new(id, score, label)
        })
        .collect();
    instances.sort_by(|a, b| a.id.cmp(&b.id));
    LabeledDataset::new(name, instances).expect("generated dataset is valid")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseStudyModel {
    M1,
    M2,
    M3,
}

impl CaseStudyModel {
    pub const ALL: [CaseStudyModel; 3] = [CaseStudyModel::M1, CaseStudyModel::M2, CaseStudyModel::M3];

    pub fn name(self) -> &'static str {
        match self {
            CaseStudyModel::M1 => "M1",
            CaseStudyModel::M2 => "M2",
            CaseStudyModel::M3 => "M3",
        }
    }

    /// Positives found in each decile.
    pub fn decile_positives(self) -> [usize; 10] {
        match self {
            CaseStudyModel::M1 => [206, 208, 0, 0, 0, 0, 0, 0, 0, 0],
            CaseStudyModel::M2 => [208, 202, 2, 2, 0, 0, 0, 0, 0, 0],
            CaseStudyModel::M3 => [200, 194, 8, 4, 8, 0, 0, 0, 0, 0],
        }
    }

    /// Negatives ranked at the very top of the first decile. The rest of each
    /// decile lists its positives before its negatives.
    fn leading_negatives(self) -> usize {
        match self {
            CaseStudyModel::M1 => 3,
            CaseStudyModel::M2 => 1,
            CaseStudyModel::M3 => 0,
        }
    }

    /// Weighted F1 the models scored on a separate balanced test set.
    pub fn reported_f1(self) -> f64 {
        match self {
            CaseStudyModel::M1 => 0.70,
            CaseStudyModel::M2 => 0.74,
            CaseStudyModel::M3 => 0.77,
        }
    }
}

/// Labels of a case-study model in rank order.
pub fn case_study_labels(model: CaseStudyModel) -> Vec<Label> {
    let bounds = crate::ranking::quantile_boundaries(CASE_STUDY_N, 10);
    let mut labels = Vec::with_capacity(CASE_STUDY_N);
    for (q, &positives) in model.decile_positives().iter().enumerate() {
        let size = bounds[q + 1] - bounds[q];
        let lead = if q == 0 { model.leading_negatives() } else { 0 };
        labels.extend(std::iter::repeat_n(Label::Negative, lead));
        labels.extend(std::iter::repeat_n(Label::Positive, positives));
        labels.extend(std::iter::repeat_n(Label::Negative, size - positives - lead));
    }
    labels
}

/// The case-study dataset as ranked by `model`.
pub fn case_study(model: CaseStudyModel) -> LabeledDataset {
    from_ranked_labels(model.name(), &case_study_labels(model))
}
