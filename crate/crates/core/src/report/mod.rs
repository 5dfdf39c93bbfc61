//! Evaluation reports and their renderings.
//!
//! [`evaluate`] runs the whole pipeline for one dataset and collects the
//! results in a [`ModelReport`]. An [`EvaluationReport`] bundles several of
//! them with the run settings and can be rendered as a text or markdown
//! table, a JSON document, or (for the gain curves) an SVG chart.

mod chart;
mod json;
mod table;

pub use chart::{render_chart, ChartError, ChartSpec};
pub use json::{render_json, SCHEMA_VERSION};
pub use table::{render_markdown, render_table};

use serde::Serialize;
use thiserror::Error;

use crate::budget::{
    cost_to_target, fixed_budget_plan, marginal_analysis, BudgetError, BudgetPlan, CostModel, CostRule,
    MarginalReport, Target, TargetPlan,
};
use crate::dataset::LabeledDataset;
use crate::metrics::{class_metrics, confusion_at_cutoff, gain_profile, ClassMetrics, ConfusionMatrix, Cutoff, GainProfile, MetricsError};
use crate::money::{Money, UnitCost};
use crate::ranking::{partition_quantiles, rank_instances, PartitionError, TiePolicy};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Budget(#[from] BudgetError),
    #[error("budget options need a unit cost")]
    MissingCostModel,
}

/// What to compute for each model.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalOptions {
    pub quantiles: usize,
    pub tie_policy: TiePolicy,
    pub cutoff: Option<Cutoff>,
    pub cost: Option<CostModel>,
    pub budget: Option<Money>,
    pub target: Option<Target>,
    pub annotated: Option<usize>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            quantiles: 10,
            tie_policy: TiePolicy::Stable,
            cutoff: None,
            cost: None,
            budget: None,
            target: None,
            annotated: None,
        }
    }
}

impl EvalOptions {
    fn needs_cost(&self) -> bool {
        self.budget.is_some() || self.target.is_some() || self.annotated.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutoffResult {
    pub confusion: ConfusionMatrix,
    pub metrics: ClassMetrics,
}

/// Everything computed for one model.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelReport {
    pub name: String,
    pub n: usize,
    pub positive_total: usize,
    pub input_sha256: Option<String>,
    pub profile: GainProfile,
    pub cutoff: Option<CutoffResult>,
    pub fixed_budget: Option<BudgetPlan>,
    pub target: Option<TargetPlan>,
    pub marginal: Option<MarginalReport>,
    #[serde(serialize_with = "crate::format::serialize_opt_ratio")]
    pub reported_f1: Option<f64>,
}

/// Runs ranking, partitioning, gain and every requested budget question on
/// one dataset.
pub fn evaluate(d: &LabeledDataset, opts: &EvalOptions) -> Result<ModelReport, EvalError> {
    if opts.needs_cost() && opts.cost.is_none() {
        return Err(EvalError::MissingCostModel);
    }
    let ranked = rank_instances(d, opts.tie_policy);
    let partition = partition_quantiles(&ranked, opts.quantiles)?;
    let profile = gain_profile(&partition)?;

    let cutoff = match opts.cutoff {
        Some(c) => {
            let k = c.resolve(ranked.len())?;
            let confusion = confusion_at_cutoff(&ranked, k)?;
            let metrics = class_metrics(&confusion, confusion.positive_support(), confusion.negative_support())?;
            Some(CutoffResult { confusion, metrics })
        }
        None => None,
    };

    let (mut fixed_budget, mut target, mut marginal) = (None, None, None);
    if let Some(cm) = &opts.cost {
        fixed_budget = opts.budget.map(|b| fixed_budget_plan(&profile, cm, b));
        target = opts.target.map(|t| cost_to_target(&profile, cm, t)).transpose()?;
        marginal = opts.annotated.map(|a| marginal_analysis(&profile, cm, a)).transpose()?;
    }

    Ok(ModelReport {
        name: d.name.clone(),
        n: ranked.len(),
        positive_total: ranked.positive_total,
        input_sha256: None,
        profile,
        cutoff,
        fixed_budget,
        target,
        marginal,
        reported_f1: None,
    })
}

/// Settings shared by every model in a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunMeta {
    pub quantiles: usize,
    pub tie_policy: TiePolicy,
    pub cost_rule: Option<CostRule>,
    pub unit_cost_micros: Option<UnitCost>,
    pub currency: Option<String>,
}

impl RunMeta {
    pub fn from_options(opts: &EvalOptions) -> Self {
        RunMeta {
            quantiles: opts.quantiles,
            tie_policy: opts.tie_policy,
            cost_rule: opts.cost.as_ref().map(|c| c.rule),
            unit_cost_micros: opts.cost.as_ref().map(|c| c.unit_cost),
            currency: opts.cost.as_ref().map(|c| c.currency.clone()),
        }
    }
}

/// Model names ordered two ways: by budget and by F-score.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rankings {
    /// Cheapest first, by the cost of reaching the requested target.
    pub by_target_cost: Option<Vec<String>>,
    /// Highest first.
    pub by_f_score: Option<Vec<String>>,
    /// `reported` when F-scores were supplied, `cutoff` when computed.
    pub f_score_source: Option<String>,
}

impl Rankings {
    pub fn from_models(models: &[ModelReport]) -> Self {
        let by_target_cost = models.iter().all(|m| m.target.is_some()).then(|| {
            let mut v: Vec<&ModelReport> = models.iter().collect();
            v.sort_by_key(|m| {
                let t = m.target.as_ref().expect("checked");
                // unreachable targets sort last
                (!t.achievable, t.cost)
            });
            v.into_iter().map(|m| m.name.clone()).collect()
        });

        let reported = models.iter().all(|m| m.reported_f1.is_some());
        let computed = models.iter().all(|m| m.cutoff.is_some());
        let f_of = |m: &ModelReport| {
            if reported {
                m.reported_f1.expect("checked")
            } else {
                m.cutoff.as_ref().expect("checked").metrics.weighted_f1
            }
        };
        let (by_f_score, f_score_source) = if reported || computed {
            let mut v: Vec<&ModelReport> = models.iter().collect();
            v.sort_by(|a, b| f_of(b).total_cmp(&f_of(a)));
            let source = if reported { "reported" } else { "cutoff" };
            (Some(v.into_iter().map(|m| m.name.clone()).collect()), Some(source.to_string()))
        } else {
            (None, None)
        };

        Rankings {
            by_target_cost,
            by_f_score,
            f_score_source,
        }
    }
}

/// Results for one or more models plus the run settings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub meta: RunMeta,
    pub models: Vec<ModelReport>,
    pub rankings: Option<Rankings>,
}

impl EvaluationReport {
    /// Single-model report.
    pub fn single(opts: &EvalOptions, model: ModelReport) -> Self {
        EvaluationReport {
            meta: RunMeta::from_options(opts),
            models: vec![model],
            rankings: None,
        }
    }

    /// Multi-model report with both orderings filled in.
    pub fn comparison(opts: &EvalOptions, models: Vec<ModelReport>) -> Self {
        let rankings = Some(Rankings::from_models(&models));
        EvaluationReport {
            meta: RunMeta::from_options(opts),
            models,
            rankings,
        }
    }

    pub fn currency(&self) -> &str {
        self.meta.currency.as_deref().unwrap_or("")
    }
}
