//! Budget decisions on top of a gain profile.
//!
//! Three questions are answered: how many positives a fixed budget buys
//! ([`fixed_budget_plan`]), what it costs to reach a number of positives
//! ([`cost_to_target`]), and what one more quantile would add
//! ([`marginal_analysis`]).

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::format::serialize_ratio;
use crate::metrics::GainProfile;
use crate::money::{round_half_up, Money, UnitCost};
use crate::ranking::quantile_boundaries;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BudgetError {
    #[error("quantile {q} is outside 0..={quantiles}")]
    QuantileOutOfRange { q: usize, quantiles: usize },
    #[error("target must be at least 1 positive")]
    ZeroTarget,
    #[error("{annotated} quantiles already annotated; the list has only {quantiles}")]
    NothingLeft { annotated: usize, quantiles: usize },
}

/// How the number of items in the first `q` quantiles is counted when
/// pricing them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CostRule {
    /// `N * q / Q` items, possibly fractional.
    #[default]
    Fractional,
    /// The actual items in the first `q` quantiles, `floor(q * N / Q)`.
    Integer,
}

impl CostRule {
    pub fn as_str(self) -> &'static str {
        match self {
            CostRule::Fractional => "fractional",
            CostRule::Integer => "integer",
        }
    }
}

impl fmt::Display for CostRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CostRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fractional" => Ok(CostRule::Fractional),
            "integer" => Ok(CostRule::Integer),
            other => Err(format!("unknown cost rule {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CostModel {
    pub unit_cost: UnitCost,
    pub currency: String,
    pub rule: CostRule,
}

impl CostModel {
    pub fn new(unit_cost: UnitCost) -> Self {
        CostModel {
            unit_cost,
            currency: "USD".into(),
            rule: CostRule::Fractional,
        }
    }

    pub fn with_rule(mut self, rule: CostRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn with_currency(mut self, currency: impl Into<String>) -> Self {
        self.currency = currency.into();
        self
    }
}

/// Cost of annotating the first `q` of `quantiles` quantiles of an `n`-item
/// list. Exact until the final half-up rounding to cents.
pub fn quantile_cost(cm: &CostModel, n: usize, q: usize, quantiles: usize) -> Result<Money, BudgetError> {
    if quantiles == 0 || q > quantiles {
        return Err(BudgetError::QuantileOutOfRange { q, quantiles });
    }
    let micros = cm.unit_cost.micros() as u128;
    let cents = match cm.rule {
        CostRule::Fractional => round_half_up(micros * n as u128 * q as u128, quantiles as u128 * 10_000),
        CostRule::Integer => {
            let items = quantile_boundaries(n, quantiles)[q] as u128;
            round_half_up(micros * items, 10_000)
        }
    };
    Ok(Money::from_cents(cents as i64))
}

fn profile_cost(g: &GainProfile, cm: &CostModel, q: usize) -> Money {
    quantile_cost(cm, g.n, q, g.quantiles).expect("q checked by caller")
}

/// Positives gained per currency unit spent. Zero positives give 0; a free
/// gain gives `f64::INFINITY`.
pub fn profit_ratio(tp: usize, cost: Money) -> f64 {
    if tp == 0 {
        0.0
    } else if cost.cents() <= 0 {
        f64::INFINITY
    } else {
        tp as f64 / cost.as_units()
    }
}

/// What a fixed budget buys.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BudgetPlan {
    pub budget: Money,
    pub affordable_quantiles: usize,
    pub expected_tp: usize,
    pub spend: Money,
    pub leftover: Money,
    #[serde(serialize_with = "serialize_ratio")]
    pub profit: f64,
}

/// Annotates as many leading quantiles as `budget` covers. A budget equal to
/// a quantile's cost affords it.
pub fn fixed_budget_plan(g: &GainProfile, cm: &CostModel, budget: Money) -> BudgetPlan {
    let affordable_quantiles = (0..=g.quantiles)
        .take_while(|&q| profile_cost(g, cm, q) <= budget)
        .last()
        .unwrap_or(0);
    let spend = profile_cost(g, cm, affordable_quantiles);
    let expected_tp = g.positives_through(affordable_quantiles);
    BudgetPlan {
        budget,
        affordable_quantiles,
        expected_tp,
        spend,
        leftover: budget - spend,
        profit: profit_ratio(expected_tp, spend),
    }
}

/// How many positives to aim for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Count(usize),
    /// Every positive in the list.
    FullRecall,
}

/// The cheapest prefix of quantiles reaching a target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TargetPlan {
    pub target_tp: usize,
    pub achievable: bool,
    pub quantiles_needed: usize,
    pub cost: Money,
}

pub fn cost_to_target(g: &GainProfile, cm: &CostModel, target: Target) -> Result<TargetPlan, BudgetError> {
    let target_tp = match target {
        Target::Count(0) => return Err(BudgetError::ZeroTarget),
        Target::Count(t) => t,
        Target::FullRecall => g.positive_total,
    };
    let (achievable, quantiles_needed) = match g.quantiles_to_reach(target_tp) {
        Some(q) => (true, q),
        None => (false, g.quantiles),
    };
    Ok(TargetPlan {
        target_tp,
        achievable,
        quantiles_needed,
        cost: profile_cost(g, cm, quantiles_needed),
    })
}

/// What annotating one more quantile adds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarginalReport {
    pub annotated_quantiles: usize,
    pub next_quantile_tp: usize,
    pub next_quantile_cost: Money,
    #[serde(serialize_with = "serialize_ratio")]
    pub tp_per_cost: f64,
    pub exhausted: bool,
}

/// The next quantile's cost is the difference of the cumulative costs, so
/// the increments over all quantiles add up to the full-list cost.
pub fn marginal_analysis(g: &GainProfile, cm: &CostModel, annotated: usize) -> Result<MarginalReport, BudgetError> {
    if annotated >= g.quantiles {
        return Err(BudgetError::NothingLeft {
            annotated,
            quantiles: g.quantiles,
        });
    }
    let next_quantile_tp = g.positives_through(annotated + 1) - g.positives_through(annotated);
    let next_quantile_cost = profile_cost(g, cm, annotated + 1) - profile_cost(g, cm, annotated);
    Ok(MarginalReport {
        annotated_quantiles: annotated,
        next_quantile_tp,
        next_quantile_cost,
        tp_per_cost: profit_ratio(next_quantile_tp, next_quantile_cost),
        exhausted: g.positives_through(annotated) == g.positive_total,
    })
}
