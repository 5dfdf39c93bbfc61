use serde::Serialize;

use super::{EvaluationReport, ModelReport, Rankings, RunMeta};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct Document<'a> {
    schema_version: u32,
    /// Money fields are integers in minor units (cents) of `meta.currency`.
    money_unit: &'static str,
    meta: &'a RunMeta,
    models: &'a [ModelReport],
    rankings: &'a Option<Rankings>,
}

/// Pretty-printed JSON with a fixed key order. Counts are integers, ratios are
/// decimal strings with 12 significant digits, money is in cents.
pub fn render_json(r: &EvaluationReport) -> String {
    let doc = Document {
        schema_version: SCHEMA_VERSION,
        money_unit: "minor",
        meta: &r.meta,
        models: &r.models,
        rankings: &r.rankings,
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("report serializes");
    out.push('\n');
    out
}
