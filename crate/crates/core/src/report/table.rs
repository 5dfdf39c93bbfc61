use std::fmt::Write;

use super::EvaluationReport;
use crate::format::fixed2;

struct Table {
    title: String,
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(title: impl Into<String>, headers: Vec<String>) -> Self {
        Table {
            title: title.into(),
            headers,
            rows: Vec::new(),
        }
    }

    fn widths(&self) -> Vec<usize> {
        let mut w: Vec<usize> = self.headers.iter().map(|h| h.len()).collect();
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                w[i] = w[i].max(cell.len());
            }
        }
        w
    }

    /// First column left-aligned, the rest right-aligned.
    fn text(&self, out: &mut String) {
        let widths = self.widths();
        let line = |cells: &[String]| {
            let parts: Vec<String> = cells
                .iter()
                .enumerate()
                .map(|(i, c)| if i == 0 { format!("{c:<w$}", w = widths[i]) } else { format!("{c:>w$}", w = widths[i]) })
                .collect();
            parts.join("  ").trim_end().to_string()
        };
        writeln!(out, "{}", self.title).unwrap();
        writeln!(out, "{}", line(&self.headers)).unwrap();
        let total: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
        writeln!(out, "{}", "-".repeat(total)).unwrap();
        for row in &self.rows {
            writeln!(out, "{}", line(row)).unwrap();
        }
    }

    fn markdown(&self, out: &mut String) {
        writeln!(out, "### {}\n", self.title).unwrap();
        writeln!(out, "| {} |", self.headers.join(" | ")).unwrap();
        let rule: Vec<&str> = (0..self.headers.len()).map(|i| if i == 0 { ":---" } else { "---:" }).collect();
        writeln!(out, "| {} |", rule.join(" | ")).unwrap();
        for row in &self.rows {
            writeln!(out, "| {} |", row.join(" | ")).unwrap();
        }
    }
}

fn headers(fixed: &[&str]) -> Vec<String> {
    fixed.iter().map(|s| s.to_string()).collect()
}

fn ratio(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        fixed2(v)
    }
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.into()
}

fn tables(r: &EvaluationReport) -> (Vec<String>, Vec<Table>) {
    let q = r.meta.quantiles;
    let quantile_cols: Vec<String> = (1..=q).map(|i| format!("Q{i}")).collect();
    let mut preamble = vec![format!("quantiles: {q}, ties: {}", r.meta.tie_policy)];
    if let (Some(unit), Some(rule)) = (r.meta.unit_cost_micros, r.meta.cost_rule) {
        preamble.push(format!("unit cost: {unit} {}, cost rule: {rule}", r.currency()));
    }

    let mut gain = Table::new("Gain", [headers(&["Model", "N", "P"]), quantile_cols.clone()].concat());
    let mut cumulative = Table::new("Cumulative gain", [headers(&["Model"]), quantile_cols].concat());
    for m in &r.models {
        let mut row = vec![m.name.clone(), m.n.to_string(), m.positive_total.to_string()];
        row.extend(m.profile.gain.iter().map(|&g| fixed2(g)));
        gain.rows.push(row);
        let mut row = vec![m.name.clone()];
        row.extend(m.profile.cumulative.iter().map(|&c| fixed2(c)));
        cumulative.rows.push(row);
    }
    let mut out = vec![gain, cumulative];

    if r.models.iter().any(|m| m.cutoff.is_some()) {
        let mut t = Table::new(
            "Cutoff metrics",
            headers(&["Model", "k", "TP", "FP", "TN", "FN", "Acc", "wP", "wR", "wF1", "Flags"]),
        );
        for m in &r.models {
            let Some(c) = &m.cutoff else { continue };
            let cm = &c.confusion;
            let mut flags = Vec::new();
            for (class, s) in [("pos", &c.metrics.positive), ("neg", &c.metrics.negative)] {
                if s.zero_predicted {
                    flags.push(format!("{class}:unpredicted"));
                }
                if s.zero_f1_denominator {
                    flags.push(format!("{class}:f1=0"));
                }
            }
            t.rows.push(vec![
                m.name.clone(),
                cm.cutoff_k.to_string(),
                cm.tp.to_string(),
                cm.fp.to_string(),
                cm.tn.to_string(),
                cm.fn_.to_string(),
                fixed2(c.metrics.accuracy),
                fixed2(c.metrics.weighted_precision),
                fixed2(c.metrics.weighted_recall),
                fixed2(c.metrics.weighted_f1),
                if flags.is_empty() { "-".into() } else { flags.join(",") },
            ]);
        }
        out.push(t);
    }

    if r.models.iter().any(|m| m.fixed_budget.is_some()) {
        let mut t = Table::new(
            "Fixed budget",
            headers(&["Model", "Budget", "Quantiles", "TP", "Spend", "Leftover", "TP/cost"]),
        );
        for m in &r.models {
            let Some(p) = &m.fixed_budget else { continue };
            t.rows.push(vec![
                m.name.clone(),
                p.budget.to_string(),
                p.affordable_quantiles.to_string(),
                p.expected_tp.to_string(),
                p.spend.to_string(),
                p.leftover.to_string(),
                ratio(p.profit),
            ]);
        }
        out.push(t);
    }

    if r.models.iter().any(|m| m.target.is_some()) {
        let mut t = Table::new("Cost to target", headers(&["Model", "Target", "Reached", "Quantiles", "Cost"]));
        for m in &r.models {
            let Some(p) = &m.target else { continue };
            t.rows.push(vec![
                m.name.clone(),
                p.target_tp.to_string(),
                yes_no(p.achievable),
                p.quantiles_needed.to_string(),
                p.cost.to_string(),
            ]);
        }
        out.push(t);
    }

    if r.models.iter().any(|m| m.marginal.is_some()) {
        let mut t = Table::new(
            "Next quantile",
            headers(&["Model", "Annotated", "Next TP", "Next cost", "TP/cost", "Exhausted"]),
        );
        for m in &r.models {
            let Some(p) = &m.marginal else { continue };
            t.rows.push(vec![
                m.name.clone(),
                p.annotated_quantiles.to_string(),
                format!("+{}", p.next_quantile_tp),
                p.next_quantile_cost.to_string(),
                ratio(p.tp_per_cost),
                yes_no(p.exhausted),
            ]);
        }
        out.push(t);
    }

    (preamble, out)
}

fn ranking_lines(r: &EvaluationReport) -> Vec<String> {
    let Some(rk) = &r.rankings else { return Vec::new() };
    let mut lines = Vec::new();
    if let Some(order) = &rk.by_target_cost {
        lines.push(format!("by cost to target (cheapest first): {}", order.join(" < ")));
    }
    if let (Some(order), Some(source)) = (&rk.by_f_score, &rk.f_score_source) {
        let scores: Vec<String> = order
            .iter()
            .map(|name| {
                let m = r.models.iter().find(|m| &m.name == name).expect("ranked model exists");
                let f = match source.as_str() {
                    "reported" => m.reported_f1,
                    _ => m.cutoff.as_ref().map(|c| c.metrics.weighted_f1),
                };
                format!("{name} ({})", f.map(fixed2).unwrap_or_default())
            })
            .collect();
        lines.push(format!("by {source} F1 (highest first): {}", scores.join(" > ")));
    }
    lines
}

/// Fixed-width text tables, one per computed section.
pub fn render_table(r: &EvaluationReport) -> String {
    let (preamble, tables) = tables(r);
    let mut out = String::new();
    for line in preamble {
        writeln!(out, "{line}").unwrap();
    }
    for t in tables {
        out.push('\n');
        t.text(&mut out);
    }
    let ranks = ranking_lines(r);
    if !ranks.is_empty() {
        out.push_str("\nModel orderings\n");
        for line in ranks {
            writeln!(out, "  {line}").unwrap();
        }
    }
    out
}

/// The same content as [`render_table`] as markdown tables.
pub fn render_markdown(r: &EvaluationReport) -> String {
    let (preamble, tables) = tables(r);
    let mut out = String::new();
    for line in preamble {
        writeln!(out, "_{line}_\n").unwrap();
    }
    for t in tables {
        t.markdown(&mut out);
        out.push('\n');
    }
    let ranks = ranking_lines(r);
    if !ranks.is_empty() {
        out.push_str("### Model orderings\n\n");
        for line in ranks {
            writeln!(out, "- {line}").unwrap();
        }
    }
    out
}
