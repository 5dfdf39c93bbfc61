//! Cumulative gain chart as a standalone SVG document.
//!
//! The x-axis is the share of the list annotated, the y-axis the share of all
//! positives found. Each curve starts at the origin and has one vertex per
//! quantile, placed at the quantile's nominal right edge `(q + 1) / Q`.

use std::fmt::Write;

use thiserror::Error;

use crate::metrics::{ideal_profile, random_baseline, GainProfile, MetricsError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChartError {
    #[error("chart needs at least one series")]
    NoSeries,
    #[error("series {name:?} has {found} quantiles, expected {expected}")]
    MismatchedQuantiles { name: String, expected: usize, found: usize },
    #[error("the ideal curve needs every series to share N and P")]
    MismatchedPopulation,
    #[error("chart size {width}x{height} is too small")]
    TooSmall { width: u32, height: u32 },
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartSpec {
    pub title: String,
    pub width: u32,
    pub height: u32,
    pub x_label: String,
    pub y_label: String,
    pub include_baseline: bool,
    pub include_ideal: bool,
}

impl Default for ChartSpec {
    fn default() -> Self {
        ChartSpec {
            title: "Cumulative gain".into(),
            width: 640,
            height: 480,
            x_label: "% of data annotated".into(),
            y_label: "% of positives found".into(),
            include_baseline: false,
            include_ideal: false,
        }
    }
}

const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 56.0;

const PALETTE: [&str; 8] = [
    "#d62728", "#2ca02c", "#1f77b4", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

struct Plot {
    left: f64,
    top: f64,
    width: f64,
    height: f64,
}

impl Plot {
    fn x(&self, pct: f64) -> f64 {
        self.left + self.width * pct / 100.0
    }

    fn y(&self, pct: f64) -> f64 {
        self.top + self.height * (1.0 - pct / 100.0)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

/// Curve vertices in percent: the origin, then one point per quantile.
pub(crate) fn curve_points(profile: &GainProfile) -> Vec<(f64, f64)> {
    let q = profile.quantiles as f64;
    std::iter::once((0.0, 0.0))
        .chain(
            profile
                .cumulative
                .iter()
                .enumerate()
                .map(|(i, &c)| ((i + 1) as f64 * 100.0 / q, c * 100.0)),
        )
        .collect()
}

fn polyline(out: &mut String, plot: &Plot, profile: &GainProfile, role: &str, color: &str, dash: Option<&str>) {
    let points: Vec<String> = curve_points(profile)
        .into_iter()
        .map(|(x, y)| format!("{},{}", num(plot.x(x)), num(plot.y(y))))
        .collect();
    let dash = dash.map(|d| format!(" stroke-dasharray=\"{d}\"")).unwrap_or_default();
    writeln!(
        out,
        "  <polyline class=\"{role}\" data-series=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"{dash} points=\"{}\"/>",
        escape(&profile.model_name),
        points.join(" ")
    )
    .unwrap();
}

/// Renders the curves of `profiles` plus the optional reference curves.
/// Identical inputs give byte-identical output.
pub fn render_chart(spec: &ChartSpec, profiles: &[GainProfile]) -> Result<String, ChartError> {
    let first = profiles.first().ok_or(ChartError::NoSeries)?;
    let quantiles = first.quantiles;
    if let Some(bad) = profiles.iter().find(|p| p.quantiles != quantiles) {
        return Err(ChartError::MismatchedQuantiles {
            name: bad.model_name.clone(),
            expected: quantiles,
            found: bad.quantiles,
        });
    }
    let (w, h) = (spec.width as f64, spec.height as f64);
    if w <= MARGIN_LEFT + MARGIN_RIGHT + 10.0 || h <= MARGIN_TOP + MARGIN_BOTTOM + 10.0 {
        return Err(ChartError::TooSmall {
            width: spec.width,
            height: spec.height,
        });
    }
    let ideal = if spec.include_ideal {
        if profiles.iter().any(|p| p.n != first.n || p.positive_total != first.positive_total) {
            return Err(ChartError::MismatchedPopulation);
        }
        Some(ideal_profile(first.n, first.positive_total, quantiles)?)
    } else {
        None
    };
    let baseline = if spec.include_baseline { Some(random_baseline(quantiles)?) } else { None };

    let plot = Plot {
        left: MARGIN_LEFT,
        top: MARGIN_TOP,
        width: w - MARGIN_LEFT - MARGIN_RIGHT,
        height: h - MARGIN_TOP - MARGIN_BOTTOM,
    };

    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" font-family=\"sans-serif\" font-size=\"12\">",
        spec.width, spec.height, spec.width, spec.height
    )
    .unwrap();
    writeln!(out, "  <title>{}</title>", escape(&spec.title)).unwrap();
    writeln!(out, "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>").unwrap();

    // quantile gridlines on x, tenths on y
    for i in 0..=quantiles {
        let pct = i as f64 * 100.0 / quantiles as f64;
        let x = num(plot.x(pct));
        writeln!(
            out,
            "  <line class=\"grid-x\" data-x-pct=\"{}\" x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\" stroke=\"#dddddd\"/>",
            num(pct),
            num(plot.y(0.0)),
            num(plot.y(100.0))
        )
        .unwrap();
        writeln!(
            out,
            "  <text x=\"{x}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
            num(plot.y(0.0) + 16.0),
            num(pct)
        )
        .unwrap();
    }
    for i in 0..=10 {
        let pct = i as f64 * 10.0;
        let y = num(plot.y(pct));
        writeln!(
            out,
            "  <line class=\"grid-y\" data-y-pct=\"{}\" x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"#dddddd\"/>",
            num(pct),
            num(plot.x(0.0)),
            num(plot.x(100.0))
        )
        .unwrap();
        writeln!(out, "  <text x=\"{}\" y=\"{y}\" text-anchor=\"end\" dy=\"4\">{}</text>", num(plot.x(0.0) - 6.0), num(pct))
            .unwrap();
    }
    writeln!(
        out,
        "  <rect class=\"frame\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333333\"/>",
        num(plot.left),
        num(plot.top),
        num(plot.width),
        num(plot.height)
    )
    .unwrap();
    writeln!(
        out,
        "  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
        num(plot.x(50.0)),
        num(h - 16.0),
        escape(&spec.x_label)
    )
    .unwrap();
    writeln!(
        out,
        "  <text transform=\"translate(18 {}) rotate(-90)\" text-anchor=\"middle\">{}</text>",
        num(plot.y(50.0)),
        escape(&spec.y_label)
    )
    .unwrap();
    writeln!(
        out,
        "  <text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>",
        num(plot.x(50.0)),
        escape(&spec.title)
    )
    .unwrap();

    let mut legend: Vec<(String, String, Option<&str>)> = Vec::new();
    if let Some(b) = &baseline {
        polyline(&mut out, &plot, b, "baseline", "#7f7f7f", Some("4 4"));
        legend.push((b.model_name.clone(), "#7f7f7f".into(), Some("4 4")));
    }
    if let Some(i) = &ideal {
        polyline(&mut out, &plot, i, "ideal", "#000000", Some("2 3"));
        legend.push((i.model_name.clone(), "#000000".into(), Some("2 3")));
    }
    for (idx, p) in profiles.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        polyline(&mut out, &plot, p, "model", color, None);
        legend.push((p.model_name.clone(), color.into(), None));
    }

    let lx = plot.left + plot.width + 16.0;
    for (i, (name, color, dash)) in legend.iter().enumerate() {
        let y = plot.top + 8.0 + i as f64 * 20.0;
        let dash = dash.map(|d| format!(" stroke-dasharray=\"{d}\"")).unwrap_or_default();
        writeln!(
            out,
            "  <line class=\"legend\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"2\"{dash}/>",
            num(lx),
            num(y),
            num(lx + 24.0),
            num(y)
        )
        .unwrap();
        writeln!(out, "  <text x=\"{}\" y=\"{}\" dy=\"4\">{}</text>", num(lx + 30.0), num(y), escape(name)).unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{case_study, CaseStudyModel};
    use crate::metrics::gain_profile;
    use crate::ranking::{partition_quantiles, rank_instances, TiePolicy};

    fn profile(m: CaseStudyModel, q: usize) -> GainProfile {
        let r = rank_instances(&case_study(m), TiePolicy::Stable);
        gain_profile(&partition_quantiles(&r, q).unwrap()).unwrap()
    }

    #[test]
    fn baseline_is_the_diagonal() {
        let b = random_baseline(10).unwrap();
        for (x, y) in curve_points(&b) {
            assert!((x - y).abs() < 1e-9);
        }
        let pts = curve_points(&b);
        assert_eq!(pts.first(), Some(&(0.0, 0.0)));
        assert_eq!(pts.last(), Some(&(100.0, 100.0)));
    }

    #[test]
    fn ideal_reaches_top_at_second_decile() {
        let ideal = ideal_profile(2091, 414, 10).unwrap();
        let pts = curve_points(&ideal);
        assert_eq!(pts[2], (20.0, 100.0));
        assert!(pts[1].1 < 100.0);
    }

    #[test]
    fn rejects_mixed_quantiles_and_empty_input() {
        let spec = ChartSpec::default();
        assert_eq!(render_chart(&spec, &[]), Err(ChartError::NoSeries));
        let mixed = [profile(CaseStudyModel::M1, 10), profile(CaseStudyModel::M2, 5)];
        assert!(matches!(render_chart(&spec, &mixed), Err(ChartError::MismatchedQuantiles { found: 5, .. })));
        let tiny = ChartSpec { width: 100, ..ChartSpec::default() };
        assert!(matches!(render_chart(&tiny, &mixed[..1]), Err(ChartError::TooSmall { .. })));
    }

    #[test]
    fn output_is_deterministic_and_self_contained() {
        let spec = ChartSpec {
            include_baseline: true,
            include_ideal: true,
            ..ChartSpec::default()
        };
        let ps: Vec<GainProfile> = CaseStudyModel::ALL.iter().map(|&m| profile(m, 10)).collect();
        let a = render_chart(&spec, &ps).unwrap();
        assert_eq!(a, render_chart(&spec, &ps).unwrap());
        assert!(a.starts_with("<svg "));
        assert!(!a.contains("<script") && !a.contains("@font-face") && !a.contains("href"));
        assert_eq!(a.matches("<polyline").count(), 5);
    }
}
