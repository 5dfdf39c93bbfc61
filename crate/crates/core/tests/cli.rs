mod common;

use std::fs;

use common::{fixture, run_bin, stderr, stdout};
use serde_json::Value;

fn path(name: &str) -> String {
    fixture(name).to_str().unwrap().to_string()
}

#[test]
fn eval_prints_gain_and_cutoff_tables() {
    let out = run_bin(&["eval", &path("worked_s2m1.csv"), "--quantiles", "6", "--cutoff-k", "4"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("quantiles: 6, ties: stable\n"));
    let row = text.lines().find(|l| l.starts_with("worked_s2m1") && l.split_whitespace().nth(1) == Some("4")).unwrap();
    assert_eq!(row.split_whitespace().collect::<Vec<_>>()[2..7], ["1", "3", "0", "2", "0.17"]);
    assert!(text.contains("Cumulative gain"));
}

#[test]
fn eval_json_has_counts_and_hash() {
    let out = run_bin(&["eval", &path("worked_s1m2.csv"), "--quantiles", "3", "--format", "json"]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["schema_version"], 1);
    let m = &doc["models"][0];
    assert_eq!(m["profile"]["cumulative_positive_count"], serde_json::json!([2, 2, 3]));
    assert_eq!(m["input_sha256"].as_str().unwrap().len(), 64);
    assert!(m["cutoff"].is_null());
}

#[test]
fn compare_orders_by_cost() {
    let out = run_bin(&[
        "compare",
        &path("m1.csv"),
        &path("m2.csv"),
        &path("m3.csv"),
        "--full-recall",
        "--unit-cost",
        "0.04",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    for cost in ["16.73", "33.46", "41.82"] {
        assert!(text.contains(cost), "missing {cost}");
    }
    assert!(text.contains("by cost to target (cheapest first): m1 < m2 < m3"));
}

#[test]
fn budget_reports_yield_of_two_deciles() {
    let out = run_bin(&[
        "budget",
        &path("m1.csv"),
        &path("m2.csv"),
        &path("m3.csv"),
        "--budget",
        "16.73",
        "--unit-cost",
        "0.04",
        "--format",
        "json",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let tps: Vec<i64> = doc["models"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["fixed_budget"]["expected_tp"].as_i64().unwrap())
        .collect();
    assert_eq!(tps, [414, 410, 394]);
    assert_eq!(doc["money_unit"], "minor");
}

#[test]
fn stop_shows_next_quantile_gain() {
    let out = run_bin(&["stop", &path("m3.csv"), "--annotated-quantiles", "2", "--unit-cost", "0.04"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let section = text.split("Next quantile").nth(1).unwrap();
    let row = section.lines().find(|l| l.starts_with("m3 ")).unwrap();
    let cells: Vec<&str> = row.split_whitespace().collect();
    assert_eq!(cells[1..4], ["2", "+8", "8.36"]);
    assert_eq!(cells[5], "no");
}

#[test]
fn out_and_svg_out_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.md");
    let svg = dir.path().join("chart.svg");
    let out = run_bin(&[
        "chart",
        &path("m1.csv"),
        &path("m2.csv"),
        "--svg-out",
        svg.to_str().unwrap(),
        "--format",
        "md",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    assert!(fs::read_to_string(&report).unwrap().contains("### Cumulative gain"));
}

#[test]
fn help_lists_flags_for_every_subcommand() {
    let cases: [(&str, &[&str]); 5] = [
        ("eval", &["--quantiles", "--tie-policy", "--cutoff-k", "--cutoff-frac", "--format", "--out"]),
        ("compare", &["--name", "--unit-cost", "--full-recall", "--f-score", "--cost-rule"]),
        ("budget", &["--budget", "--target", "--full-recall", "--unit-cost", "--currency"]),
        ("stop", &["--annotated-quantiles", "--unit-cost"]),
        ("chart", &["--svg-out", "--baseline", "--ideal", "--width", "--height"]),
    ];
    for (cmd, flags) in cases {
        let out = run_bin(&[cmd, "--help"]);
        assert_eq!(out.status.code(), Some(0), "{cmd}");
        let text = stdout(&out);
        for flag in flags {
            assert!(text.contains(flag), "{cmd} --help lacks {flag}");
        }
    }
}

#[test]
fn usage_errors_exit_2() {
    for argv in [
        vec!["eval"],
        vec!["frobnicate"],
        vec!["eval", "x.csv", "--quantiles", "0"],
        vec!["eval", "x.csv", "--cutoff-k", "2", "--cutoff-frac", "0.5"],
        vec!["budget", "x.csv", "--target", "3", "--full-recall", "--unit-cost", "1"],
    ] {
        let out = run_bin(&argv);
        assert_eq!(out.status.code(), Some(2), "{argv:?}");
    }
}

#[test]
fn input_errors_exit_1_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "id,score,label\na,0.5,1\na,0.4,0\nb,x,1\n").unwrap();
    let no_pos = dir.path().join("nopos.csv");
    fs::write(&no_pos, "id,score,label\na,0.5,0\n").unwrap();
    let missing = dir.path().join("missing.csv");

    for file in [&bad, &no_pos, &missing] {
        let out = run_bin(&["eval", file.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1), "{file:?}");
        let err = stderr(&out);
        assert!(err.starts_with("error: "), "{err}");
        assert_eq!(err.lines().count(), 1, "{err}");
        assert!(out.stdout.is_empty());
    }

    let out = run_bin(&["eval", bad.to_str().unwrap()]);
    let err = stderr(&out);
    assert!(err.contains("lines 3, 4") && err.contains("duplicate id"), "{err}");
}

#[test]
fn quantiles_above_n_is_an_input_error() {
    let out = run_bin(&["eval", &path("worked_s1m1.csv"), "--quantiles", "7"]);
    assert_eq!(out.status.code(), Some(1));
}
