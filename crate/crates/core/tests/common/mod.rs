#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gainbudget::dataset::{Label, LabeledDataset, LabeledInstance};
use proptest::prelude::*;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gainbudget"))
}

pub fn run_bin(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 stdout")
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8 stderr")
}

/// Builds a dataset from `(score, positive)` pairs with ids `r0, r1, ...`.
pub fn dataset(rows: &[(i32, bool)]) -> LabeledDataset {
    let instances = rows
        .iter()
        .enumerate()
        .map(|(i, &(s, p))| {
            let label = if p { Label::Positive } else { Label::Negative };
            LabeledInstance::new(format!("r{i}"), s as f64, label)
        })
        .collect();
    LabeledDataset::new("gen", instances).expect("generated rows are valid")
}

/// Rows of `1..=max_n` instances with small integer scores (so ties occur)
/// and at least one positive.
pub fn rows(max_n: usize) -> impl Strategy<Value = Vec<(i32, bool)>> {
    prop::collection::vec((0i32..20, any::<bool>()), 1..=max_n).prop_map(|mut v| {
        if !v.iter().any(|r| r.1) {
            v[0].1 = true;
        }
        v
    })
}

/// Rows plus a quantile count in `1..=N`.
pub fn rows_and_quantiles(max_n: usize) -> impl Strategy<Value = (Vec<(i32, bool)>, usize)> {
    rows(max_n).prop_flat_map(|v| {
        let n = v.len();
        (Just(v), 1..=n)
    })
}

/// Brute-force per-quantile positive counts. Sorts the rows by a hand-written
/// insertion sort (descending score, input order among ties), then assigns
/// rank `i` to quantile `ceil((i + 1) * Q / N) - 1`.
pub fn brute_force_counts(rows: &[(i32, bool)], quantiles: usize) -> Vec<usize> {
    let mut sorted: Vec<(usize, i32, bool)> = Vec::new();
    for (idx, &(score, pos)) in rows.iter().enumerate() {
        let mut at = sorted.len();
        while at > 0 && sorted[at - 1].1 < score {
            at -= 1;
        }
        sorted.insert(at, (idx, score, pos));
    }
    let n = rows.len();
    let mut counts = vec![0usize; quantiles];
    for (rank, &(_, _, pos)) in sorted.iter().enumerate() {
        let q = ((rank + 1) * quantiles).div_ceil(n) - 1;
        if pos {
            counts[q] += 1;
        }
    }
    counts
}

/// Minimal attribute reader for the SVG polylines the chart renderer emits.
pub fn attr<'a>(element: &'a str, name: &str) -> Option<&'a str> {
    let key = format!(" {name}=\"");
    let start = element.find(&key)? + key.len();
    let end = element[start..].find('"')? + start;
    Some(&element[start..end])
}

pub fn elements<'a>(svg: &'a str, tag: &str) -> Vec<&'a str> {
    let open = format!("<{tag} ");
    svg.lines().map(str::trim).filter(|l| l.starts_with(&open)).collect()
}

pub fn points(polyline: &str) -> Vec<(f64, f64)> {
    attr(polyline, "points")
        .expect("points attribute")
        .split_whitespace()
        .map(|p| {
            let (x, y) = p.split_once(',').expect("x,y");
            (x.parse().expect("x"), y.parse().expect("y"))
        })
        .collect()
}
