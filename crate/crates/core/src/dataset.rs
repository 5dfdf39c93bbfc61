//! Loading labeled prediction files.
//!
//! A prediction file is delimited UTF-8 text with a header row. Each data row
//! carries an instance id, the model's confidence score and the gold label.
//! Input order is preserved because it is the final tiebreak when ranking.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::{Read, Write};

use serde::Serialize;
use thiserror::Error;

/// Gold class of an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub fn is_positive(self) -> bool {
        matches!(self, Label::Positive)
    }
}

/// One prediction: identifier, confidence score and gold label.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledInstance {
    pub id: String,
    pub score: f64,
    pub label: Label,
}

impl LabeledInstance {
    pub fn new(id: impl Into<String>, score: f64, label: Label) -> Self {
        LabeledInstance {
            id: id.into(),
            score,
            label,
        }
    }
}

/// A model's predictions over a test set, in input-file order.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledDataset {
    pub name: String,
    pub instances: Vec<LabeledInstance>,
}

impl LabeledDataset {
    /// Builds a dataset, checking that it is non-empty, that every id is
    /// non-empty and unique, and that every score is finite.
    pub fn new(
        name: impl Into<String>,
        instances: Vec<LabeledInstance>,
    ) -> Result<Self, DatasetError> {
        if instances.is_empty() {
            return Err(DatasetError::Empty);
        }
        let mut issues = Vec::new();
        let mut seen = HashSet::new();
        for (idx, inst) in instances.iter().enumerate() {
            let position = idx + 1;
            if inst.id.is_empty() {
                issues.push(BadRow::new(position, RowIssue::EmptyId));
            } else if !seen.insert(inst.id.as_str()) {
                issues.push(BadRow::new(position, RowIssue::DuplicateId(inst.id.clone())));
            }
            if !inst.score.is_finite() {
                issues.push(BadRow::new(position, RowIssue::NonFiniteScore(inst.score.to_string())));
            }
        }
        if !issues.is_empty() {
            return Err(DatasetError::InvalidRows(issues));
        }
        Ok(LabeledDataset {
            name: name.into(),
            instances,
        })
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn positive_count(&self) -> usize {
        self.instances.iter().filter(|i| i.label.is_positive()).count()
    }
}

/// Column mapping and label tokens used when reading a prediction file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnSchema {
    pub id_col: String,
    pub score_col: String,
    pub label_col: String,
    pub positive_token: String,
    pub negative_token: String,
    pub delimiter: u8,
}

impl Default for ColumnSchema {
    fn default() -> Self {
        ColumnSchema {
            id_col: "id".into(),
            score_col: "score".into(),
            label_col: "label".into(),
            positive_token: "1".into(),
            negative_token: "0".into(),
            delimiter: b',',
        }
    }
}

impl ColumnSchema {
    fn uses_default_tokens(&self) -> bool {
        self.positive_token == "1" && self.negative_token == "0"
    }

    /// Maps a raw label cell to a class. With the default `1`/`0` tokens,
    /// `true`/`false` are accepted in any case as well.
    pub fn parse_label(&self, raw: &str) -> Option<Label> {
        let token = raw.trim();
        if token == self.positive_token {
            return Some(Label::Positive);
        }
        if token == self.negative_token {
            return Some(Label::Negative);
        }
        if self.uses_default_tokens() {
            if token.eq_ignore_ascii_case("true") {
                return Some(Label::Positive);
            }
            if token.eq_ignore_ascii_case("false") {
                return Some(Label::Negative);
            }
        }
        None
    }
}

/// Why a data row was rejected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum RowIssue {
    EmptyId,
    NonNumericScore(String),
    NonFiniteScore(String),
    UnknownLabel(String),
    DuplicateId(String),
    MissingField(String),
    Malformed(String),
}

impl fmt::Display for RowIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowIssue::EmptyId => write!(f, "empty id"),
            RowIssue::NonNumericScore(s) => write!(f, "non-numeric score {s:?}"),
            RowIssue::NonFiniteScore(s) => write!(f, "non-finite score {s:?}"),
            RowIssue::UnknownLabel(s) => write!(f, "unrecognized label token {s:?}"),
            RowIssue::DuplicateId(s) => write!(f, "duplicate id {s:?}"),
            RowIssue::MissingField(s) => write!(f, "missing field {s:?}"),
            RowIssue::Malformed(s) => write!(f, "malformed row: {s}"),
        }
    }
}

/// A rejected row with its 1-based line number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BadRow {
    pub line: usize,
    pub reason: RowIssue,
}

impl BadRow {
    fn new(line: usize, reason: RowIssue) -> Self {
        BadRow { line, reason }
    }
}

impl fmt::Display for BadRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)
    }
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read input: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse header: {0}")]
    Header(String),
    #[error("missing column {0:?} in header")]
    MissingColumn(String),
    #[error("dataset has zero instances")]
    Empty,
    #[error("{} invalid row(s); first: {}", .0.len(), .0[0])]
    InvalidRows(Vec<BadRow>),
}

/// Counts and problems found in a dataset or a raw source.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub instance_count: usize,
    pub positive_count: usize,
    pub duplicate_ids: Vec<String>,
    pub bad_rows: Vec<BadRow>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.duplicate_ids.is_empty() && self.bad_rows.is_empty()
    }
}

struct ColumnIndex {
    id: usize,
    score: usize,
    label: usize,
}

fn locate_columns(headers: &csv::StringRecord, schema: &ColumnSchema) -> Result<ColumnIndex, DatasetError> {
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| DatasetError::MissingColumn(name.to_string()))
    };
    Ok(ColumnIndex {
        id: find(&schema.id_col)?,
        score: find(&schema.score_col)?,
        label: find(&schema.label_col)?,
    })
}

fn parse_score(raw: &str) -> Result<f64, RowIssue> {
    let raw = raw.trim();
    match raw.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(RowIssue::NonFiniteScore(raw.to_string())),
        Err(_) => Err(RowIssue::NonNumericScore(raw.to_string())),
    }
}

/// Rows read from a source, good and bad, before any dataset-level checks.
struct Scan {
    rows: Vec<(usize, LabeledInstance)>,
    bad: Vec<BadRow>,
}

fn scan<R: Read>(source: R, schema: &ColumnSchema) -> Result<Scan, DatasetError> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter)
        .has_headers(true)
        .flexible(true)
        .from_reader(source);
    let headers = reader.headers().map_err(csv_to_dataset_error)?.clone();
    let cols = locate_columns(&headers, schema)?;

    let mut rows = Vec::new();
    let mut bad = Vec::new();
    for record in reader.records() {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                if let csv::ErrorKind::Io(_) = e.kind() {
                    return Err(csv_to_dataset_error(e));
                }
                let line = e.position().map_or(0, |p| p.line() as usize);
                bad.push(BadRow::new(line, RowIssue::Malformed(e.to_string())));
                continue;
            }
        };
        let line = record.position().map_or(0, |p| p.line() as usize);
        match parse_row(&record, &cols, schema) {
            Ok(inst) => rows.push((line, inst)),
            Err(issue) => bad.push(BadRow::new(line, issue)),
        }
    }
    Ok(Scan { rows, bad })
}

fn parse_row(record: &csv::StringRecord, cols: &ColumnIndex, schema: &ColumnSchema) -> Result<LabeledInstance, RowIssue> {
    let field = |idx: usize, name: &str| record.get(idx).ok_or_else(|| RowIssue::MissingField(name.to_string()));
    let id = field(cols.id, &schema.id_col)?.trim();
    if id.is_empty() {
        return Err(RowIssue::EmptyId);
    }
    let score = parse_score(field(cols.score, &schema.score_col)?)?;
    let raw_label = field(cols.label, &schema.label_col)?;
    let label = schema
        .parse_label(raw_label)
        .ok_or_else(|| RowIssue::UnknownLabel(raw_label.trim().to_string()))?;
    Ok(LabeledInstance::new(id, score, label))
}

fn csv_to_dataset_error(e: csv::Error) -> DatasetError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => DatasetError::Io(io),
        other => DatasetError::Header(format!("{other:?}")),
    }
}

fn duplicates(rows: &[(usize, LabeledInstance)]) -> (Vec<String>, Vec<BadRow>) {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    let mut ids = Vec::new();
    let mut bad = Vec::new();
    for (line, inst) in rows {
        let seen = counts.entry(inst.id.as_str()).or_insert(0);
        *seen += 1;
        if *seen == 2 {
            ids.push(inst.id.clone());
        }
        if *seen >= 2 {
            bad.push(BadRow::new(*line, RowIssue::DuplicateId(inst.id.clone())));
        }
    }
    (ids, bad)
}

/// Reads a prediction file into a dataset named `name`.
///
/// Every rejected row is collected; the error carries all of them with their
/// line numbers (the header is line 1).
pub fn parse_dataset<R: Read>(source: R, name: &str, schema: &ColumnSchema) -> Result<LabeledDataset, DatasetError> {
    let Scan { rows, mut bad } = scan(source, schema)?;
    let (_, dup_rows) = duplicates(&rows);
    bad.extend(dup_rows);
    if !bad.is_empty() {
        bad.sort_by_key(|b| b.line);
        return Err(DatasetError::InvalidRows(bad));
    }
    if rows.is_empty() {
        return Err(DatasetError::Empty);
    }
    Ok(LabeledDataset {
        name: name.to_string(),
        instances: rows.into_iter().map(|(_, inst)| inst).collect(),
    })
}

/// Summarizes a parsed dataset. Never fails.
pub fn validate_dataset(d: &LabeledDataset) -> ValidationReport {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    let mut duplicate_ids = Vec::new();
    for inst in &d.instances {
        let c = counts.entry(inst.id.as_str()).or_insert(0);
        *c += 1;
        if *c == 2 {
            duplicate_ids.push(inst.id.clone());
        }
    }
    ValidationReport {
        instance_count: d.len(),
        positive_count: d.positive_count(),
        duplicate_ids,
        bad_rows: Vec::new(),
    }
}

/// Like [`parse_dataset`] but reports problems instead of failing on them.
/// Only an unreadable stream or a missing column is an error.
pub fn validate_source<R: Read>(source: R, schema: &ColumnSchema) -> Result<ValidationReport, DatasetError> {
    let Scan { rows, mut bad } = scan(source, schema)?;
    let (duplicate_ids, dup_rows) = duplicates(&rows);
    bad.extend(dup_rows);
    bad.sort_by_key(|b| b.line);
    Ok(ValidationReport {
        instance_count: rows.len(),
        positive_count: rows.iter().filter(|(_, i)| i.label.is_positive()).count(),
        duplicate_ids,
        bad_rows: bad,
    })
}

/// Writes a dataset in the canonical `id,score,label` layout with `1`/`0`
/// labels. Scores use the shortest representation that reads back exactly.
pub fn write_dataset<W: Write>(d: &LabeledDataset, sink: W) -> Result<(), DatasetError> {
    let mut writer = csv::Writer::from_writer(sink);
    let io = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(io) => DatasetError::Io(io),
        other => DatasetError::Io(std::io::Error::other(format!("{other:?}"))),
    };
    writer.write_record(["id", "score", "label"]).map_err(io)?;
    for inst in &d.instances {
        let label = if inst.label.is_positive() { "1" } else { "0" };
        writer
            .write_record([inst.id.as_str(), &inst.score.to_string(), label])
            .map_err(io)?;
    }
    writer.flush()?;
    Ok(())
}
