//! The `gainbudget` command line.
//!
//! Exit status: 0 on success, 1 on input or validation errors, 2 on usage
//! errors. Diagnostics go to the error stream; results go to the output stream
//! or to the file named by `--out` / `--svg-out`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use crate::budget::{CostModel, CostRule, Target};
use crate::dataset::{parse_dataset, ColumnSchema, DatasetError, LabeledDataset};
use crate::metrics::Cutoff;
use crate::money::{Money, UnitCost};
use crate::report::{
    evaluate, render_chart, render_json, render_markdown, render_table, ChartSpec, EvalOptions, EvaluationReport,
    ModelReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "gainbudget", version, about = "Gain curves and annotation-budget planning for ranked classifier output")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Gain profile of one model, plus cutoff metrics when a cutoff is given.
    Eval(EvalArgs),
    /// Side-by-side profiles of several models, with budget and F-score orderings.
    Compare(CompareArgs),
    /// What a fixed budget buys, or what a target number of positives costs.
    Budget(BudgetArgs),
    /// Whether annotating one more quantile is worth it.
    Stop(StopArgs),
    /// Cumulative gain chart as SVG.
    Chart(ChartArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Md,
    Json,
}

#[derive(Debug, Args)]
struct SchemaArgs {
    /// Column holding instance ids.
    #[arg(long, default_value = "id")]
    id_col: String,
    /// Column holding model scores (higher ranks earlier).
    #[arg(long, default_value = "score")]
    score_col: String,
    /// Column holding gold labels.
    #[arg(long, default_value = "label")]
    label_col: String,
    /// Label token for the positive class.
    #[arg(long, default_value = "1")]
    positive_token: String,
    /// Label token for the negative class.
    #[arg(long, default_value = "0")]
    negative_token: String,
    /// Field delimiter: `comma`, `tab`, or a single character.
    #[arg(long, default_value = "comma", value_parser = parse_delimiter)]
    delimiter: u8,
}

impl SchemaArgs {
    fn schema(&self) -> ColumnSchema {
        ColumnSchema {
            id_col: self.id_col.clone(),
            score_col: self.score_col.clone(),
            label_col: self.label_col.clone(),
            positive_token: self.positive_token.clone(),
            negative_token: self.negative_token.clone(),
            delimiter: self.delimiter,
        }
    }
}

fn parse_delimiter(s: &str) -> Result<u8, String> {
    match s {
        "comma" | "," => Ok(b','),
        "tab" | "\\t" | "\t" => Ok(b'\t'),
        other if other.len() == 1 && other.is_ascii() => Ok(other.as_bytes()[0]),
        other => Err(format!("unsupported delimiter {other:?}")),
    }
}

#[derive(Debug, Args)]
struct RankArgs {
    /// Number of quantiles the ranked list is split into.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    quantiles: u64,
    /// Ordering of equal scores.
    #[arg(long, default_value = "stable", value_parser = ["stable", "pessimistic", "optimistic"])]
    tie_policy: String,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CutoffArgs {
    /// Predict the top K ranked instances positive.
    #[arg(long, value_name = "K", conflicts_with = "cutoff_frac")]
    cutoff_k: Option<usize>,
    /// Predict the top round(FRAC * N) instances positive.
    #[arg(long, value_name = "FRAC")]
    cutoff_frac: Option<f64>,
}

impl CutoffArgs {
    fn cutoff(&self) -> Option<Cutoff> {
        self.cutoff_k
            .map(Cutoff::Count)
            .or(self.cutoff_frac.map(Cutoff::Fraction))
    }
}

#[derive(Debug, Args)]
struct CostArgs {
    /// Price of annotating one candidate, e.g. 0.04.
    #[arg(long, value_name = "AMOUNT")]
    unit_cost: Option<UnitCost>,
    /// Currency label shown next to amounts.
    #[arg(long, default_value = "USD")]
    currency: String,
    /// How quantile sizes are priced.
    #[arg(long, default_value = "fractional", value_parser = ["fractional", "integer"])]
    cost_rule: String,
}

impl CostArgs {
    fn model(&self) -> Option<CostModel> {
        let rule: CostRule = self.cost_rule.parse().expect("restricted by clap");
        self.unit_cost
            .map(|u| CostModel::new(u).with_rule(rule).with_currency(self.currency.clone()))
    }
}

#[derive(Debug, Args)]
struct PlanArgs {
    /// Fixed budget to spend.
    #[arg(long, value_name = "AMOUNT")]
    budget: Option<Money>,
    /// Number of positives to reach.
    #[arg(long, value_name = "TP", conflicts_with = "full_recall", value_parser = clap::value_parser!(u64).range(1..))]
    target: Option<u64>,
    /// Reach every positive in the list.
    #[arg(long)]
    full_recall: bool,
}

impl PlanArgs {
    fn target(&self) -> Option<Target> {
        if self.full_recall {
            Some(Target::FullRecall)
        } else {
            self.target.map(|t| Target::Count(t as usize))
        }
    }
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Prediction files (delimited text with a header row).
    #[arg(required = true, value_name = "FILE")]
    files: Vec<PathBuf>,
    /// Model name per input, in order; defaults to the file stem.
    #[arg(long = "name", value_name = "NAME")]
    names: Vec<String>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Prediction file.
    #[arg(value_name = "FILE")]
    file: PathBuf,
    /// Model name; defaults to the file stem.
    #[arg(long)]
    name: Option<String>,
    #[command(flatten)]
    schema: SchemaArgs,
    #[command(flatten)]
    rank: RankArgs,
    #[command(flatten)]
    cutoff: CutoffArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    inputs: InputArgs,
    #[command(flatten)]
    schema: SchemaArgs,
    #[command(flatten)]
    rank: RankArgs,
    #[command(flatten)]
    cutoff: CutoffArgs,
    #[command(flatten)]
    cost: CostArgs,
    #[command(flatten)]
    plan: PlanArgs,
    /// Externally measured F-score of a model, as NAME=VALUE. Overrides
    /// cutoff-based F1 in the F-score ordering.
    #[arg(long = "f-score", value_name = "NAME=VALUE", value_parser = parse_f_score)]
    f_scores: Vec<(String, f64)>,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_f_score(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got {s:?}"))?;
    let value: f64 = value.trim().parse().map_err(|_| format!("{value:?} is not a number"))?;
    if !value.is_finite() {
        return Err(format!("{value} is not finite"));
    }
    Ok((name.trim().to_string(), value))
}

#[derive(Debug, Args)]
struct BudgetArgs {
    #[command(flatten)]
    inputs: InputArgs,
    #[command(flatten)]
    schema: SchemaArgs,
    #[command(flatten)]
    rank: RankArgs,
    #[command(flatten)]
    cost: CostArgs,
    #[command(flatten)]
    plan: PlanArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct StopArgs {
    #[command(flatten)]
    inputs: InputArgs,
    #[command(flatten)]
    schema: SchemaArgs,
    #[command(flatten)]
    rank: RankArgs,
    #[command(flatten)]
    cost: CostArgs,
    /// Quantiles already annotated.
    #[arg(long, value_name = "Q", required = true)]
    annotated_quantiles: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ChartArgs {
    #[command(flatten)]
    inputs: InputArgs,
    #[command(flatten)]
    schema: SchemaArgs,
    #[command(flatten)]
    rank: RankArgs,
    /// Write the SVG here; without it the SVG goes to standard output.
    #[arg(long, value_name = "PATH")]
    svg_out: Option<PathBuf>,
    /// Chart width in pixels.
    #[arg(long, default_value_t = 640)]
    width: u32,
    /// Chart height in pixels.
    #[arg(long, default_value_t = 480)]
    height: u32,
    /// Draw the random-ranking diagonal.
    #[arg(long)]
    baseline: bool,
    /// Draw the perfect-ranking curve.
    #[arg(long)]
    ideal: bool,
    /// Chart title.
    #[arg(long, default_value = "Cumulative gain")]
    title: String,
    #[command(flatten)]
    output: OutputArgs,
}

/// A failure with its exit status.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

fn describe_dataset_error(e: &DatasetError) -> String {
    match e {
        DatasetError::InvalidRows(rows) => {
            let lines: Vec<String> = rows.iter().take(10).map(|r| r.line.to_string()).collect();
            let more = if rows.len() > 10 { ", ..." } else { "" };
            format!(
                "{} invalid row(s) (lines {}{more}); first: {}",
                rows.len(),
                lines.join(", "),
                rows[0]
            )
        }
        other => other.to_string(),
    }
}

struct Loaded {
    dataset: LabeledDataset,
    sha256: String,
}

fn load(path: &Path, name: String, schema: &ColumnSchema) -> Result<Loaded, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::input(format!("{}: cannot read: {e}", path.display())))?;
    let sha256 = hex::encode(Sha256::digest(&bytes));
    let dataset = parse_dataset(bytes.as_slice(), &name, schema)
        .map_err(|e| Failure::input(format!("{}: {}", path.display(), describe_dataset_error(&e))))?;
    Ok(Loaded { dataset, sha256 })
}

fn default_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Reads every input, in parallel, keeping argument order.
fn load_all(inputs: &[(PathBuf, String)], schema: &ColumnSchema) -> Result<Vec<Loaded>, Failure> {
    let results: Vec<Result<Loaded, Failure>> = std::thread::scope(|scope| {
        let handles: Vec<_> = inputs
            .iter()
            .map(|(path, name)| scope.spawn(move || load(path, name.clone(), schema)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("loader thread")).collect()
    });
    results.into_iter().collect()
}

fn named_inputs(args: &InputArgs) -> Result<Vec<(PathBuf, String)>, Failure> {
    if args.names.len() > args.files.len() {
        return Err(Failure::usage(format!(
            "{} --name values given for {} input file(s)",
            args.names.len(),
            args.files.len()
        )));
    }
    let pairs: Vec<(PathBuf, String)> = args
        .files
        .iter()
        .enumerate()
        .map(|(i, f)| (f.clone(), args.names.get(i).cloned().unwrap_or_else(|| default_name(f))))
        .collect();
    let mut seen = std::collections::HashSet::new();
    for (_, name) in &pairs {
        if !seen.insert(name.as_str()) {
            return Err(Failure::usage(format!(
                "model name {name:?} is used twice; set distinct names with --name"
            )));
        }
    }
    Ok(pairs)
}

fn options(rank: &RankArgs) -> EvalOptions {
    EvalOptions {
        quantiles: rank.quantiles as usize,
        tie_policy: rank.tie_policy.parse().expect("restricted by clap"),
        ..EvalOptions::default()
    }
}

fn evaluate_all(loaded: Vec<Loaded>, opts: &EvalOptions) -> Result<Vec<ModelReport>, Failure> {
    loaded
        .into_iter()
        .map(|l| {
            let mut m = evaluate(&l.dataset, opts).map_err(|e| Failure::input(format!("{}: {e}", l.dataset.name)))?;
            m.input_sha256 = Some(l.sha256);
            Ok(m)
        })
        .collect()
}

fn render(report: &EvaluationReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => render_table(report),
        OutputFormat::Md => render_markdown(report),
        OutputFormat::Json => render_json(report),
    }
}

fn emit(text: &str, path: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::input(format!("{}: cannot write: {e}", p.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::input(format!("cannot write output: {e}"))),
    }
}

fn require_cost(cost: &CostArgs, command: &str) -> Result<CostModel, Failure> {
    cost.model()
        .ok_or_else(|| Failure::usage(format!("`{command}` needs --unit-cost")))
}

fn run_eval(args: EvalArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let name = args.name.clone().unwrap_or_else(|| default_name(&args.file));
    let loaded = load(&args.file, name, &args.schema.schema())?;
    let opts = EvalOptions {
        cutoff: args.cutoff.cutoff(),
        ..options(&args.rank)
    };
    let model = evaluate_all(vec![loaded], &opts)?.remove(0);
    let report = EvaluationReport::single(&opts, model);
    emit(&render(&report, args.output.format), args.output.out.as_deref(), stdout)
}

fn run_compare(args: CompareArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let inputs = named_inputs(&args.inputs)?;
    let cost = args.cost.model();
    if cost.is_none() && (args.plan.budget.is_some() || args.plan.target().is_some()) {
        return Err(Failure::usage("--budget, --target and --full-recall need --unit-cost"));
    }
    let opts = EvalOptions {
        cutoff: args.cutoff.cutoff(),
        cost,
        budget: args.plan.budget,
        target: args.plan.target(),
        ..options(&args.rank)
    };
    let loaded = load_all(&inputs, &args.schema.schema())?;
    let mut models = evaluate_all(loaded, &opts)?;

    if !args.f_scores.is_empty() {
        let scores: BTreeMap<&str, f64> = args.f_scores.iter().map(|(n, v)| (n.as_str(), *v)).collect();
        if let Some(unknown) = scores.keys().find(|n| !models.iter().any(|m| m.name == **n)) {
            return Err(Failure::input(format!("--f-score names unknown model {unknown:?}")));
        }
        for m in &mut models {
            let score = scores
                .get(m.name.as_str())
                .ok_or_else(|| Failure::input(format!("--f-score is missing model {:?}", m.name)))?;
            m.reported_f1 = Some(*score);
        }
    }
    let report = EvaluationReport::comparison(&opts, models);
    emit(&render(&report, args.output.format), args.output.out.as_deref(), stdout)
}

fn run_budget(args: BudgetArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let inputs = named_inputs(&args.inputs)?;
    let cost = require_cost(&args.cost, "budget")?;
    if args.plan.budget.is_none() && args.plan.target().is_none() {
        return Err(Failure::usage("`budget` needs --budget, --target or --full-recall"));
    }
    let opts = EvalOptions {
        cost: Some(cost),
        budget: args.plan.budget,
        target: args.plan.target(),
        ..options(&args.rank)
    };
    let models = evaluate_all(load_all(&inputs, &args.schema.schema())?, &opts)?;
    let report = if models.len() == 1 {
        EvaluationReport::single(&opts, models.into_iter().next().expect("one model"))
    } else {
        EvaluationReport::comparison(&opts, models)
    };
    emit(&render(&report, args.output.format), args.output.out.as_deref(), stdout)
}

fn run_stop(args: StopArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let inputs = named_inputs(&args.inputs)?;
    let cost = require_cost(&args.cost, "stop")?;
    let opts = EvalOptions {
        cost: Some(cost),
        annotated: Some(args.annotated_quantiles),
        ..options(&args.rank)
    };
    let models = evaluate_all(load_all(&inputs, &args.schema.schema())?, &opts)?;
    let report = EvaluationReport {
        meta: crate::report::RunMeta::from_options(&opts),
        models,
        rankings: None,
    };
    emit(&render(&report, args.output.format), args.output.out.as_deref(), stdout)
}

fn run_chart(args: ChartArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let inputs = named_inputs(&args.inputs)?;
    let opts = options(&args.rank);
    let models = evaluate_all(load_all(&inputs, &args.schema.schema())?, &opts)?;
    let spec = ChartSpec {
        title: args.title.clone(),
        width: args.width,
        height: args.height,
        include_baseline: args.baseline,
        include_ideal: args.ideal,
        ..ChartSpec::default()
    };
    let profiles: Vec<_> = models.iter().map(|m| m.profile.clone()).collect();
    let svg = render_chart(&spec, &profiles).map_err(|e| Failure::input(e.to_string()))?;
    match &args.svg_out {
        Some(path) => {
            emit(&svg, Some(path), stdout)?;
            let report = EvaluationReport::comparison(&opts, models);
            emit(&render(&report, args.output.format), args.output.out.as_deref(), stdout)
        }
        None => emit(&svg, None, stdout),
    }
}

/// Parses `argv` (program name first) and runs the subcommand. Returns the
/// process exit status.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let result = match cli.command {
        Command::Eval(a) => run_eval(a, stdout),
        Command::Compare(a) => run_compare(a, stdout),
        Command::Budget(a) => run_budget(a, stdout),
        Command::Stop(a) => run_stop(a, stdout),
        Command::Chart(a) => run_chart(a, stdout),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
