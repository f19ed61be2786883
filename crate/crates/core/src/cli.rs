//! Command-line front end. Every number printed comes straight from a
//! library call; this module only parses flags and formats output.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::bounds::BoundInputs;
use crate::code_matrix::{build_code_matrix, Orientation, TiePolicy};
use crate::error::EcocError;
use crate::experiment::{
    aggregate, analyze_fold, fig1_curves, load_predictions, scatter_points, AggregateOptions,
    AggregateReport, Averaging, Dataset, FoldSummary, KzMode, SummaryTable,
};
use crate::prob::{
    bahadur_range, binomial_distribution, binomial_pmf, tail_iid, DependenceModel, ErrorProfile,
    ExchangeableModel, PairModel,
};
use crate::simulator::{
    mc_decode_error, mc_threshold_error, Determinism, SimConfig, TrueClass, DEFAULT_SEED,
};

#[derive(Debug, Parser)]
#[command(
    name = "ecoc",
    version,
    about = "ECOC code construction, error distributions and bounds"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Table)]
    pub format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the Hadamard-derived code for a number of classes.
    Code {
        #[arg(long)]
        classes: usize,
        #[arg(long, default_value = "keep-bottom-right")]
        orientation: Orientation,
        /// Print the matrix itself, preceded by an `n d m` line.
        #[arg(long)]
        emit: bool,
    },
    /// Distribution of the number of classifier errors.
    Pmf {
        #[command(flatten)]
        model: ModelArgs,
        /// Print only P(K = k).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Probability that at least m classifiers err.
    Tail {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        m: usize,
    },
    /// GS, Feller, Chernoff and KZ bounds.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        ebar: f64,
        /// Mean pairwise correlation, enables KZ.
        #[arg(long, allow_hyphen_values = true)]
        c: Option<f64>,
        /// Sum of the bit error rates, defaults to n·ē.
        #[arg(long)]
        mu: Option<f64>,
    },
    /// Admissible correlation range for the exchangeable model.
    Bahadur {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ebar: f64,
    },
    /// Monte Carlo estimate of the ECOC error.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        /// Error threshold; defaults to m of the code with n columns.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, env = "ECOC_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// One stream per worker instead of one per trial.
        #[arg(long)]
        fast: bool,
        /// Decode corrupted codewords instead of counting threshold crossings.
        #[arg(long)]
        decode: bool,
        /// Class count of the code used with --decode; defaults to n.
        #[arg(long)]
        classes: Option<usize>,
        /// Fix the true class instead of drawing it uniformly.
        #[arg(long)]
        true_class: Option<usize>,
    },
    /// Per-fold metrics, bounds and cross-fold aggregates.
    Analyze(AnalyzeArgs),
    /// Plot data for bound curves and fold scatter plots.
    Figures {
        #[command(subcommand)]
        figure: Figure,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Iid,
    Independent,
    Pair,
    Exchangeable,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value_t = ModelKind::Iid)]
    pub model: ModelKind,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub ebar: Option<f64>,
    /// Comma-separated per-classifier error rates.
    #[arg(long, value_delimiter = ',')]
    pub rates: Option<Vec<f64>>,
    /// Joint error probability of the last two classifiers.
    #[arg(long)]
    pub f: Option<f64>,
    /// Uniform pairwise correlation.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("input").required(true))]
pub struct AnalyzeArgs {
    /// Summary CSV with one row per fold.
    #[arg(long, group = "input")]
    pub summary: Option<PathBuf>,
    /// Bundled dataset summary.
    #[arg(long, group = "input")]
    pub fixture: Option<String>,
    /// Raw predictions CSV, one file per fold (repeatable).
    #[arg(long, group = "input", num_args = 1..)]
    pub predictions: Vec<PathBuf>,
    /// Number of classes; required for --summary and --predictions.
    #[arg(long)]
    pub classes: Option<usize>,
    /// Model label to select from a multi-model summary.
    #[arg(long)]
    pub model: Option<String>,
    /// Classifier count used for the bounds; defaults to the code width.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value_t = AveragingArg::FoldWise)]
    pub averaging: AveragingArg,
    #[arg(long, value_enum, default_value_t = KzArg::Gated)]
    pub kz: KzArg,
    /// Flag decoding ties in --predictions mode.
    #[arg(long)]
    pub report_ties: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AveragingArg {
    FoldWise,
    PooledMean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KzArg {
    Gated,
    Formula,
}

#[derive(Debug, Subcommand)]
pub enum Figure {
    /// GS against Chernoff for several n at a fixed ratio.
    Fig1 {
        #[arg(long, value_delimiter = ',', default_value = "10,20,50")]
        ns: Vec<usize>,
        #[arg(long, default_value_t = 0.25)]
        r: f64,
        #[arg(long, default_value_t = 0.001)]
        step: f64,
    },
    /// Bound curves plus per-fold points for one experiment.
    Scatter {
        #[arg(long, conflicts_with = "summary")]
        fixture: Option<String>,
        #[arg(long)]
        summary: Option<PathBuf>,
        #[arg(long)]
        classes: Option<usize>,
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0.001)]
        step: f64,
        /// Upper end of the curve grid; defaults to m/n.
        #[arg(long)]
        upper: Option<f64>,
    },
}

/// Failure of a CLI run: bad flags (exit 2) or a library error (exit 1).
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Run(EcocError),
}

impl From<EcocError> for CliError {
    fn from(e: EcocError) -> Self {
        CliError::Run(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Run(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Run(e) => write!(f, "{e}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Six significant digits, switching to exponent form outside `[1e-4, 1e6)`.
pub fn six_digits(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return v.to_string();
    }
    let mag = v.abs().log10().floor() as i32;
    if !(-4..6).contains(&mag) {
        return format!("{v:.5e}");
    }
    let decimals = (5 - mag).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

impl Cell {
    fn human(&self) -> String {
        match self {
            Cell::Num(v) => six_digits(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => "-".to_string(),
        }
    }

    fn machine(&self) -> String {
        match self {
            Cell::Num(v) => v.to_string(),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Missing => Value::Null,
        }
    }
}

/// Rows of named columns, rendered in any of the three formats.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    fn single(pairs: Vec<(&'static str, Cell)>) -> Self {
        let (columns, row): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        Self {
            columns,
            rows: vec![row],
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.to_human(),
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    fn to_human(&self) -> String {
        if self.rows.len() == 1 {
            let width = self.columns.iter().map(|c| c.len()).max().unwrap_or(0);
            return self
                .columns
                .iter()
                .zip(&self.rows[0])
                .map(|(c, v)| format!("{c:<width$}  {}\n", v.human()))
                .collect();
        }
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::human).collect())
            .collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|i| {
                cells
                    .iter()
                    .map(|r| r[i].len())
                    .chain([self.columns[i].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |items: Vec<&str>| {
            let joined: Vec<String> = items
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect();
            format!("{}\n", joined.join("  "))
        };
        let mut out = line(self.columns.clone());
        for row in &cells {
            out.push_str(&line(row.iter().map(String::as_str).collect()));
        }
        out
    }

    fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::machine))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("UTF-8 cells")
    }

    fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("JSON value");
        s.push('\n');
        s
    }
}

fn build_model(args: &ModelArgs) -> CliResult<DependenceModel> {
    let need_ebar = || {
        args.ebar
            .ok_or_else(|| usage("--ebar is required for this model"))
    };
    let need_n = || {
        args.n
            .ok_or_else(|| usage("--n is required for this model"))
    };
    let profile = || -> CliResult<ErrorProfile> {
        match (&args.rates, args.n, args.ebar) {
            (Some(rates), n, _) => {
                if n.is_some_and(|n| n != rates.len()) {
                    return Err(usage("--n disagrees with the length of --rates"));
                }
                Ok(ErrorProfile::new(rates.clone())?)
            }
            (None, Some(n), Some(e)) => Ok(ErrorProfile::iid(n, e)?),
            _ => Err(usage("give --rates, or --n with --ebar")),
        }
    };
    Ok(match args.model {
        ModelKind::Iid => DependenceModel::Independent(ErrorProfile::iid(need_n()?, need_ebar()?)?),
        ModelKind::Independent => {
            let rates = args
                .rates
                .clone()
                .ok_or_else(|| usage("--rates is required for the independent model"))?;
            DependenceModel::Independent(ErrorProfile::new(rates)?)
        }
        ModelKind::Pair => {
            let f = args
                .f
                .ok_or_else(|| usage("--f is required for the pair model"))?;
            DependenceModel::CorrelatedPair(PairModel::new(profile()?, f)?)
        }
        ModelKind::Exchangeable => {
            let c = args
                .c
                .ok_or_else(|| usage("--c is required for the exchangeable model"))?;
            DependenceModel::Exchangeable(ExchangeableModel::new(need_n()?, need_ebar()?, c)?)
        }
    })
}

fn summaries_for(
    fixture: Option<&str>,
    summary: Option<&Path>,
    classes: Option<usize>,
    model: Option<&str>,
) -> CliResult<(Vec<FoldSummary>, usize)> {
    if let Some(name) = fixture {
        let dataset: Dataset = name.parse()?;
        return Ok((dataset.folds(model)?, classes.unwrap_or(dataset.classes())));
    }
    let path = summary.ok_or_else(|| usage("give --fixture or --summary"))?;
    let classes = classes.ok_or_else(|| usage("--classes is required with --summary"))?;
    let table = SummaryTable::load(path)?;
    Ok((table.fold_summaries(model)?, classes))
}

/// `(n, m)` for bound evaluation: the code for `n` classes (default the
/// class count) gives `m`.
fn width_and_m(classes: usize, n: Option<usize>) -> CliResult<(usize, usize)> {
    let code = build_code_matrix(n.unwrap_or(classes), Orientation::default())?;
    Ok((code.n(), code.m()))
}

fn report_table(report: &AggregateReport) -> Table {
    let mut t = Table::new(vec![
        "fold",
        "model",
        "mean_bit_error",
        "mean_correlation",
        "experimental",
        "gs",
        "chernoff",
        "kz",
    ]);
    for f in &report.folds {
        let s = &f.summary;
        t.push(vec![
            Cell::from(s.fold as usize),
            s.model.clone().map_or(Cell::Missing, Cell::Text),
            s.mean_bit_error.into(),
            s.mean_correlation.into(),
            s.ecoc_error.into(),
            f.gs().into(),
            f.chernoff().into(),
            f.kz.into(),
        ]);
    }
    let a = &report.aggregate;
    t.push(vec![
        "mean".into(),
        Cell::Missing,
        a.mean_bit_error.mean.into(),
        a.mean_correlation.mean.into(),
        a.experimental.mean.into(),
        a.gs.mean.into(),
        a.chernoff.mean.into(),
        a.kz.map(|c| c.mean).into(),
    ]);
    t.push(vec![
        "std".into(),
        Cell::Missing,
        a.mean_bit_error.std.into(),
        a.mean_correlation.std.into(),
        a.experimental.std.into(),
        a.gs.std.into(),
        a.chernoff.std.into(),
        a.kz.map(|c| c.std).into(),
    ]);
    t
}

fn analyze(args: &AnalyzeArgs, format: Format, warn: &mut dyn Write) -> CliResult<String> {
    let (folds, classes) = if !args.predictions.is_empty() {
        let classes = args
            .classes
            .ok_or_else(|| usage("--classes is required with --predictions"))?;
        let code = build_code_matrix(classes, Orientation::default())?;
        let policy = if args.report_ties {
            TiePolicy::ReportTie
        } else {
            TiePolicy::LowestIndex
        };
        let mut folds = Vec::new();
        for (i, path) in args.predictions.iter().enumerate() {
            let data = load_predictions(path, i as u32 + 1, classes)?;
            if data.records.is_empty() {
                let _ = writeln!(warn, "warning: {} has no samples", path.display());
            }
            folds.push(analyze_fold(&data, &code, policy)?);
        }
        (folds, classes)
    } else {
        summaries_for(
            args.fixture.as_deref(),
            args.summary.as_deref(),
            args.classes,
            args.model.as_deref(),
        )?
    };
    let (n, m) = width_and_m(classes, args.n)?;
    let options = AggregateOptions {
        averaging: match args.averaging {
            AveragingArg::FoldWise => Averaging::FoldWise,
            AveragingArg::PooledMean => Averaging::PooledMean,
        },
        kz: match args.kz {
            KzArg::Gated => KzMode::Gated,
            KzArg::Formula => KzMode::Formula,
        },
    };
    let report = aggregate(&folds, n, m, options)?;
    Ok(match format {
        Format::Table => report_table(&report).render(Format::Table),
        Format::Csv => report.to_csv(),
        Format::Json => {
            let mut s = report.to_json();
            s.push('\n');
            s
        }
    })
}

fn execute(cli: &Cli, warn: &mut dyn Write) -> CliResult<String> {
    let format = cli.format;
    let table = match &cli.command {
        Command::Code {
            classes,
            orientation,
            emit,
        } => {
            let code = build_code_matrix(*classes, *orientation)?;
            if *emit && format == Format::Table {
                return Ok(code.to_text());
            }
            let mut pairs = vec![
                ("classes", Cell::from(code.classes())),
                ("n", code.n().into()),
                ("d", code.d().into()),
                ("m", code.m().into()),
                ("orientation", orientation.name().into()),
            ];
            if *emit {
                let rows: Vec<String> = code
                    .matrix()
                    .iter_rows()
                    .map(|r| r.iter().map(|b| char::from(b'0' + b)).collect())
                    .collect();
                pairs.push(("matrix", Cell::Text(rows.join(" "))));
            }
            Table::single(pairs)
        }
        Command::Pmf { model: args, k } => {
            let model = build_model(args)?;
            let iid = args.ebar.filter(|_| args.model == ModelKind::Iid);
            let mut t = Table::new(vec!["k", "p"]);
            match (k, iid) {
                (Some(k), Some(e)) => {
                    t.push(vec![(*k).into(), binomial_pmf(model.n(), *k, e)?.into()])
                }
                (Some(k), None) => t.push(vec![(*k).into(), model.pmf(*k)?.into()]),
                (None, _) => {
                    let dist = match iid {
                        Some(e) => binomial_distribution(model.n(), e)?,
                        None => model.distribution(),
                    };
                    for (k, p) in dist.into_iter().enumerate() {
                        t.push(vec![k.into(), p.into()]);
                    }
                }
            }
            t
        }
        Command::Tail { model: args, m } => {
            let model = build_model(args)?;
            let tail = match args.model {
                ModelKind::Iid => tail_iid(model.n(), *m, args.ebar.unwrap_or_default())?,
                _ => model.tail(*m)?,
            };
            Table::single(vec![
                ("n", model.n().into()),
                ("m", (*m).into()),
                ("tail", tail.into()),
            ])
        }
        Command::Bounds { n, m, ebar, c, mu } => {
            let mut inputs = BoundInputs::new(*n, *m, *ebar);
            if let Some(c) = c {
                inputs = inputs.with_correlation(*c);
            }
            if let Some(mu) = mu {
                inputs = inputs.with_mu(*mu);
            }
            let r = inputs.evaluate()?;
            Table::single(vec![
                ("n", (*n).into()),
                ("m", (*m).into()),
                ("e_bar", (*ebar).into()),
                ("c", (*c).into()),
                ("gs", r.gs.into()),
                ("feller", r.feller.into()),
                ("chernoff_mu", r.chernoff_mu.into()),
                ("chernoff", r.chernoff_lambda.into()),
                ("kz", r.kz.into()),
                ("kz_formula", r.kz_formula.into()),
                (
                    "kz_note",
                    r.kz_gate
                        .map_or(Cell::Missing, |g| Cell::Text(g.to_string())),
                ),
                ("lambda", r.lambda.into()),
                ("omega", r.omega.into()),
            ])
        }
        Command::Bahadur { n, ebar } => {
            let r = bahadur_range(*n, *ebar)?;
            Table::single(vec![
                ("n", (*n).into()),
                ("e_bar", (*ebar).into()),
                ("lower", r.lower.into()),
                ("upper", r.upper.into()),
                ("gamma", r.gamma.into()),
            ])
        }
        Command::Simulate {
            model,
            m,
            trials,
            seed,
            workers,
            fast,
            decode,
            classes,
            true_class,
        } => {
            let model = build_model(model)?;
            let cfg = SimConfig::new(*trials, *seed)
                .with_workers(*workers)
                .with_determinism(if *fast {
                    Determinism::Fast
                } else {
                    Determinism::Strict
                });
            let code = build_code_matrix(classes.unwrap_or(model.n()), Orientation::default())?;
            let m = m.unwrap_or(code.m());
            let (result, exact) = if *decode {
                let tc = true_class.map_or(TrueClass::Uniform, TrueClass::Fixed);
                let r = mc_decode_error(&model, &code, tc, TiePolicy::LowestIndex, &cfg)?;
                (r, None)
            } else {
                (mc_threshold_error(&model, m, &cfg)?, Some(model.tail(m)?))
            };
            Table::single(vec![
                (
                    "mode",
                    if *decode { "full-decode" } else { "threshold" }.into(),
                ),
                ("n", model.n().into()),
                ("m", m.into()),
                ("trials", result.trials.into()),
                ("seed", (*seed).into()),
                ("errors", result.errors.into()),
                ("error_rate", result.error_rate.into()),
                ("std_err", result.std_err.into()),
                ("exact_tail", exact.into()),
            ])
        }
        Command::Analyze(args) => return analyze(args, format, warn),
        Command::Figures { figure } => match figure {
            Figure::Fig1 { ns, r, step } => {
                let points = fig1_curves(ns, *r, *step)?;
                let mut t = Table::new(vec!["n", "e_bar", "gs", "chernoff"]);
                for p in points {
                    t.push(vec![
                        p.n.into(),
                        p.e_bar.into(),
                        p.gs.into(),
                        p.chernoff.into(),
                    ]);
                }
                t
            }
            Figure::Scatter {
                fixture,
                summary,
                classes,
                model,
                n,
                step,
                upper,
            } => {
                let (folds, classes) = summaries_for(
                    fixture.as_deref(),
                    summary.as_deref(),
                    *classes,
                    model.as_deref(),
                )?;
                let (n, m) = width_and_m(classes, *n)?;
                let upper = upper.unwrap_or(m as f64 / n as f64);
                let points = scatter_points(&folds, n, m, *step, upper)?;
                let mut t = Table::new(vec!["series", "e_bar", "value"]);
                for p in points {
                    t.push(vec![p.series.into(), p.e_bar.into(), p.value.into()]);
                }
                t
            }
        },
    };
    Ok(table.render(format))
}

/// Parses `args` (including the program name), runs the command and writes
/// its output. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let output = match execute(&cli, stderr) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &output).map_err(|e| EcocError::io(path, e)),
        None => stdout
            .write_all(output.as_bytes())
            .map_err(|e| EcocError::io("<stdout>", e)),
    };
    match written {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}
