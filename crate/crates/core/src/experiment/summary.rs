//! Summary CSV: one row per fold (and optionally per model), header
//! `fold,mean_bit_error,mean_correlation,ecoc_error` plus optional `model`,
//! `mean_bit_error_sd` and `mean_correlation_sd` columns in any order.

use std::fmt;
use std::path::Path;

use serde::{Serialize, Serializer};

use crate::error::{EcocError, Result};

use super::{FoldSummary, LineEnding};

/// A decimal read from text, keeping the exact spelling for re-emission.
#[derive(Debug, Clone, PartialEq)]
pub struct DecimalField {
    pub value: f64,
    pub text: String,
}

impl DecimalField {
    pub fn parse(text: &str) -> Option<Self> {
        let value: f64 = text.trim().parse().ok()?;
        value.is_finite().then(|| Self {
            value,
            text: text.to_string(),
        })
    }

    pub fn from_value(value: f64) -> Self {
        Self {
            value,
            text: value.to_string(),
        }
    }
}

impl fmt::Display for DecimalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Serialize for DecimalField {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Column {
    Fold,
    Model,
    MeanBitError,
    MeanBitErrorSd,
    MeanCorrelation,
    MeanCorrelationSd,
    EcocError,
}

impl Column {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "fold" => Column::Fold,
            "model" => Column::Model,
            "mean_bit_error" => Column::MeanBitError,
            "mean_bit_error_sd" => Column::MeanBitErrorSd,
            "mean_correlation" => Column::MeanCorrelation,
            "mean_correlation_sd" => Column::MeanCorrelationSd,
            "ecoc_error" => Column::EcocError,
            _ => return None,
        })
    }
}

const REQUIRED: [(Column, &str); 4] = [
    (Column::Fold, "fold"),
    (Column::MeanBitError, "mean_bit_error"),
    (Column::MeanCorrelation, "mean_correlation"),
    (Column::EcocError, "ecoc_error"),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub fold: u32,
    /// Source text of the fold id.
    #[serde(skip)]
    pub fold_text: String,
    pub model: Option<String>,
    pub mean_bit_error: DecimalField,
    pub mean_bit_error_sd: Option<DecimalField>,
    pub mean_correlation: DecimalField,
    pub mean_correlation_sd: Option<DecimalField>,
    pub ecoc_error: DecimalField,
}

impl SummaryRow {
    pub fn to_fold_summary(&self) -> FoldSummary {
        FoldSummary {
            fold: self.fold,
            model: self.model.clone(),
            mean_bit_error: self.mean_bit_error.value,
            per_classifier_errors: Vec::new(),
            mean_correlation: self.mean_correlation.value,
            correlation_defined: true,
            ecoc_error: self.ecoc_error.value,
            samples: 0,
            ties: 0,
            source: Some(self.clone()),
        }
    }

    fn field(&self, column: Column) -> String {
        match column {
            Column::Fold => self.fold_text.clone(),
            Column::Model => self.model.clone().unwrap_or_default(),
            Column::MeanBitError => self.mean_bit_error.text.clone(),
            Column::MeanBitErrorSd => opt_text(&self.mean_bit_error_sd),
            Column::MeanCorrelation => self.mean_correlation.text.clone(),
            Column::MeanCorrelationSd => opt_text(&self.mean_correlation_sd),
            Column::EcocError => self.ecoc_error.text.clone(),
        }
    }
}

fn opt_text(field: &Option<DecimalField>) -> String {
    field.as_ref().map(|f| f.text.clone()).unwrap_or_default()
}

/// Parsed summary file. Column order and line endings are kept so that
/// [`SummaryTable::to_csv`] reproduces the input byte for byte.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryTable {
    header: Vec<String>,
    columns: Vec<Column>,
    line_ending: LineEnding,
    trailing_newline: bool,
    pub rows: Vec<SummaryRow>,
}

impl SummaryTable {
    /// Builds a table with the canonical column set for the given rows.
    pub fn new(rows: Vec<SummaryRow>) -> Self {
        let mut columns = vec![Column::Fold];
        if rows.iter().any(|r| r.model.is_some()) {
            columns.push(Column::Model);
        }
        columns.extend([
            Column::MeanBitError,
            Column::MeanCorrelation,
            Column::EcocError,
        ]);
        if rows.iter().any(|r| r.mean_bit_error_sd.is_some()) {
            columns.push(Column::MeanBitErrorSd);
        }
        if rows.iter().any(|r| r.mean_correlation_sd.is_some()) {
            columns.push(Column::MeanCorrelationSd);
        }
        let header = columns
            .iter()
            .map(|&c| {
                match c {
                    Column::Fold => "fold",
                    Column::Model => "model",
                    Column::MeanBitError => "mean_bit_error",
                    Column::MeanBitErrorSd => "mean_bit_error_sd",
                    Column::MeanCorrelation => "mean_correlation",
                    Column::MeanCorrelationSd => "mean_correlation_sd",
                    Column::EcocError => "ecoc_error",
                }
                .to_string()
            })
            .collect();
        Self {
            header,
            columns,
            line_ending: LineEnding::Lf,
            trailing_newline: true,
            rows,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (line_ending, trailing_newline) = LineEnding::detect(text);
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::None)
            .from_reader(text.as_bytes());
        let header: Vec<String> = reader
            .headers()
            .map_err(|e| EcocError::parse(1, e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut columns = Vec::with_capacity(header.len());
        for name in &header {
            let column = Column::from_name(name.trim())
                .ok_or_else(|| EcocError::parse(1, format!("unknown column `{name}`")))?;
            if columns.contains(&column) {
                return Err(EcocError::parse(1, format!("duplicate column `{name}`")));
            }
            columns.push(column);
        }
        for (column, name) in REQUIRED {
            if !columns.contains(&column) {
                return Err(EcocError::parse(1, format!("missing column `{name}`")));
            }
        }

        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line());
                EcocError::parse(line, e.to_string())
            })?;
            let line = record.position().map_or(0, |p| p.line());
            rows.push(parse_row(&record, &columns, line)?);
        }
        Ok(Self {
            header,
            columns,
            line_ending,
            trailing_newline,
            rows,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| EcocError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new()
            .terminator(self.line_ending.terminator())
            .from_writer(Vec::new());
        let written = writer.write_record(&self.header).and_then(|_| {
            self.rows
                .iter()
                .try_for_each(|row| writer.write_record(self.columns.iter().map(|&c| row.field(c))))
        });
        written.expect("writing to memory cannot fail");
        let bytes = writer.into_inner().expect("writing to memory cannot fail");
        let mut out = String::from_utf8(bytes).expect("fields are UTF-8");
        if !self.trailing_newline {
            let cut = out.len() - self.line_ending.as_str().len();
            out.truncate(cut);
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|e| EcocError::io(path, e))
    }

    /// Distinct model labels in first-seen order.
    pub fn models(&self) -> Vec<String> {
        let mut seen: Vec<String> = Vec::new();
        for model in self.rows.iter().filter_map(|r| r.model.as_ref()) {
            if !seen.contains(model) {
                seen.push(model.clone());
            }
        }
        seen
    }

    /// Fold summaries, restricted to one model when `model` is given.
    pub fn fold_summaries(&self, model: Option<&str>) -> Result<Vec<FoldSummary>> {
        let folds: Vec<FoldSummary> = self
            .rows
            .iter()
            .filter(|r| model.is_none() || r.model.as_deref() == model)
            .map(SummaryRow::to_fold_summary)
            .collect();
        if folds.is_empty() {
            return Err(EcocError::argument(match model {
                Some(m) => format!("no rows for model `{m}`"),
                None => "summary has no rows".to_string(),
            }));
        }
        Ok(folds)
    }
}

fn parse_row(record: &csv::StringRecord, columns: &[Column], line: u64) -> Result<SummaryRow> {
    if record.len() != columns.len() {
        return Err(EcocError::parse(
            line,
            format!("expected {} fields, found {}", columns.len(), record.len()),
        ));
    }
    let mut fold = None;
    let mut model = None;
    let mut decimals: [Option<DecimalField>; 5] = Default::default();
    for (&column, text) in columns.iter().zip(record.iter()) {
        let decimal = |name: &str| {
            DecimalField::parse(text)
                .ok_or_else(|| EcocError::parse(line, format!("{name}: `{text}` is not a number")))
        };
        match column {
            Column::Fold => {
                let id: u32 = text.trim().parse().map_err(|_| {
                    EcocError::parse(line, format!("fold: `{text}` is not a fold id"))
                })?;
                fold = Some((id, text.to_string()));
            }
            Column::Model => model = Some(text.to_string()),
            Column::MeanBitError => decimals[0] = Some(decimal("mean_bit_error")?),
            Column::MeanBitErrorSd if text.is_empty() => {}
            Column::MeanBitErrorSd => decimals[1] = Some(decimal("mean_bit_error_sd")?),
            Column::MeanCorrelation => decimals[2] = Some(decimal("mean_correlation")?),
            Column::MeanCorrelationSd if text.is_empty() => {}
            Column::MeanCorrelationSd => decimals[3] = Some(decimal("mean_correlation_sd")?),
            Column::EcocError => decimals[4] = Some(decimal("ecoc_error")?),
        }
    }
    let [mbe, mbe_sd, mc, mc_sd, ecoc] = decimals;
    let (mbe, mc, ecoc) = (mbe.unwrap(), mc.unwrap(), ecoc.unwrap());
    let unit = |name: &str, f: &DecimalField, lo: f64| {
        if (lo..=1.0).contains(&f.value) {
            Ok(())
        } else {
            Err(EcocError::parse(
                line,
                format!("{name} {} is outside [{lo}, 1]", f.text),
            ))
        }
    };
    unit("mean_bit_error", &mbe, 0.0)?;
    unit("mean_correlation", &mc, -1.0)?;
    unit("ecoc_error", &ecoc, 0.0)?;
    let (fold, fold_text) = fold.unwrap();
    Ok(SummaryRow {
        fold,
        fold_text,
        model,
        mean_bit_error: mbe,
        mean_bit_error_sd: mbe_sd,
        mean_correlation: mc,
        mean_correlation_sd: mc_sd,
        ecoc_error: ecoc,
    })
}
