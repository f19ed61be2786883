use serde::Serialize;

use crate::bounds::{BoundInputs, BoundReport, KzGate};
use crate::error::{EcocError, Result};

use super::{bound_report_at, FoldSummary};

/// How fold-level inputs become aggregate bound columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Averaging {
    /// Bound each fold, then average the bounds.
    #[default]
    FoldWise,
    /// Average ē and c̄ over folds, then bound once. Bound columns carry a
    /// standard deviation of 0.
    PooledMean,
}

/// Which KZ value enters the aggregate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KzMode {
    /// Only folds meeting the KZ preconditions contribute.
    #[default]
    Gated,
    /// Every fold contributes the raw expression, whatever the sign of c̄ or
    /// the size of ē.
    Formula,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct AggregateOptions {
    pub averaging: Averaging,
    pub kz: KzMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ColumnStats {
    pub mean: f64,
    /// Sample standard deviation (divisor `count - 1`, 0 for one value).
    pub std: f64,
    /// Population standard deviation (divisor `count`).
    pub population_std: f64,
    pub count: usize,
}

impl ColumnStats {
    pub fn from_values(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let count = values.len();
        let k = count as f64;
        let rough = values.iter().sum::<f64>() / k;
        let mean = rough + values.iter().map(|v| v - rough).sum::<f64>() / k;
        let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
        Some(Self {
            mean,
            std: if count > 1 {
                (ss / (k - 1.0)).sqrt()
            } else {
                0.0
            },
            population_std: (ss / k).sqrt(),
            count,
        })
    }

    fn single(value: f64, count: usize) -> Self {
        Self {
            mean: value,
            std: 0.0,
            population_std: 0.0,
            count,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoldReport {
    pub summary: FoldSummary,
    pub bounds: BoundReport,
    /// KZ value under the chosen [`KzMode`]; `None` when gated out.
    pub kz: Option<f64>,
}

impl FoldReport {
    pub fn gs(&self) -> f64 {
        self.bounds.gs
    }

    pub fn chernoff(&self) -> f64 {
        self.bounds.chernoff_lambda
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Aggregate {
    pub experimental: ColumnStats,
    pub mean_bit_error: ColumnStats,
    pub mean_correlation: ColumnStats,
    pub gs: ColumnStats,
    pub chernoff: ColumnStats,
    pub kz: Option<ColumnStats>,
    /// Folds left out of the KZ column by the gate.
    pub kz_excluded: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateReport {
    pub n: usize,
    pub m: usize,
    pub options: AggregateOptions,
    pub folds: Vec<FoldReport>,
    pub aggregate: Aggregate,
}

fn kz_value(bounds: &BoundReport, mode: KzMode) -> Option<f64> {
    match mode {
        KzMode::Gated => bounds.kz,
        KzMode::Formula => bounds.kz_formula,
    }
}

/// Bounds every fold under `(n, m)` and summarizes each column across folds.
/// Folds are ordered by id (then model) before anything is summed.
pub fn aggregate(
    summaries: &[FoldSummary],
    n: usize,
    m: usize,
    options: AggregateOptions,
) -> Result<AggregateReport> {
    if summaries.is_empty() {
        return Err(EcocError::argument("aggregate needs at least one fold"));
    }
    let mut sorted = summaries.to_vec();
    sorted.sort_by(|a, b| (a.fold, &a.model).cmp(&(b.fold, &b.model)));

    let folds = sorted
        .into_iter()
        .map(|summary| {
            let bounds = bound_report_at(&summary, n, m)?;
            let kz = kz_value(&bounds, options.kz);
            Ok(FoldReport {
                summary,
                bounds,
                kz,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let column = |f: &dyn Fn(&FoldReport) -> f64| {
        let values: Vec<f64> = folds.iter().map(f).collect();
        ColumnStats::from_values(&values).expect("at least one fold")
    };
    let experimental = column(&|r| r.summary.ecoc_error);
    let mean_bit_error = column(&|r| r.summary.mean_bit_error);
    let mean_correlation = column(&|r| r.summary.mean_correlation);
    let kz_values: Vec<f64> = folds.iter().filter_map(|r| r.kz).collect();
    let kz_excluded = folds.len() - kz_values.len();

    let aggregate = match options.averaging {
        Averaging::FoldWise => Aggregate {
            experimental,
            mean_bit_error,
            mean_correlation,
            gs: column(&FoldReport::gs),
            chernoff: column(&FoldReport::chernoff),
            kz: ColumnStats::from_values(&kz_values),
            kz_excluded,
        },
        Averaging::PooledMean => {
            let pooled = BoundInputs::new(n, m, mean_bit_error.mean)
                .with_correlation(mean_correlation.mean)
                .evaluate()?;
            let count = folds.len();
            let kz = kz_value(&pooled, options.kz);
            Aggregate {
                experimental,
                mean_bit_error,
                mean_correlation,
                gs: ColumnStats::single(pooled.gs, count),
                chernoff: ColumnStats::single(pooled.chernoff_lambda, count),
                kz: kz.map(|v| ColumnStats::single(v, count)),
                kz_excluded: if kz.is_some() { 0 } else { count },
            }
        }
    };
    Ok(AggregateReport {
        n,
        m,
        options,
        folds,
        aggregate,
    })
}

const REPORT_HEADER: [&str; 7] = [
    "fold",
    "mean_bit_error",
    "mean_correlation",
    "experimental",
    "gs",
    "chernoff",
    "kz",
];

fn num(v: f64) -> String {
    v.to_string()
}

impl AggregateReport {
    /// Per-fold rows followed by `mean`, `std` and `population_std` rows.
    /// Pass-through columns keep the source spelling when the fold came from
    /// a summary file.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let mut rows: Vec<[String; 7]> = Vec::new();
        for r in &self.folds {
            let s = &r.summary;
            let src = s.source.as_ref();
            rows.push([
                src.map_or_else(|| s.fold.to_string(), |x| x.fold_text.clone()),
                src.map_or_else(|| num(s.mean_bit_error), |x| x.mean_bit_error.text.clone()),
                src.map_or_else(
                    || num(s.mean_correlation),
                    |x| x.mean_correlation.text.clone(),
                ),
                src.map_or_else(|| num(s.ecoc_error), |x| x.ecoc_error.text.clone()),
                num(r.gs()),
                num(r.chernoff()),
                r.kz.map(num).unwrap_or_default(),
            ]);
        }
        let a = &self.aggregate;
        for (label, pick) in [
            (
                "mean",
                (|c: &ColumnStats| c.mean) as fn(&ColumnStats) -> f64,
            ),
            ("std", |c: &ColumnStats| c.std),
            ("population_std", |c: &ColumnStats| c.population_std),
        ] {
            rows.push([
                label.to_string(),
                num(pick(&a.mean_bit_error)),
                num(pick(&a.mean_correlation)),
                num(pick(&a.experimental)),
                num(pick(&a.gs)),
                num(pick(&a.chernoff)),
                a.kz.as_ref().map(|c| num(pick(c))).unwrap_or_default(),
            ]);
        }
        w.write_record(REPORT_HEADER).expect("in-memory write");
        for row in rows {
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("UTF-8 fields")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Reason the KZ column is missing for a fold, if it is.
    pub fn kz_gate(&self, index: usize) -> Option<KzGate> {
        let fold = &self.folds[index];
        match self.options.kz {
            KzMode::Gated => fold.bounds.kz_gate,
            KzMode::Formula => None,
        }
    }
}
