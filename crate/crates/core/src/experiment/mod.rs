//! Fold-level experiment data: ingestion, per-fold metrics, bound evaluation
//! and cross-fold aggregation.

mod aggregate;
mod figures;
mod fixtures;
mod predictions;
mod summary;

use serde::Serialize;

use crate::bounds::{BoundInputs, BoundReport};
use crate::code_matrix::{CodeMatrix, TiePolicy};
use crate::error::{EcocError, Result};

pub use aggregate::{
    aggregate, Aggregate, AggregateOptions, AggregateReport, Averaging, ColumnStats, FoldReport,
    KzMode,
};
pub use figures::{
    chernoff_gs_sign_changes, curves_to_csv, fig1_curves, scatter_points, scatter_to_csv,
    CurvePoint, ScatterPoint,
};
pub use fixtures::{Dataset, ReferenceRow, Reported, REFERENCE_RESULTS};
pub use predictions::{load_predictions, parse_predictions, predictions_to_csv, write_predictions};
pub use summary::{DecimalField, SummaryRow, SummaryTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LineEnding {
    Lf,
    CrLf,
}

impl LineEnding {
    /// Line ending of the first line, and whether the text ends with one.
    pub(crate) fn detect(text: &str) -> (Self, bool) {
        let ending = match text.find('\n') {
            Some(i) if i > 0 && text.as_bytes()[i - 1] == b'\r' => LineEnding::CrLf,
            _ => LineEnding::Lf,
        };
        (ending, text.ends_with('\n'))
    }

    pub(crate) fn as_str(self) -> &'static str {
        match self {
            LineEnding::Lf => "\n",
            LineEnding::CrLf => "\r\n",
        }
    }

    pub(crate) fn terminator(self) -> csv::Terminator {
        match self {
            LineEnding::Lf => csv::Terminator::Any(b'\n'),
            LineEnding::CrLf => csv::Terminator::CRLF,
        }
    }
}

/// Predicted bit vectors for one fold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldData {
    pub fold: u32,
    pub n: usize,
    /// `(true class, predicted bits)` per sample.
    pub records: Vec<(usize, Vec<u8>)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoldSummary {
    pub fold: u32,
    pub model: Option<String>,
    pub mean_bit_error: f64,
    /// Empty when the fold came from a summary row.
    pub per_classifier_errors: Vec<f64>,
    pub mean_correlation: f64,
    /// False when no classifier pair had both rates strictly inside (0, 1);
    /// `mean_correlation` is then 0.
    pub correlation_defined: bool,
    pub ecoc_error: f64,
    pub samples: usize,
    pub ties: usize,
    #[serde(skip)]
    pub source: Option<SummaryRow>,
}

/// Bit-error rates, mean pairwise correlation of the error indicators, and
/// decoding error for one fold.
pub fn analyze_fold(
    data: &FoldData,
    code: &CodeMatrix,
    tie_policy: TiePolicy,
) -> Result<FoldSummary> {
    if data.n != code.n() {
        return Err(EcocError::argument(format!(
            "fold has {} classifiers, code has {} columns",
            data.n,
            code.n()
        )));
    }
    if data.records.is_empty() {
        return Err(EcocError::argument(format!(
            "fold {} has no samples",
            data.fold
        )));
    }
    let n = data.n;
    let samples = data.records.len();
    let mut errors = vec![0u64; n];
    let mut joint = vec![0u64; n * n];
    let mut wrong = 0usize;
    let mut ties = 0usize;
    let mut indicator = vec![0u8; n];
    for (class, bits) in &data.records {
        if *class >= code.classes() {
            return Err(EcocError::argument(format!(
                "class {class} out of range for {} classes",
                code.classes()
            )));
        }
        if bits.len() != n {
            return Err(EcocError::argument(format!(
                "record has {} bits, expected {n}",
                bits.len()
            )));
        }
        for ((z, &b), &c) in indicator.iter_mut().zip(bits).zip(code.codeword(*class)) {
            *z = u8::from(b != c);
        }
        for i in 0..n {
            if indicator[i] == 1 {
                errors[i] += 1;
                for j in i + 1..n {
                    joint[i * n + j] += u64::from(indicator[j]);
                }
            }
        }
        let decoded = code.decode(bits, tie_policy)?;
        wrong += usize::from(decoded.class != *class);
        ties += usize::from(decoded.tie);
    }

    let total = samples as f64;
    let rates: Vec<f64> = errors.iter().map(|&e| e as f64 / total).collect();
    let mut sum = 0.0;
    let mut pairs = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (rates[i], rates[j]);
            if a <= 0.0 || a >= 1.0 || b <= 0.0 || b >= 1.0 {
                continue;
            }
            let f = joint[i * n + j] as f64 / total;
            let c = (f - a * b) / (a * (1.0 - a) * b * (1.0 - b)).sqrt();
            sum += c.clamp(-1.0, 1.0);
            pairs += 1;
        }
    }
    Ok(FoldSummary {
        fold: data.fold,
        model: None,
        mean_bit_error: rates.iter().sum::<f64>() / n as f64,
        per_classifier_errors: rates,
        mean_correlation: if pairs > 0 { sum / pairs as f64 } else { 0.0 },
        correlation_defined: pairs > 0,
        ecoc_error: wrong as f64 / total,
        samples,
        ties,
        source: None,
    })
}

/// Bounds for one fold with `n` and `m` taken from the code.
pub fn bound_report(summary: &FoldSummary, code: &CodeMatrix) -> Result<BoundReport> {
    bound_report_at(summary, code.n(), code.m())
}

/// Bounds for one fold under an explicit `(n, m)`.
pub fn bound_report_at(summary: &FoldSummary, n: usize, m: usize) -> Result<BoundReport> {
    BoundInputs::new(n, m, summary.mean_bit_error)
        .with_correlation(summary.mean_correlation)
        .evaluate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::KzGate;
    use crate::code_matrix::{build_code_matrix, Orientation};
    use crate::prob::{DependenceModel, ErrorProfile};
    use crate::simulator::OutcomeSampler;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn code10() -> CodeMatrix {
        build_code_matrix(10, Orientation::default()).unwrap()
    }

    fn synthesize(
        model: &DependenceModel,
        code: &CodeMatrix,
        samples: usize,
        seed: u64,
    ) -> FoldData {
        let sampler = OutcomeSampler::new(model);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut flips = vec![0u8; code.n()];
        let records = (0..samples)
            .map(|_| {
                let class = rng.random_range(0..code.classes());
                sampler.sample_into(&mut rng, &mut flips);
                let bits = code
                    .codeword(class)
                    .iter()
                    .zip(&flips)
                    .map(|(a, b)| a ^ b)
                    .collect();
                (class, bits)
            })
            .collect();
        FoldData {
            fold: 1,
            n: code.n(),
            records,
        }
    }

    #[test]
    fn perfect_predictions() {
        let code = code10();
        let data = FoldData {
            fold: 2,
            n: 10,
            records: (0..10).map(|c| (c, code.codeword(c).to_vec())).collect(),
        };
        let s = analyze_fold(&data, &code, TiePolicy::LowestIndex).unwrap();
        assert_eq!((s.mean_bit_error, s.ecoc_error), (0.0, 0.0));
        assert!(!s.correlation_defined);
        assert_eq!(s.mean_correlation, 0.0);
    }

    #[test]
    fn identical_error_columns_are_perfectly_correlated() {
        let code = build_code_matrix(4, Orientation::default()).unwrap();
        let n = code.n();
        // Classifiers 0 and 1 err together on alternate samples; the rest never err.
        let records = (0..8)
            .map(|s| {
                let class = s % 4;
                let mut bits = code.codeword(class).to_vec();
                if s % 2 == 0 {
                    bits[0] ^= 1;
                    bits[1] ^= 1;
                }
                (class, bits)
            })
            .collect();
        let data = FoldData {
            fold: 0,
            n,
            records,
        };
        let s = analyze_fold(&data, &code, TiePolicy::LowestIndex).unwrap();
        assert!(s.correlation_defined);
        assert!((s.mean_correlation - 1.0).abs() < 1e-12);
        assert_eq!(s.per_classifier_errors[0], 0.5);
    }

    #[test]
    fn recovers_generating_rate_and_zero_correlation() {
        let code = code10();
        let model = DependenceModel::Independent(ErrorProfile::iid(10, 0.1).unwrap());
        let data = synthesize(&model, &code, 10_000, 17);
        let s = analyze_fold(&data, &code, TiePolicy::LowestIndex).unwrap();
        let se_rate = (0.1f64 * 0.9 / (10.0 * 10_000.0)).sqrt();
        assert!(
            (s.mean_bit_error - 0.1).abs() < 3.0 * se_rate,
            "{}",
            s.mean_bit_error
        );
        // Each pair estimate has sd about 1/sqrt(samples); the mean over 45 pairs is tighter.
        assert!(
            s.mean_correlation.abs() < 3.0 / (10_000f64).sqrt(),
            "{}",
            s.mean_correlation
        );
        let mean: f64 = s.per_classifier_errors.iter().sum::<f64>() / 10.0;
        assert!((mean - s.mean_bit_error).abs() < 1e-15);
    }

    #[test]
    fn rejects_mismatch_and_empty() {
        let code = code10();
        let empty = FoldData {
            fold: 0,
            n: 10,
            records: vec![],
        };
        assert!(analyze_fold(&empty, &code, TiePolicy::LowestIndex).is_err());
        let narrow = FoldData {
            fold: 0,
            n: 3,
            records: vec![(0, vec![0, 0, 0])],
        };
        assert!(analyze_fold(&narrow, &code, TiePolicy::LowestIndex).is_err());
    }

    #[test]
    fn pendigits_first_fold_bounds() {
        let row = SummaryTable::parse(
            "fold,mean_bit_error,mean_correlation,ecoc_error\n1,0.0323,0.0154,0.0328\n",
        )
        .unwrap()
        .rows
        .remove(0);
        let report = bound_report(&row.to_fold_summary(), &code10()).unwrap();
        assert!((report.gs - 0.1292).abs() < 1e-12);
        assert!(report.kz.is_some());

        let mut negative = row.to_fold_summary();
        negative.mean_correlation = -0.0252;
        let report = bound_report(&negative, &code10()).unwrap();
        assert_eq!(report.kz, None);
        assert_eq!(report.kz_gate, Some(KzGate::NegativeCorrelation));
        assert!(report.kz_formula.is_some());
    }
}
