//! Plot data: bound curves over a grid of mean bit error rates and fold scatter points.

use serde::Serialize;

use crate::bounds::{chernoff_lambda, gs_bound_from_mean, kz_formula};
use crate::error::{EcocError, Result};

use super::FoldSummary;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub n: usize,
    pub e_bar: f64,
    pub gs: f64,
    pub chernoff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterPoint {
    pub series: String,
    pub e_bar: f64,
    pub value: f64,
}

/// Grid `step, 2·step, …` strictly below `upper`.
fn grid(step: f64, upper: f64) -> Result<Vec<f64>> {
    if !(step.is_finite() && step > 0.0 && upper.is_finite() && upper > step) {
        return Err(EcocError::argument(format!(
            "grid needs 0 < step < upper, got step {step}, upper {upper}"
        )));
    }
    let count = ((upper / step) - 1e-9).floor() as usize;
    Ok((1..=count)
        .map(|i| i as f64 * step)
        .filter(|&e| e < upper)
        .collect())
}

/// GS and Chernoff (`λ(r, ē)^n`) curves for each `n` at a fixed ratio `r`,
/// on the grid `ē = step, 2·step, …` below `r`.
pub fn fig1_curves(ns: &[usize], r: f64, step: f64) -> Result<Vec<CurvePoint>> {
    let es = grid(step, r)?;
    let mut out = Vec::with_capacity(ns.len() * es.len());
    for &n in ns {
        if n == 0 {
            return Err(EcocError::argument("n must be positive"));
        }
        for &e in &es {
            out.push(CurvePoint {
                n,
                e_bar: e,
                gs: gs_bound_from_mean(e),
                chernoff: chernoff_lambda(r, e)?.powi(n as i32),
            });
        }
    }
    Ok(out)
}

/// Sign changes of `chernoff - gs` along the curve for `n`, skipping exact ties.
pub fn chernoff_gs_sign_changes(points: &[CurvePoint], n: usize) -> usize {
    let signs: Vec<bool> = points
        .iter()
        .filter(|p| p.n == n && p.chernoff != p.gs)
        .map(|p| p.chernoff > p.gs)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

pub fn curves_to_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from("n,e_bar,gs,chernoff\n");
    for p in points {
        out.push_str(&format!("{},{},{},{}\n", p.n, p.e_bar, p.gs, p.chernoff));
    }
    out
}

/// Bound curves for one experiment plus one `experimental` point per fold.
///
/// Curves span `ē = step, …` below `upper`; the KZ curve uses the mean fold
/// correlation and the raw KZ expression.
pub fn scatter_points(
    folds: &[FoldSummary],
    n: usize,
    m: usize,
    step: f64,
    upper: f64,
) -> Result<Vec<ScatterPoint>> {
    if folds.is_empty() {
        return Err(EcocError::argument("scatter needs at least one fold"));
    }
    let r = m as f64 / n as f64;
    let c = folds.iter().map(|f| f.mean_correlation).sum::<f64>() / folds.len() as f64;
    let es = grid(step, upper)?;
    let point = |series: &str, e_bar: f64, value: f64| ScatterPoint {
        series: series.to_string(),
        e_bar,
        value,
    };
    let mut out = Vec::new();
    for &e in &es {
        out.push(point("gs", e, gs_bound_from_mean(e)));
    }
    for &e in &es {
        out.push(point("chernoff", e, chernoff_lambda(r, e)?.powi(n as i32)));
    }
    for &e in &es {
        out.push(point("kz", e, kz_formula(n, m, e, c)?));
    }
    for f in folds {
        out.push(point("experimental", f.mean_bit_error, f.ecoc_error));
    }
    Ok(out)
}

pub fn scatter_to_csv(points: &[ScatterPoint]) -> String {
    let mut out = String::from("series,e_bar,value\n");
    for p in points {
        out.push_str(&format!("{},{},{}\n", p.series, p.e_bar, p.value));
    }
    out
}
