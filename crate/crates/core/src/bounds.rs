//! Analytic upper bounds on the ECOC error rate.
//!
//! Reported values are never clipped to `[0, 1]`: the 4ē bound in particular
//! routinely exceeds 1 and dominance checks need the raw value.

use std::fmt;

use serde::Serialize;

use crate::error::{EcocError, Result};
use crate::prob::{bahadur_range, ErrorProfile};

/// `4 · (e_1 + … + e_n) / n`.
pub fn gs_bound(profile: &ErrorProfile) -> f64 {
    gs_bound_from_mean(profile.mean())
}

pub fn gs_bound_from_mean(e_bar: f64) -> f64 {
    4.0 * e_bar
}

fn check_rate(e: f64) -> Result<()> {
    if e.is_finite() && (0.0..=1.0).contains(&e) {
        Ok(())
    } else {
        Err(EcocError::domain(format!("rate {e} is not in [0, 1]")))
    }
}

fn check_ratio(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(EcocError::domain(format!("ratio r = {r} is not in (0, 1)")))
    }
}

/// Feller's rational bound `m(1-e) / (m - ne)²`, valid for `m > ne`.
pub fn feller_bound(n: usize, m: usize, e: f64) -> Result<f64> {
    check_rate(e)?;
    let (nf, mf) = (n as f64, m as f64);
    if mf <= nf * e {
        return Err(EcocError::domain(format!(
            "Feller bound needs m > n·e, got m = {m}, n·e = {}",
            nf * e
        )));
    }
    Ok(mf * (1.0 - e) / (mf - nf * e).powi(2))
}

/// Chernoff bound in the μ-form, `e^{m-μ} (μ/m)^m` for `0 < μ < m`.
pub fn chernoff_mu_bound(mu: f64, m: usize) -> Result<f64> {
    let mf = m as f64;
    if !(mu.is_finite() && mu > 0.0 && mu < mf) {
        return Err(EcocError::domain(format!(
            "Chernoff bound needs 0 < μ < m, got μ = {mu}, m = {m}"
        )));
    }
    Ok((mf - mu + mf * (mu / mf).ln()).exp())
}

/// Per-classifier decay factor `λ = e^{r-ē} / (r/ē)^r`; the bound is `λ^n`.
///
/// `ē = 0` gives 0 (the limit), `ē = r` gives exactly 1.
pub fn chernoff_lambda(r: f64, e: f64) -> Result<f64> {
    check_ratio(r)?;
    check_rate(e)?;
    if e == 0.0 {
        return Ok(0.0);
    }
    if e == r {
        return Ok(1.0);
    }
    Ok((r - e + r * (e / r).ln()).exp())
}

/// `ω = (ē/r)^r ((1-ē)/(1-r))^{1-r}`, the decay factor of the KZ correction term.
pub fn omega(r: f64, e: f64) -> Result<f64> {
    check_ratio(r)?;
    check_rate(e)?;
    if e == 0.0 || e == 1.0 {
        return Ok(0.0);
    }
    if e == r {
        return Ok(1.0);
    }
    Ok((r * (e / r).ln() + (1.0 - r) * ((1.0 - e) / (1.0 - r)).ln()).exp())
}

/// `λ^n` with `r = m/n`.
pub fn chernoff_bound(n: usize, m: usize, e: f64) -> Result<f64> {
    check_counts(n, m)?;
    Ok(chernoff_lambda(m as f64 / n as f64, e)?.powi(n as i32))
}

/// Bound for the pair-correlated tail: `λ^{n-2}` with `r = (m-2)/(n-2)`.
pub fn pair_lambda_bound(n: usize, m: usize, e: f64) -> Result<f64> {
    if n < 3 || m < 3 || m >= n {
        return Err(EcocError::domain(format!(
            "pair bound needs 3 ≤ m < n, got n = {n}, m = {m}"
        )));
    }
    let r = (m - 2) as f64 / (n - 2) as f64;
    Ok(chernoff_lambda(r, e)?.powi((n - 2) as i32))
}

fn check_counts(n: usize, m: usize) -> Result<()> {
    if m == 0 || m >= n {
        return Err(EcocError::domain(format!(
            "need 1 ≤ m < n, got n = {n}, m = {m}"
        )));
    }
    Ok(())
}

/// Why the KZ bound does not apply to a parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KzGate {
    NoCorrelation,
    NegativeCorrelation,
    RateAboveThreshold,
    OutsideBahadurRange,
}

impl fmt::Display for KzGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KzGate::NoCorrelation => "no correlation supplied",
            KzGate::NegativeCorrelation => "correlation is negative",
            KzGate::RateAboveThreshold => "mean bit error exceeds (m-1)/(n-1)",
            KzGate::OutsideBahadurRange => "correlation outside the Bahadur range",
        })
    }
}

/// Checks the KZ preconditions, returning the first one that fails.
pub fn kz_gate(n: usize, m: usize, e: f64, c: f64) -> Result<Option<KzGate>> {
    check_counts(n, m)?;
    check_rate(e)?;
    if !c.is_finite() {
        return Err(EcocError::domain(format!("correlation {c} is not finite")));
    }
    if c < 0.0 {
        return Ok(Some(KzGate::NegativeCorrelation));
    }
    if e > (m - 1) as f64 / (n - 1) as f64 {
        return Ok(Some(KzGate::RateAboveThreshold));
    }
    if c > 0.0 {
        let inside = bahadur_range(n, e).map(|r| r.contains(c)).unwrap_or(false);
        if !inside {
            return Ok(Some(KzGate::OutsideBahadurRange));
        }
    }
    Ok(None)
}

/// The KZ expression `λ^n + c/2 · n(n-1) · ((m-1)/(n-1) - ē) · ω^n`, with no
/// precondition checks beyond well-formed inputs.
pub fn kz_formula(n: usize, m: usize, e: f64, c: f64) -> Result<f64> {
    check_counts(n, m)?;
    let r = m as f64 / n as f64;
    let nf = n as f64;
    let lambda_n = chernoff_lambda(r, e)?.powi(n as i32);
    let omega_n = omega(r, e)?.powi(n as i32);
    let shift = (m - 1) as f64 / (nf - 1.0) - e;
    Ok(lambda_n + 0.5 * c * nf * (nf - 1.0) * shift * omega_n)
}

/// KZ bound for exchangeable classifiers with non-negative correlation `c`
/// inside the Bahadur range and `ē ≤ (m-1)/(n-1)`.
pub fn kz_bound(n: usize, m: usize, e: f64, c: f64) -> Result<f64> {
    if let Some(gate) = kz_gate(n, m, e, c)? {
        return Err(EcocError::domain(format!("KZ bound inapplicable: {gate}")));
    }
    kz_formula(n, m, e, c).map(|v| v.max(0.0))
}

/// KZ bound with the correlation term scaled by `r/ē`.
///
/// Bounding `P(n-1, m-1)` by `ω^n` alone is not enough: the binomial term is
/// only controlled up to a factor `r/ē`, and the unscaled [`kz_bound`] is
/// exceeded by the exact exchangeable tail at small `ē` (for example
/// `n = 8, m = 2`). This variant keeps that factor and holds under the same
/// preconditions.
pub fn kz_bound_corrected(n: usize, m: usize, e: f64, c: f64) -> Result<f64> {
    if let Some(gate) = kz_gate(n, m, e, c)? {
        return Err(EcocError::domain(format!("KZ bound inapplicable: {gate}")));
    }
    let r = m as f64 / n as f64;
    let nf = n as f64;
    let lambda_n = chernoff_lambda(r, e)?.powi(n as i32);
    let omega_n = omega(r, e)?.powi(n as i32);
    let shift = (m - 1) as f64 / (nf - 1.0) - e;
    Ok((lambda_n + 0.5 * c * nf * (nf - 1.0) * shift * (r / e) * omega_n).max(0.0))
}

/// Parameters for a full [`BoundReport`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundInputs {
    pub n: usize,
    pub m: usize,
    pub e_bar: f64,
    pub c: Option<f64>,
    /// μ = Σ e_i; defaults to `n · ē`.
    pub mu: Option<f64>,
}

impl BoundInputs {
    pub fn new(n: usize, m: usize, e_bar: f64) -> Self {
        Self {
            n,
            m,
            e_bar,
            c: None,
            mu: None,
        }
    }

    pub fn with_correlation(mut self, c: f64) -> Self {
        self.c = Some(c);
        self
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = Some(mu);
        self
    }

    pub fn ratio(&self) -> f64 {
        self.m as f64 / self.n as f64
    }

    pub fn evaluate(&self) -> Result<BoundReport> {
        check_counts(self.n, self.m)?;
        check_rate(self.e_bar)?;
        let r = self.ratio();
        let lambda = chernoff_lambda(r, self.e_bar)?;
        let omega = omega(r, self.e_bar)?;
        let mu = self.mu.unwrap_or(self.n as f64 * self.e_bar);
        let (kz, kz_gate, kz_formula) = match self.c {
            None => (None, Some(KzGate::NoCorrelation), None),
            Some(c) => {
                let raw = kz_formula(self.n, self.m, self.e_bar, c)?;
                match kz_gate(self.n, self.m, self.e_bar, c)? {
                    None => (Some(raw.max(0.0)), None, Some(raw)),
                    gate => (None, gate, Some(raw)),
                }
            }
        };
        Ok(BoundReport {
            gs: gs_bound_from_mean(self.e_bar),
            feller: feller_bound(self.n, self.m, self.e_bar).ok(),
            chernoff_mu: chernoff_mu_bound(mu, self.m).ok(),
            chernoff_lambda: lambda.powi(self.n as i32),
            kz,
            kz_gate,
            kz_formula,
            lambda,
            omega,
        })
    }
}

/// All bounds for one parameter set. Inapplicable bounds are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub gs: f64,
    pub feller: Option<f64>,
    pub chernoff_mu: Option<f64>,
    /// `λ^n`.
    pub chernoff_lambda: f64,
    pub kz: Option<f64>,
    pub kz_gate: Option<KzGate>,
    /// The KZ expression evaluated regardless of its preconditions.
    pub kz_formula: Option<f64>,
    pub lambda: f64,
    pub omega: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn gs_examples() {
        assert!(close(
            gs_bound(&ErrorProfile::iid(7, 0.1).unwrap()),
            0.4,
            1e-15
        ));
        assert_eq!(gs_bound(&ErrorProfile::iid(3, 0.0).unwrap()), 0.0);
        assert!(close(
            gs_bound(&ErrorProfile::new(vec![0.3, 0.1]).unwrap()),
            0.8,
            1e-15
        ));
    }

    #[test]
    fn feller_examples() {
        assert!(close(feller_bound(10, 4, 0.1).unwrap(), 0.4, 1e-15));
        assert!(close(feller_bound(12, 5, 0.0).unwrap(), 0.2, 1e-15));
        assert!(matches!(
            feller_bound(10, 1, 0.2),
            Err(EcocError::Domain(_))
        ));
    }

    #[test]
    fn chernoff_mu_examples() {
        let want = 3f64.exp() / 256.0;
        assert!(close(chernoff_mu_bound(1.0, 4).unwrap(), want, 1e-15));
        assert!(close(chernoff_mu_bound(4.0 - 1e-9, 4).unwrap(), 1.0, 1e-9));
        assert!(chernoff_mu_bound(4.0, 4).is_err());
        assert!(chernoff_mu_bound(0.0, 4).is_err());
    }

    #[test]
    fn lambda_examples() {
        // e^{0.3} / 4^{0.4}
        let want = 0.3f64.exp() / 4f64.powf(0.4);
        assert!(close(chernoff_lambda(0.4, 0.1).unwrap(), want, 1e-15));
        assert!(close(want, 0.775290, 1e-6));
        assert_eq!(chernoff_lambda(0.3, 0.3).unwrap(), 1.0);
        assert_eq!(chernoff_lambda(0.3, 0.0).unwrap(), 0.0);
        assert!(chernoff_lambda(0.25, 0.05).unwrap() < chernoff_lambda(0.25, 0.15).unwrap());
        assert!(chernoff_lambda(0.0, 0.1).is_err());
        assert!(chernoff_lambda(1.0, 0.1).is_err());
        assert!(chernoff_lambda(0.5, -0.1).is_err());
    }

    #[test]
    fn mu_and_lambda_forms_agree_for_iid() {
        for n in 5..40 {
            for m in 1..n {
                let e = 0.6 * m as f64 / n as f64;
                let a = chernoff_mu_bound(n as f64 * e, m).unwrap();
                let b = chernoff_lambda(m as f64 / n as f64, e)
                    .unwrap()
                    .powi(n as i32);
                assert!((a - b).abs() <= 1e-12 * a, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn kz_examples() {
        let l26 = chernoff_bound(26, 6, 0.05).unwrap();
        assert_eq!(kz_bound(26, 6, 0.05, 0.0).unwrap(), l26);
        let e = 5.0 / 25.0;
        assert!(close(
            kz_bound(26, 6, e, 0.01).unwrap(),
            chernoff_bound(26, 6, e).unwrap(),
            1e-15
        ));
        let letters = kz_bound(26, 6, 0.0686, 0.0058).unwrap();
        assert!(close(letters, 0.055, 0.01), "{letters}");
    }

    #[test]
    fn kz_gates() {
        assert_eq!(
            kz_gate(26, 6, 0.07, -0.01).unwrap(),
            Some(KzGate::NegativeCorrelation)
        );
        assert_eq!(
            kz_gate(10, 2, 0.12, 0.01).unwrap(),
            Some(KzGate::RateAboveThreshold)
        );
        assert_eq!(
            kz_gate(10, 2, 0.016, 0.2).unwrap(),
            Some(KzGate::OutsideBahadurRange)
        );
        assert_eq!(kz_gate(10, 2, 0.016, 0.05).unwrap(), None);
        assert!(kz_bound(26, 6, 0.07, -0.01).is_err());
        // The raw expression is still available for a negative correlation.
        assert!(kz_formula(26, 6, 0.07, -0.01).unwrap() < chernoff_bound(26, 6, 0.07).unwrap());
    }

    #[test]
    fn omega_below_one() {
        for i in 1..100 {
            let e = i as f64 / 100.0;
            for r in [0.1, 0.2, 6.0 / 26.0, 0.45] {
                let w = omega(r, e).unwrap();
                if e != r {
                    assert!(w > 0.0 && w < 1.0, "r={r} e={e} w={w}");
                }
            }
        }
    }

    #[test]
    fn report_for_letters_row() {
        let report = BoundInputs::new(26, 6, 0.0686)
            .with_correlation(0.0058)
            .evaluate()
            .unwrap();
        assert!(close(report.gs, 0.2744, 1e-12));
        assert!(close(report.chernoff_lambda, 0.047, 0.005));
        assert!(close(report.kz.unwrap(), 0.055, 0.01));
        assert!(report.feller.is_some());
        let mu = report.chernoff_mu.unwrap();
        assert!((mu - report.chernoff_lambda).abs() <= 1e-12 * mu);
    }

    #[test]
    fn report_marks_inapplicable_bounds() {
        let report = BoundInputs::new(10, 2, 0.3)
            .with_correlation(0.01)
            .evaluate()
            .unwrap();
        assert!(report.feller.is_none());
        assert!(report.chernoff_mu.is_none());
        assert_eq!(report.kz, None);
        assert_eq!(report.kz_gate, Some(KzGate::RateAboveThreshold));
        assert!(report.kz_formula.is_some());
        assert!(BoundInputs::new(10, 10, 0.1).evaluate().is_err());
    }

    #[test]
    fn unscaled_kz_can_fall_below_the_exact_tail() {
        let (n, m, e) = (8, 2, 0.005);
        let c = bahadur_range(n, e).unwrap().upper;
        let exact = crate::prob::exchangeable_tail(n, m, e, c).unwrap();
        assert!(exact > kz_bound(n, m, e, c).unwrap());
        assert!(exact <= kz_bound_corrected(n, m, e, c).unwrap());
        assert_eq!(
            kz_bound_corrected(n, m, e, 0.0).unwrap(),
            kz_bound(n, m, e, 0.0).unwrap()
        );
    }
}
