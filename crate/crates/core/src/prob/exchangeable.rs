use serde::Serialize;

use crate::error::{EcocError, Result};

use super::{binom_pmf_unchecked, upper_tail_iid, ExchangeableModel, PROB_SLACK};

/// Admissible interval for the uniform pairwise correlation of `n`
/// exchangeable classifiers with common rate `ē`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BahadurRange {
    pub lower: f64,
    pub upper: f64,
    /// `γ = min_{0≤k≤n} (k - (n-1)ē - 1/2)²`, always ≤ 1/4.
    pub gamma: f64,
}

impl BahadurRange {
    pub fn contains(&self, c: f64) -> bool {
        let slack = PROB_SLACK * c.abs().max(1.0);
        c >= self.lower - slack && c <= self.upper + slack
    }
}

/// Bahadur bounds on `c` for the second-order model.
///
/// Upper: `2ē(1-ē) / ((n-1)ē(1-ē) + 1/4 - γ)`.
/// Lower: `-2/(n(n-1)) · min(ē/(1-ē), (1-ē)/ē)`, the smaller of the
/// all-correct and all-wrong outcome limits.
pub fn bahadur_range(n: usize, e: f64) -> Result<BahadurRange> {
    if !(e.is_finite() && e > 0.0 && e < 1.0) {
        return Err(EcocError::model(format!(
            "exchangeable model needs 0 < e < 1, got {e}"
        )));
    }
    if n < 2 {
        return Err(EcocError::model(format!(
            "exchangeable model needs n ≥ 2, got {n}"
        )));
    }
    let nf = n as f64;
    let centre = (nf - 1.0) * e + 0.5;
    let gamma = (0..=n)
        .map(|k| (k as f64 - centre).powi(2))
        .fold(f64::INFINITY, f64::min);
    let var = e * (1.0 - e);
    let upper = 2.0 * var / ((nf - 1.0) * var + 0.25 - gamma);
    let odds = (e / (1.0 - e)).min((1.0 - e) / e);
    let lower = -2.0 * odds / (nf * (nf - 1.0));
    Ok(BahadurRange {
        lower,
        upper,
        gamma,
    })
}

/// `1 + c/(2ē(1-ē)) · (k² - k + ē(n-1)(nē - 2k))`, the factor relating one
/// outcome with `k` errors to its uncorrelated probability `ē^k (1-ē)^{n-k}`.
pub fn outcome_weight(n: usize, k: usize, e: f64, c: f64) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    1.0 + c / (2.0 * e * (1.0 - e)) * (kf * kf - kf + e * (nf - 1.0) * (nf * e - 2.0 * kf))
}

/// `p(n, k, ē, c) = C(n,k) ē^k (1-ē)^{n-k} · weight(k)`.
pub fn exchangeable_pmf(n: usize, k: usize, e: f64, c: f64) -> Result<f64> {
    let model = ExchangeableModel::new(n, e, c)?;
    if k > n {
        return Err(EcocError::argument(format!("k = {k} exceeds n = {n}")));
    }
    Ok(binom_pmf_unchecked(n, k, e) * model.weight(k))
}

pub fn exchangeable_distribution(model: &ExchangeableModel) -> Vec<f64> {
    let (n, e) = (model.n(), model.e_bar());
    (0..=n)
        .map(|k| binom_pmf_unchecked(n, k, e) * model.weight(k))
        .collect()
}

/// Closed-form tail
/// `ε(n,m,ē,c) = ε(n,m,ē) + c/2 · n(n-1) · ((m-1)/(n-1) - ē) · p(n-1, m-1, ē)`.
pub fn exchangeable_tail(n: usize, m: usize, e: f64, c: f64) -> Result<f64> {
    ExchangeableModel::new(n, e, c)?;
    if m > n {
        return Err(EcocError::argument(format!("m = {m} exceeds n = {n}")));
    }
    if m == 0 {
        return Ok(1.0);
    }
    let nf = n as f64;
    let base = upper_tail_iid(n as i64, m as i64, e);
    let shift = (m as f64 - 1.0) / (nf - 1.0) - e;
    let correction = 0.5 * c * nf * (nf - 1.0) * shift * binom_pmf_unchecked(n - 1, m - 1, e);
    Ok((base + correction).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{binomial_pmf, tail_iid};

    #[test]
    fn three_fair_coins_example() {
        // (1/8)(1 + 3c) at k = 0 with c = 0.1.
        assert!((exchangeable_pmf(3, 0, 0.5, 0.1).unwrap() - 0.1625).abs() < 1e-15);
        assert!((exchangeable_pmf(3, 1, 0.5, 0.1).unwrap() - 0.3375).abs() < 1e-15);
        for &c in &[-1.0 / 3.0, -0.1, 0.0, 0.4, 1.0] {
            let total: f64 = (0..=3)
                .map(|k| exchangeable_pmf(3, k, 0.5, c).unwrap())
                .sum();
            assert!((total - 1.0).abs() < 1e-15, "c={c}");
        }
    }

    #[test]
    fn uncorrelated_collapse() {
        for k in 0..=9 {
            let a = exchangeable_pmf(9, k, 0.13, 0.0).unwrap();
            assert_eq!(a, binomial_pmf(9, k, 0.13).unwrap());
        }
        assert_eq!(
            exchangeable_tail(9, 3, 0.13, 0.0).unwrap(),
            tail_iid(9, 3, 0.13).unwrap()
        );
    }

    #[test]
    fn tail_unaffected_at_pivot_rate() {
        // ē = (m-1)/(n-1) kills the correction for every admissible c.
        let (n, m) = (11, 3);
        let e = 0.2;
        let range = bahadur_range(n, e).unwrap();
        for i in 0..=4 {
            let c = range.lower + (range.upper - range.lower) * i as f64 / 4.0;
            let t = exchangeable_tail(n, m, e, c).unwrap();
            assert!((t - tail_iid(n, m, e).unwrap()).abs() < 1e-15, "c={c}");
        }
    }

    #[test]
    fn bahadur_range_example_and_gamma_cap() {
        let r = bahadur_range(3, 0.5).unwrap();
        assert!((r.lower + 1.0 / 3.0).abs() < 1e-15);
        assert!((r.upper - 1.0).abs() < 1e-15);
        assert!((r.gamma - 0.25).abs() < 1e-15);
        for n in 2..40 {
            for i in 1..100 {
                let g = bahadur_range(n, i as f64 / 100.0).unwrap().gamma;
                assert!(g <= 0.25 + 1e-15);
            }
        }
        assert!(bahadur_range(4, 0.0).is_err());
        assert!(bahadur_range(4, 1.0).is_err());
        assert!(bahadur_range(1, 0.3).is_err());
    }

    #[test]
    fn endpoint_weights_non_negative() {
        for n in 2..=12 {
            for i in 1..20 {
                let e = i as f64 / 20.0;
                let r = bahadur_range(n, e).unwrap();
                for c in [r.lower, r.upper] {
                    for k in 0..=n {
                        assert!(
                            outcome_weight(n, k, e, c) >= -1e-12,
                            "n={n} e={e} c={c} k={k}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_out_of_range_correlation() {
        let r = bahadur_range(10, 0.1).unwrap();
        assert!(exchangeable_tail(10, 4, 0.1, r.upper * 1.01).is_err());
        assert!(exchangeable_pmf(10, 4, 0.1, r.lower * 1.01).is_err());
        assert!(exchangeable_tail(10, 11, 0.1, 0.0).is_err());
    }
}
