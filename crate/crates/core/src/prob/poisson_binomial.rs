use crate::error::{EcocError, Result};

use super::ErrorProfile;

/// Distribution of the error count over independent classifiers with the
/// given rates, truncated to counts `0..=upto`.
///
/// Classifiers are folded in one at a time:
/// `P_i(j) = P_{i-1}(j)(1 - e_i) + P_{i-1}(j - 1) e_i`.
fn truncated_distribution(rates: &[f64], upto: usize) -> Vec<f64> {
    let width = upto.min(rates.len()) + 1;
    let mut dist = vec![0.0; width];
    dist[0] = 1.0;
    for (i, &e) in rates.iter().enumerate() {
        let top = (i + 1).min(width - 1);
        for j in (1..=top).rev() {
            dist[j] = dist[j] * (1.0 - e) + dist[j - 1] * e;
        }
        dist[0] *= 1.0 - e;
    }
    dist
}

/// Full Poisson binomial distribution `p_E(n, k)` for `k = 0..=n`.
pub fn poisson_binomial_distribution(rates: &[f64]) -> Vec<f64> {
    truncated_distribution(rates, rates.len())
}

/// `p_E(n, k)`: probability that exactly `k` of the classifiers err.
pub fn poisson_binomial_pmf(profile: &ErrorProfile, k: usize) -> Result<f64> {
    let n = profile.len();
    if k > n {
        return Err(EcocError::argument(format!("k = {k} exceeds n = {n}")));
    }
    Ok(truncated_distribution(profile.rates(), k)[k])
}

/// `ε_E(n, m) = Σ_{k=m}^{n} p_E(n, k)`.
pub fn tail_independent(profile: &ErrorProfile, m: usize) -> Result<f64> {
    let n = profile.len();
    if m > n {
        return Err(EcocError::argument(format!("m = {m} exceeds n = {n}")));
    }
    if m == 0 {
        return Ok(1.0);
    }
    let dist = poisson_binomial_distribution(profile.rates());
    Ok(dist[m..].iter().rev().sum::<f64>().min(1.0))
}
