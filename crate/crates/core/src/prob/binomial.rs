use crate::error::{EcocError, Result};

use super::check_probability;

/// Above this many trials the binomial mass is evaluated in log space.
const DIRECT_LIMIT: usize = 50;

/// `ln C(n, k)`, summed as `Σ ln((n - k + i) / i)` over the shorter side.
pub fn ln_choose(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    (1..=k).map(|i| ((n - k + i) as f64 / i as f64).ln()).sum()
}

/// Exact for `n ≤ 50`: every partial product is an integer below 2^53.
fn choose_small(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 1..=k {
        acc = acc * (n - k + i) as f64 / i as f64;
    }
    acc
}

/// Binomial mass without argument checks; `k > n` gives 0.
pub(crate) fn binom_pmf_unchecked(n: usize, k: usize, e: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    if e <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if e >= 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    if n <= DIRECT_LIMIT {
        choose_small(n, k) * e.powi(k as i32) * (1.0 - e).powi((n - k) as i32)
    } else {
        (ln_choose(n, k) + k as f64 * e.ln() + (n - k) as f64 * (-e).ln_1p()).exp()
    }
}

/// `P(K = k)` for `K ~ Binomial(n, e)`.
pub fn binomial_pmf(n: usize, k: usize, e: f64) -> Result<f64> {
    check_probability("e", e)?;
    if k > n {
        return Err(EcocError::argument(format!("k = {k} exceeds n = {n}")));
    }
    Ok(binom_pmf_unchecked(n, k, e))
}

pub fn binomial_distribution(n: usize, e: f64) -> Result<Vec<f64>> {
    check_probability("e", e)?;
    Ok((0..=n).map(|k| binom_pmf_unchecked(n, k, e)).collect())
}

/// Upper tail `P(K ≥ m)` with the recursion-friendly conventions
/// `m ≤ 0 → 1` and `m > n → 0`.
pub(crate) fn upper_tail_iid(n: i64, m: i64, e: f64) -> f64 {
    if m <= 0 {
        return 1.0;
    }
    if m > n {
        return 0.0;
    }
    let (n, m) = (n as usize, m as usize);
    // Smallest terms first.
    let tail: f64 = (m..=n).rev().map(|k| binom_pmf_unchecked(n, k, e)).sum();
    tail.min(1.0)
}

/// `ε(n, m, e) = P(K ≥ m)` for `K ~ Binomial(n, e)`.
pub fn tail_iid(n: usize, m: usize, e: f64) -> Result<f64> {
    check_probability("e", e)?;
    if m > n {
        return Err(EcocError::argument(format!("m = {m} exceeds n = {n}")));
    }
    Ok(upper_tail_iid(n as i64, m as i64, e))
}
