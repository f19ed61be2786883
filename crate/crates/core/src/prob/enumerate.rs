use rayon::prelude::*;

use crate::error::{EcocError, Result};

use super::{DependenceModel, ExchangeableModel, PairModel};

/// Widest model [`enumerate_outcomes`] will walk (2^20 outcomes).
pub const MAX_ENUMERATION_WIDTH: usize = 20;

/// Outcomes per work unit. Chunks are summed in index order, so the result
/// does not depend on how rayon schedules them.
const CHUNK_BITS: u32 = 12;

fn independent_prob(rates: &[f64], mask: u64) -> f64 {
    rates
        .iter()
        .enumerate()
        .map(|(i, &e)| if mask >> i & 1 == 1 { e } else { 1.0 - e })
        .product()
}

fn pair_prob(model: &PairModel, mask: u64) -> f64 {
    let n = model.n();
    let head = independent_prob(model.independent_rates(), mask);
    let first = mask >> (n - 2) & 1 == 1;
    let second = mask >> (n - 1) & 1 == 1;
    let [p11, p10, p01, p00] = model.joint();
    head * match (first, second) {
        (true, true) => p11,
        (true, false) => p10,
        (false, true) => p01,
        (false, false) => p00,
    }
}

/// Second-order Bahadur expansion evaluated pair by pair:
/// `P(A) (1 + c Σ_{i<j} z_i z_j)` with `z_i = (L_i - ē)/sqrt(ē(1-ē))`.
fn exchangeable_prob(model: &ExchangeableModel, mask: u64) -> f64 {
    let (n, e, c) = (model.n(), model.e_bar(), model.c());
    let sd = (e * (1.0 - e)).sqrt();
    let z: Vec<f64> = (0..n).map(|i| ((mask >> i & 1) as f64 - e) / sd).collect();
    let mut pairs = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            pairs += z[i] * z[j];
        }
    }
    let base: f64 = (0..n)
        .map(|i| if mask >> i & 1 == 1 { e } else { 1.0 - e })
        .product();
    base * (1.0 + c * pairs)
}

/// Exact distribution of the error count by walking every outcome of the
/// model's joint law. Index `k` of the result holds `P(K = k)`.
pub fn enumerate_outcomes(model: &DependenceModel) -> Result<Vec<f64>> {
    let n = model.n();
    if n > MAX_ENUMERATION_WIDTH {
        return Err(EcocError::Size(format!(
            "enumeration over {n} classifiers exceeds cap {MAX_ENUMERATION_WIDTH}"
        )));
    }
    let outcomes = 1u64 << n;
    let chunk = 1u64 << CHUNK_BITS.min(n as u32);
    let prob = |mask: u64| match model {
        DependenceModel::Independent(p) => independent_prob(p.rates(), mask),
        DependenceModel::CorrelatedPair(p) => pair_prob(p, mask),
        DependenceModel::Exchangeable(x) => exchangeable_prob(x, mask),
    };
    let partials: Vec<Vec<f64>> = (0..outcomes / chunk)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0; n + 1];
            for mask in c * chunk..(c + 1) * chunk {
                acc[mask.count_ones() as usize] += prob(mask);
            }
            acc
        })
        .collect();
    let mut dist = vec![0.0; n + 1];
    for part in partials {
        for (d, p) in dist.iter_mut().zip(part) {
            *d += p;
        }
    }
    Ok(dist)
}
