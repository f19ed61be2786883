use crate::error::{EcocError, Result};

use super::poisson_binomial::poisson_binomial_distribution;
use super::{upper_tail_iid, PairModel};

/// Splits the count over the independent block `E_{n-2}` and the pair.
///
/// With `s = 2ē_n`, the pair contributes 2 errors with probability `f`, one
/// error with probability `s - 2f` and none with `1 - s + f`:
///
/// * `k ≤ n-2`: `f p(n-2,k-2) + 2(ē_n - f) p(n-2,k-1) + (1 - 2ē_n + f) p(n-2,k)`
/// * `k = n-1`: `f p(n-2,n-3) + 2(ē_n - f) p(n-2,n-2)`
/// * `k = n`:   `f p(n-2,n-2)`
fn split_on_pair(inner: &[f64], n: usize, k: usize, e_pair: f64, f: f64) -> f64 {
    let p = |j: isize| -> f64 {
        usize::try_from(j)
            .ok()
            .and_then(|j| inner.get(j).copied())
            .unwrap_or(0.0)
    };
    let k = k as isize;
    let n = n as isize;
    let one = 2.0 * (e_pair - f);
    let none = 1.0 - 2.0 * e_pair + f;
    if k <= n - 2 {
        f * p(k - 2) + one * p(k - 1) + none * p(k)
    } else if k == n - 1 {
        f * p(n - 3) + one * p(n - 2)
    } else {
        f * p(n - 2)
    }
}

/// `p_{E_n}(n, k, f)` for the pair-correlated model.
pub fn pair_correlated_pmf(model: &PairModel, k: usize) -> Result<f64> {
    let n = model.n();
    if k > n {
        return Err(EcocError::argument(format!("k = {k} exceeds n = {n}")));
    }
    let inner = poisson_binomial_distribution(model.independent_rates());
    Ok(split_on_pair(&inner, n, k, model.pair_mean(), model.f()).max(0.0))
}

pub fn pair_correlated_distribution(model: &PairModel) -> Vec<f64> {
    let n = model.n();
    let inner = poisson_binomial_distribution(model.independent_rates());
    (0..=n)
        .map(|k| split_on_pair(&inner, n, k, model.pair_mean(), model.f()).max(0.0))
        .collect()
}

/// `ε(n, m, e, f)` for identically distributed classifiers:
/// `f ε(n-2, m-2, e) + 2(e - f) ε(n-2, m-1, e) + (1 - 2e + f) ε(n-2, m, e)`.
pub fn pair_correlated_tail(n: usize, m: usize, e: f64, f: f64) -> Result<f64> {
    let model = PairModel::iid(n, e, f)?;
    if m > n {
        return Err(EcocError::argument(format!("m = {m} exceeds n = {n}")));
    }
    let f = model.f();
    let (inner, m) = (n as i64 - 2, m as i64);
    let tail = f * upper_tail_iid(inner, m - 2, e)
        + 2.0 * (e - f) * upper_tail_iid(inner, m - 1, e)
        + (1.0 - 2.0 * e + f) * upper_tail_iid(inner, m, e);
    Ok(tail.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{poisson_binomial_pmf, tail_iid, ErrorProfile};

    #[test]
    fn two_classifiers_all_errors_is_f() {
        let model = PairModel::new(ErrorProfile::new(vec![0.3, 0.45]).unwrap(), 0.2).unwrap();
        assert!((pair_correlated_pmf(&model, 2).unwrap() - 0.2).abs() < 1e-16);
        let dist = pair_correlated_distribution(&model);
        // P10 + P01 and P00 of the joint table.
        assert!((dist[1] - (0.1 + 0.25)).abs() < 1e-15);
        assert!((dist[0] - 0.45).abs() < 1e-15);
    }

    #[test]
    fn independence_collapse() {
        let rates = vec![0.05, 0.3, 0.12, 0.4, 0.25];
        let profile = ErrorProfile::new(rates).unwrap();
        let model = PairModel::new(profile.clone(), 0.4 * 0.25).unwrap();
        for k in 0..=5 {
            let a = pair_correlated_pmf(&model, k).unwrap();
            let b = poisson_binomial_pmf(&profile, k).unwrap();
            assert!((a - b).abs() < 1e-15, "k={k}");
        }
    }

    #[test]
    fn iid_tail_collapse_and_zero_f() {
        for n in 2..=12 {
            for m in 0..=n {
                let a = pair_correlated_tail(n, m, 0.2, 0.04).unwrap();
                let b = tail_iid(n, m, 0.2).unwrap();
                assert!((a - b).abs() < 1e-14, "n={n} m={m}");
            }
            assert_eq!(pair_correlated_tail(n, n, 0.2, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn tail_matches_pmf_route() {
        let model = PairModel::iid(4, 0.2, 0.05).unwrap();
        let dist = pair_correlated_distribution(&model);
        let summed: f64 = dist[2..].iter().sum();
        let closed = pair_correlated_tail(4, 2, 0.2, 0.05).unwrap();
        assert!((summed - closed).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(pair_correlated_tail(1, 1, 0.2, 0.0).is_err());
        assert!(pair_correlated_tail(5, 6, 0.2, 0.04).is_err());
        assert!(pair_correlated_tail(5, 2, 0.2, 0.3).is_err());
        let model = PairModel::iid(3, 0.1, 0.01).unwrap();
        assert!(pair_correlated_pmf(&model, 4).is_err());
    }
}
