use ecoc::bounds::{
    chernoff_bound, chernoff_lambda, chernoff_mu_bound, feller_bound, kz_bound_corrected, omega,
    pair_lambda_bound,
};
use ecoc::prob::{
    bahadur_range, enumerate_outcomes, exchangeable_distribution, exchangeable_tail, joint_bounds,
    pair_correlated_distribution, pair_correlated_tail, poisson_binomial_distribution, tail_iid,
    tail_independent,
};
use ecoc::{DependenceModel, ErrorProfile, ExchangeableModel, PairModel};
use proptest::prelude::*;

const SLACK: f64 = 1e-12;

fn rates(max_n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..=1.0f64, 1..=max_n)
}

/// `(n, m, e)` with `2 ≤ m < n`.
fn counts_and_rate() -> impl Strategy<Value = (usize, usize, f64)> {
    (3usize..=30).prop_flat_map(|n| (Just(n), 2..n, 0.001..0.999f64))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn independent_distribution_normalizes(r in rates(40)) {
        let total: f64 = poisson_binomial_distribution(&r).iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pair_distribution_normalizes(r in rates(30).prop_filter("n ≥ 2", |r| r.len() >= 2), t in 0.0..=1.0f64) {
        let n = r.len();
        let (lo, hi) = joint_bounds(r[n - 2], r[n - 1]);
        let model = PairModel::new(ErrorProfile::new(r).unwrap(), lo + t * (hi - lo)).unwrap();
        let dist = pair_correlated_distribution(&model);
        prop_assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(dist.iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn exchangeable_distribution_normalizes(n in 2usize..40, e in 0.01..0.99f64, t in 0.0..=1.0f64) {
        let range = bahadur_range(n, e).unwrap();
        let c = range.lower + t * (range.upper - range.lower);
        let model = ExchangeableModel::new(n, e, c).unwrap();
        let dist = exchangeable_distribution(&model);
        prop_assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        prop_assert!(dist.iter().all(|&p| p >= -1e-12));
    }

    #[test]
    fn raising_any_rate_raises_every_tail(r in rates(20), i in any::<prop::sample::Index>(), bump in 0.0..=1.0f64) {
        let i = i.index(r.len());
        let mut higher = r.clone();
        higher[i] += (1.0 - higher[i]) * bump;
        let low = ErrorProfile::new(r.clone()).unwrap();
        let high = ErrorProfile::new(higher).unwrap();
        for m in 0..=r.len() {
            prop_assert!(tail_independent(&low, m).unwrap() <= tail_independent(&high, m).unwrap() + SLACK);
        }
    }

    #[test]
    fn tail_is_sandwiched_by_extreme_rates(r in rates(20).prop_filter("non-empty", |r| !r.is_empty())) {
        // Pointwise dominance: min-rate iid ≤ heterogeneous ≤ max-rate iid.
        let n = r.len();
        let lo = r.iter().cloned().fold(1.0, f64::min);
        let hi = r.iter().cloned().fold(0.0, f64::max);
        let profile = ErrorProfile::new(r).unwrap();
        for m in 0..=n {
            let t = tail_independent(&profile, m).unwrap();
            prop_assert!(tail_iid(n, m, lo).unwrap() <= t + SLACK);
            prop_assert!(t <= tail_iid(n, m, hi).unwrap() + SLACK);
        }
    }

    #[test]
    fn iid_tail_monotone_in_rate((n, m, e) in counts_and_rate(), de in 0.0..0.5f64) {
        let e2 = (e + de).min(1.0);
        prop_assert!(tail_iid(n, m, e).unwrap() <= tail_iid(n, m, e2).unwrap() + SLACK);
    }

    #[test]
    fn pair_tail_direction_in_f((n, m, e) in counts_and_rate(), a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
        let (lo, hi) = joint_bounds(e, e);
        let (f1, f2) = {
            let (x, y) = (lo + a * (hi - lo), lo + b * (hi - lo));
            (x.min(y), x.max(y))
        };
        let t1 = pair_correlated_tail(n, m, e, f1).unwrap();
        let t2 = pair_correlated_tail(n, m, e, f2).unwrap();
        if e <= (m - 1) as f64 / (n - 1) as f64 {
            prop_assert!(t1 <= t2 + SLACK, "increasing: {t1} > {t2}");
        } else {
            prop_assert!(t2 <= t1 + SLACK, "decreasing: {t2} > {t1}");
        }
    }

    #[test]
    fn joint_interval_is_exactly_the_valid_set(a in 0.0..=1.0f64, b in 0.0..=1.0f64, t in -0.5..1.5f64) {
        let (lo, hi) = joint_bounds(a, b);
        prop_assert!(lo <= hi);
        let f = lo + t * (hi - lo);
        let profile = ErrorProfile::new(vec![0.1, a, b]).unwrap();
        let ok = PairModel::new(profile, f).is_ok();
        if (0.0..=1.0).contains(&t) {
            prop_assert!(ok);
        } else if hi - lo > 1e-9 {
            prop_assert!(!ok, "f = {f} outside [{lo}, {hi}] accepted");
        }
    }

    #[test]
    fn exchangeable_closed_form_matches_enumeration(n in 2usize..=10, e in 0.02..0.98f64, t in 0.0..=1.0f64) {
        let range = bahadur_range(n, e).unwrap();
        let c = range.lower + t * (range.upper - range.lower);
        let model = DependenceModel::Exchangeable(ExchangeableModel::new(n, e, c).unwrap());
        let brute = enumerate_outcomes(&model).unwrap();
        for m in 0..=n {
            let closed = exchangeable_tail(n, m, e, c).unwrap();
            let summed: f64 = brute[m..].iter().sum();
            prop_assert!((closed - summed).abs() < 1e-10, "m={m}: {closed} vs {summed}");
        }
    }

    #[test]
    fn pair_tail_below_shifted_chernoff(
        n in 5usize..=30,
        m_frac in 0.0..1.0f64,
        e_frac in 0.01..0.99f64,
        t in 0.0..=1.0f64,
    ) {
        let m = 3 + ((n - 4) as f64 * m_frac) as usize;
        let r = (m - 2) as f64 / (n - 2) as f64;
        let e = e_frac * r;
        let (lo, hi) = joint_bounds(e, e);
        let f = lo + t * (hi - lo);
        let tail = pair_correlated_tail(n, m, e, f).unwrap();
        prop_assert!(tail <= pair_lambda_bound(n, m, e).unwrap() + SLACK);
    }

    #[test]
    fn bound_chain((n, m, e_frac) in (3usize..=40).prop_flat_map(|n| (Just(n), 1..n, 0.001..0.999f64))) {
        let r = m as f64 / n as f64;
        let e = e_frac * r;
        let exact = tail_iid(n, m, e).unwrap();
        let ch = chernoff_bound(n, m, e).unwrap();
        prop_assert!(exact <= ch + SLACK);
        prop_assert!(exact <= feller_bound(n, m, e).unwrap() + SLACK);
        // With μ = nē both Chernoff forms are the same number.
        let mu = chernoff_mu_bound(n as f64 * e, m).unwrap();
        prop_assert!((mu - ch).abs() <= 1e-12 * ch.max(1e-300) + 1e-15);
        if m >= 2 && e <= (m - 1) as f64 / (n - 1) as f64 {
            let range = bahadur_range(n, e).unwrap();
            for c in [0.0, 0.5 * range.upper, range.upper] {
                let kz = kz_bound_corrected(n, m, e, c).unwrap();
                prop_assert!(exchangeable_tail(n, m, e, c).unwrap() <= kz + SLACK);
            }
        }
    }

    #[test]
    fn decay_factors(r in 0.01..0.99f64, e_frac in 0.001..0.999f64, n in 1usize..60) {
        let e = e_frac * r;
        let lambda = chernoff_lambda(r, e).unwrap();
        let w = omega(r, e).unwrap();
        prop_assert!(lambda > 0.0 && lambda < 1.0);
        prop_assert!(w > 0.0 && w < 1.0);
        let single = lambda.powi(n as i32);
        let double = lambda.powi(2 * n as i32);
        prop_assert!((double - single * single).abs() <= 1e-12 * single * single + 1e-300);
    }

    #[test]
    fn lambda_increases_below_r(r in 0.01..0.99f64, a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let (e1, e2) = (r * a.min(b), r * a.max(b));
        prop_assert!(chernoff_lambda(r, e1).unwrap() <= chernoff_lambda(r, e2).unwrap() + SLACK);
    }
}
