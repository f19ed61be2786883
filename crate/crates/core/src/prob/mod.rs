//! Distributions of the number of erring base classifiers.
//!
//! Three dependence models are supported:
//!
//! * independent, non-identical rates (Poisson binomial, solved by dynamic
//!   programming over classifiers),
//! * independent except for one correlated pair `(L_{n-1}, L_n)` whose joint
//!   error probability is `f`,
//! * exchangeable classifiers with a uniform second-order Bahadur correlation
//!   `c`, where an outcome's probability depends only on its error count.
//!
//! [`enumerate_outcomes`] walks all `2^n` outcomes of any model directly from
//! its joint law and serves as the reference for every faster route.

mod binomial;
mod enumerate;
mod exchangeable;
mod pair;
mod poisson_binomial;

use serde::{Deserialize, Serialize};

use crate::error::{EcocError, Result};

pub use binomial::{binomial_distribution, binomial_pmf, ln_choose, tail_iid};
pub use enumerate::{enumerate_outcomes, MAX_ENUMERATION_WIDTH};
pub use exchangeable::{
    bahadur_range, exchangeable_distribution, exchangeable_pmf, exchangeable_tail, outcome_weight,
    BahadurRange,
};
pub use pair::{pair_correlated_distribution, pair_correlated_pmf, pair_correlated_tail};
pub use poisson_binomial::{poisson_binomial_distribution, poisson_binomial_pmf, tail_independent};

pub(crate) use binomial::{binom_pmf_unchecked, upper_tail_iid};

/// Slack used when checking probabilities and joint-table cells against their limits.
pub(crate) const PROB_SLACK: f64 = 1e-12;

pub(crate) fn check_probability(name: &str, p: f64) -> Result<()> {
    if p.is_finite() && (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(EcocError::argument(format!(
            "{name} = {p} is not a probability"
        )))
    }
}

/// Per-classifier bit error rates `e_1, …, e_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ErrorProfile {
    rates: Vec<f64>,
}

impl ErrorProfile {
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        if rates.is_empty() {
            return Err(EcocError::argument("error profile needs at least one rate"));
        }
        for (i, &e) in rates.iter().enumerate() {
            check_probability(&format!("e_{}", i + 1), e)?;
        }
        Ok(Self { rates })
    }

    /// `n` classifiers sharing the rate `e`.
    pub fn iid(n: usize, e: f64) -> Result<Self> {
        Self::new(vec![e; n])
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    /// μ = Σ e_i.
    pub fn sum(&self) -> f64 {
        self.rates.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.sum() / self.len() as f64
    }

    pub fn max(&self) -> f64 {
        self.rates.iter().copied().fold(0.0, f64::max)
    }
}

impl TryFrom<Vec<f64>> for ErrorProfile {
    type Error = EcocError;

    fn try_from(rates: Vec<f64>) -> Result<Self> {
        Self::new(rates)
    }
}

impl From<ErrorProfile> for Vec<f64> {
    fn from(p: ErrorProfile) -> Self {
        p.rates
    }
}

/// Independent classifiers except that the last two share the joint error
/// probability `f = P(L_{n-1} = 1, L_n = 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairModel {
    profile: ErrorProfile,
    f: f64,
}

impl PairModel {
    /// Requires `max(0, e_{n-1} + e_n - 1) ≤ f ≤ min(e_{n-1}, e_n)` so that all
    /// four cells of the pair's joint table are non-negative.
    pub fn new(profile: ErrorProfile, f: f64) -> Result<Self> {
        let n = profile.len();
        if n < 2 {
            return Err(EcocError::model(format!(
                "pair model needs at least 2 classifiers, got {n}"
            )));
        }
        let (lo, hi) = joint_bounds(profile.rates[n - 2], profile.rates[n - 1]);
        if !f.is_finite() || f < lo - PROB_SLACK || f > hi + PROB_SLACK {
            return Err(EcocError::model(format!(
                "joint error probability f = {f} outside [{lo}, {hi}]"
            )));
        }
        Ok(Self {
            profile,
            f: f.clamp(lo, hi),
        })
    }

    pub fn iid(n: usize, e: f64, f: f64) -> Result<Self> {
        Self::new(ErrorProfile::iid(n, e)?, f)
    }

    pub fn profile(&self) -> &ErrorProfile {
        &self.profile
    }

    pub fn f(&self) -> f64 {
        self.f
    }

    pub fn n(&self) -> usize {
        self.profile.len()
    }

    /// Rates of the `n - 2` independent classifiers.
    pub fn independent_rates(&self) -> &[f64] {
        &self.profile.rates[..self.n() - 2]
    }

    /// `(e_{n-1}, e_n)`.
    pub fn pair_rates(&self) -> (f64, f64) {
        let r = &self.profile.rates;
        (r[r.len() - 2], r[r.len() - 1])
    }

    /// `ē_n = (e_{n-1} + e_n) / 2`.
    pub fn pair_mean(&self) -> f64 {
        let (a, b) = self.pair_rates();
        0.5 * (a + b)
    }

    /// Joint law of `(L_{n-1}, L_n)` as `[P11, P10, P01, P00]`, where `P10`
    /// means `L_{n-1} = 1, L_n = 0`.
    pub fn joint(&self) -> [f64; 4] {
        let (a, b) = self.pair_rates();
        let f = self.f;
        [
            f,
            (a - f).max(0.0),
            (b - f).max(0.0),
            (1.0 - a - b + f).max(0.0),
        ]
    }

    /// Pearson correlation of the pair, `None` when either rate is 0 or 1.
    pub fn correlation(&self) -> Option<f64> {
        let (a, b) = self.pair_rates();
        let var = a * (1.0 - a) * b * (1.0 - b);
        (var > 0.0).then(|| (self.f - a * b) / var.sqrt())
    }
}

/// Feasible interval for `f` given the two marginal rates.
pub fn joint_bounds(a: f64, b: f64) -> (f64, f64) {
    ((a + b - 1.0).max(0.0), a.min(b))
}

/// `n` exchangeable classifiers with common rate `ē` and uniform pairwise
/// correlation `c`, all higher-order correlations zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExchangeableModel {
    n: usize,
    e_bar: f64,
    c: f64,
}

impl ExchangeableModel {
    pub fn new(n: usize, e_bar: f64, c: f64) -> Result<Self> {
        let range = bahadur_range(n, e_bar)?;
        if !c.is_finite() || !range.contains(c) {
            return Err(EcocError::model(format!(
                "correlation c = {c} outside Bahadur range [{}, {}] for n = {n}, e = {e_bar}",
                range.lower, range.upper
            )));
        }
        let worst = (0..=n)
            .map(|k| outcome_weight(n, k, e_bar, c))
            .fold(f64::INFINITY, f64::min);
        if worst < -PROB_SLACK {
            return Err(EcocError::model(format!(
                "correlation c = {c} gives negative outcome weight {worst}"
            )));
        }
        Ok(Self { n, e_bar, c })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn e_bar(&self) -> f64 {
        self.e_bar
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Multiplier applied to `ē^k (1-ē)^{n-k}` for any single outcome with `k` errors.
    pub fn weight(&self, k: usize) -> f64 {
        outcome_weight(self.n, k, self.e_bar, self.c).max(0.0)
    }
}

/// The three supported joint laws for the base-classifier error indicators.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "params", rename_all = "kebab-case")]
pub enum DependenceModel {
    Independent(ErrorProfile),
    CorrelatedPair(PairModel),
    Exchangeable(ExchangeableModel),
}

impl DependenceModel {
    pub fn n(&self) -> usize {
        match self {
            DependenceModel::Independent(p) => p.len(),
            DependenceModel::CorrelatedPair(p) => p.n(),
            DependenceModel::Exchangeable(x) => x.n(),
        }
    }

    /// Mean bit error rate ē.
    pub fn mean_rate(&self) -> f64 {
        match self {
            DependenceModel::Independent(p) => p.mean(),
            DependenceModel::CorrelatedPair(p) => p.profile().mean(),
            DependenceModel::Exchangeable(x) => x.e_bar(),
        }
    }

    /// Exact distribution of the number of errors, indexed by `k = 0..=n`.
    pub fn distribution(&self) -> Vec<f64> {
        match self {
            DependenceModel::Independent(p) => poisson_binomial_distribution(p.rates()),
            DependenceModel::CorrelatedPair(p) => pair_correlated_distribution(p),
            DependenceModel::Exchangeable(x) => exchangeable_distribution(x),
        }
    }

    pub fn pmf(&self, k: usize) -> Result<f64> {
        match self {
            DependenceModel::Independent(p) => poisson_binomial_pmf(p, k),
            DependenceModel::CorrelatedPair(p) => pair_correlated_pmf(p, k),
            DependenceModel::Exchangeable(x) => exchangeable_pmf(x.n(), k, x.e_bar(), x.c()),
        }
    }

    /// `P(at least m errors)`.
    pub fn tail(&self, m: usize) -> Result<f64> {
        let n = self.n();
        if m > n {
            return Err(EcocError::argument(format!("m = {m} exceeds n = {n}")));
        }
        match self {
            DependenceModel::Independent(p) => tail_independent(p, m),
            DependenceModel::Exchangeable(x) => exchangeable_tail(n, m, x.e_bar(), x.c()),
            DependenceModel::CorrelatedPair(_) => {
                Ok(self.distribution()[m..].iter().rev().sum::<f64>().min(1.0))
            }
        }
    }
}
