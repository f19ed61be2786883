//! Seeded Monte Carlo estimation of ECOC error.
//!
//! Every trial draws from a ChaCha8 stream. In [`Determinism::Strict`] mode
//! trial `t` uses stream `t` of the seeded generator, so results are a pure
//! function of `(seed, trials)` whatever the worker count. In
//! [`Determinism::Fast`] mode each worker owns one stream for a contiguous
//! slice of trials; results then depend on `(seed, workers)`.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code_matrix::{CodeMatrix, TiePolicy};
use crate::error::{EcocError, Result};
use crate::prob::DependenceModel;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x5EED_EC0C;

/// Trials per rayon work item in strict mode.
const STRICT_BLOCK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Determinism {
    #[default]
    Strict,
    Fast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
    pub determinism: Determinism,
}

impl SimConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            workers: 1,
            determinism: Determinism::Strict,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_determinism(mut self, determinism: Determinism) -> Self {
        self.determinism = determinism;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(EcocError::argument("need at least one trial"));
        }
        if self.workers == 0 {
            return Err(EcocError::argument("need at least one worker"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateMode {
    /// A trial errs when at least `m` classifiers err.
    Threshold,
    /// A trial errs when nearest-codeword decoding picks the wrong class.
    FullDecode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimResult {
    pub error_rate: f64,
    /// `sqrt(p̂ (1 - p̂) / trials)`.
    pub std_err: f64,
    pub trials: u64,
    pub errors: u64,
    /// Decoding ties seen (full-decode mode only).
    pub ties: u64,
    pub mode: EstimateMode,
}

impl SimResult {
    fn new(errors: u64, ties: u64, trials: u64, mode: EstimateMode) -> Self {
        let p = errors as f64 / trials as f64;
        Self {
            error_rate: p,
            std_err: (p * (1.0 - p) / trials as f64).sqrt(),
            trials,
            errors,
            ties,
            mode,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrueClass {
    /// Drawn uniformly over classes in every trial.
    #[default]
    Uniform,
    Fixed(usize),
}

/// Precomputed draw tables for one model.
#[derive(Debug, Clone)]
pub struct OutcomeSampler {
    n: usize,
    kind: SamplerKind,
}

#[derive(Debug, Clone)]
enum SamplerKind {
    Independent(Vec<f64>),
    /// Independent head plus cumulative `[P11, P11+P10, P11+P10+P01]` for the pair.
    Pair {
        head: Vec<f64>,
        cumulative: [f64; 3],
    },
    /// Cumulative distribution of the error count.
    Exchangeable {
        cdf: Vec<f64>,
    },
}

impl OutcomeSampler {
    pub fn new(model: &DependenceModel) -> Self {
        let kind = match model {
            DependenceModel::Independent(p) => SamplerKind::Independent(p.rates().to_vec()),
            DependenceModel::CorrelatedPair(p) => {
                let [p11, p10, p01, _] = p.joint();
                SamplerKind::Pair {
                    head: p.independent_rates().to_vec(),
                    cumulative: [p11, p11 + p10, p11 + p10 + p01],
                }
            }
            DependenceModel::Exchangeable(_) => {
                let mut acc = 0.0;
                let mut cdf: Vec<f64> = model
                    .distribution()
                    .into_iter()
                    .map(|p| {
                        acc += p;
                        acc
                    })
                    .collect();
                if let Some(last) = cdf.last_mut() {
                    *last = f64::INFINITY;
                }
                SamplerKind::Exchangeable { cdf }
            }
        };
        Self { n: model.n(), kind }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Writes one error vector (1 = classifier erred) into `out`.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [u8]) {
        debug_assert_eq!(out.len(), self.n);
        match &self.kind {
            SamplerKind::Independent(rates) => {
                for (bit, &e) in out.iter_mut().zip(rates) {
                    *bit = u8::from(rng.random::<f64>() < e);
                }
            }
            SamplerKind::Pair { head, cumulative } => {
                for (bit, &e) in out.iter_mut().zip(head) {
                    *bit = u8::from(rng.random::<f64>() < e);
                }
                let u = rng.random::<f64>();
                let (a, b) = if u < cumulative[0] {
                    (1, 1)
                } else if u < cumulative[1] {
                    (1, 0)
                } else if u < cumulative[2] {
                    (0, 1)
                } else {
                    (0, 0)
                };
                out[self.n - 2] = a;
                out[self.n - 1] = b;
            }
            SamplerKind::Exchangeable { cdf } => {
                let u = rng.random::<f64>();
                let k = cdf.partition_point(|&c| c <= u);
                out.fill(0);
                for pos in sample(rng, self.n, k) {
                    out[pos] = 1;
                }
            }
        }
    }

    fn error_count<R: Rng + ?Sized>(&self, rng: &mut R, scratch: &mut [u8]) -> usize {
        self.sample_into(rng, scratch);
        scratch.iter().map(|&b| b as usize).sum()
    }
}

/// Draws one error vector of length `n` from the model's joint law.
pub fn sample_outcome<R: Rng + ?Sized>(model: &DependenceModel, rng: &mut R) -> Vec<u8> {
    let sampler = OutcomeSampler::new(model);
    let mut out = vec![0; sampler.n()];
    sampler.sample_into(rng, &mut out);
    out
}

/// Per-trial outcome tallied by [`run_trials`].
#[derive(Default, Clone, Copy)]
struct Tally {
    errors: u64,
    ties: u64,
}

impl std::ops::Add for Tally {
    type Output = Tally;

    fn add(self, o: Tally) -> Tally {
        Tally {
            errors: self.errors + o.errors,
            ties: self.ties + o.ties,
        }
    }
}

/// Runs `trial` once per trial under the configured stream layout and sums the tallies.
fn run_trials<S, T>(cfg: &SimConfig, init: impl Fn() -> S + Sync, trial: T) -> Result<Tally>
where
    T: Fn(&mut ChaCha8Rng, &mut S) -> Tally + Sync,
{
    cfg.validate()?;
    let base = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| EcocError::argument(format!("cannot start {} workers: {e}", cfg.workers)))?;
    let trials = cfg.trials;
    let tally = pool.install(|| match cfg.determinism {
        Determinism::Strict => (0..trials.div_ceil(STRICT_BLOCK))
            .into_par_iter()
            .map(|block| {
                let mut state = init();
                let end = ((block + 1) * STRICT_BLOCK).min(trials);
                (block * STRICT_BLOCK..end)
                    .map(|t| {
                        let mut rng = base.clone();
                        rng.set_stream(t);
                        trial(&mut rng, &mut state)
                    })
                    .fold(Tally::default(), |a, b| a + b)
            })
            .reduce(Tally::default, |a, b| a + b),
        Determinism::Fast => {
            let workers = cfg.workers as u64;
            (0..workers)
                .into_par_iter()
                .map(|w| {
                    let mut state = init();
                    let mut rng = base.clone();
                    rng.set_stream(w);
                    let (lo, hi) = (trials * w / workers, trials * (w + 1) / workers);
                    (lo..hi)
                        .map(|_| trial(&mut rng, &mut state))
                        .fold(Tally::default(), |a, b| a + b)
                })
                .reduce(Tally::default, |a, b| a + b)
        }
    });
    Ok(tally)
}

/// Fraction of trials in which at least `m` classifiers err.
pub fn mc_threshold_error(model: &DependenceModel, m: usize, cfg: &SimConfig) -> Result<SimResult> {
    let n = model.n();
    if m > n {
        return Err(EcocError::argument(format!("m = {m} exceeds n = {n}")));
    }
    let sampler = OutcomeSampler::new(model);
    let tally = run_trials(
        cfg,
        || vec![0u8; n],
        |rng, scratch| Tally {
            errors: u64::from(sampler.error_count(rng, scratch) >= m),
            ties: 0,
        },
    )?;
    Ok(SimResult::new(
        tally.errors,
        0,
        cfg.trials,
        EstimateMode::Threshold,
    ))
}

/// Fraction of trials in which decoding the corrupted true codeword picks
/// another class. A lowest-index tie that lands on the true class counts as correct.
pub fn mc_decode_error(
    model: &DependenceModel,
    code: &CodeMatrix,
    true_class: TrueClass,
    tie_policy: TiePolicy,
    cfg: &SimConfig,
) -> Result<SimResult> {
    if model.n() != code.n() {
        return Err(EcocError::argument(format!(
            "model has {} classifiers, code has {} columns",
            model.n(),
            code.n()
        )));
    }
    if let TrueClass::Fixed(c) = true_class {
        if c >= code.classes() {
            return Err(EcocError::argument(format!(
                "class {c} out of range for {} classes",
                code.classes()
            )));
        }
    }
    let sampler = OutcomeSampler::new(model);
    let n = code.n();
    let words = code.words();
    let tally = run_trials(
        cfg,
        || (vec![0u8; n], vec![0u64; words]),
        |rng, (bits, packed)| {
            let class = match true_class {
                TrueClass::Uniform => rng.random_range(0..code.classes()),
                TrueClass::Fixed(c) => c,
            };
            sampler.sample_into(rng, bits);
            packed.copy_from_slice(code.packed_row(class));
            for (i, &b) in bits.iter().enumerate() {
                packed[i / 64] ^= u64::from(b) << (i % 64);
            }
            let decoded = code.decode_packed(packed, tie_policy);
            Tally {
                errors: u64::from(decoded.class != class),
                ties: u64::from(decoded.tie),
            }
        },
    )?;
    Ok(SimResult::new(
        tally.errors,
        tally.ties,
        cfg.trials,
        EstimateMode::FullDecode,
    ))
}

/// Histogram of the sampled error count over `cfg.trials` draws.
pub fn error_count_histogram(model: &DependenceModel, cfg: &SimConfig) -> Result<Vec<u64>> {
    cfg.validate()?;
    let sampler = OutcomeSampler::new(model);
    let n = model.n();
    let base = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut hist = vec![0u64; n + 1];
    let mut scratch = vec![0u8; n];
    let mut rng = base;
    for _ in 0..cfg.trials {
        hist[sampler.error_count(&mut rng, &mut scratch)] += 1;
    }
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code_matrix::{build_code_matrix, Orientation};
    use crate::prob::{ErrorProfile, ExchangeableModel, PairModel};

    fn iid(n: usize, e: f64) -> DependenceModel {
        DependenceModel::Independent(ErrorProfile::iid(n, e).unwrap())
    }

    #[test]
    fn degenerate_rates_give_constant_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(sample_outcome(&iid(6, 0.0), &mut rng), vec![0; 6]);
            assert_eq!(sample_outcome(&iid(6, 1.0), &mut rng), vec![1; 6]);
        }
    }

    #[test]
    fn zero_error_models_never_fail() {
        let cfg = SimConfig::new(5_000, 3);
        let r = mc_threshold_error(&iid(10, 0.0), 1, &cfg).unwrap();
        assert_eq!((r.errors, r.error_rate, r.std_err), (0, 0.0, 0.0));
        let code = build_code_matrix(10, Orientation::default()).unwrap();
        let d = mc_decode_error(
            &iid(10, 0.0),
            &code,
            TrueClass::Uniform,
            TiePolicy::LowestIndex,
            &cfg,
        )
        .unwrap();
        assert_eq!(d.errors, 0);
    }

    #[test]
    fn strict_mode_ignores_worker_count() {
        let model = DependenceModel::Exchangeable(ExchangeableModel::new(10, 0.1, 0.05).unwrap());
        let one = SimConfig::new(20_000, 99);
        let a = mc_threshold_error(&model, 3, &one).unwrap();
        let b = mc_threshold_error(&model, 3, &one.with_workers(4)).unwrap();
        assert_eq!(a, b);
        let again = mc_threshold_error(&model, 3, &one).unwrap();
        assert_eq!(a, again);
    }

    #[test]
    fn fast_mode_is_reproducible_for_fixed_workers() {
        let model = iid(12, 0.2);
        let cfg = SimConfig::new(30_000, 5)
            .with_workers(3)
            .with_determinism(Determinism::Fast);
        let a = mc_threshold_error(&model, 4, &cfg).unwrap();
        let b = mc_threshold_error(&model, 4, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pair_sampler_matches_joint_table() {
        let model = DependenceModel::CorrelatedPair(PairModel::iid(3, 0.3, 0.2).unwrap());
        let sampler = OutcomeSampler::new(&model);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut both = 0u32;
        let mut out = [0u8; 3];
        let draws = 200_000;
        for _ in 0..draws {
            sampler.sample_into(&mut rng, &mut out);
            both += u32::from(out[1] == 1 && out[2] == 1);
        }
        let p = f64::from(both) / draws as f64;
        let se = (0.2f64 * 0.8 / draws as f64).sqrt();
        assert!((p - 0.2).abs() < 4.0 * se, "{p}");
    }

    #[test]
    fn rejects_bad_configs() {
        let model = iid(5, 0.1);
        assert!(mc_threshold_error(&model, 6, &SimConfig::new(10, 0)).is_err());
        assert!(mc_threshold_error(&model, 2, &SimConfig::new(0, 0)).is_err());
        assert!(mc_threshold_error(&model, 2, &SimConfig::new(10, 0).with_workers(0)).is_err());
        let code = build_code_matrix(10, Orientation::default()).unwrap();
        let cfg = SimConfig::new(10, 0);
        assert!(mc_decode_error(
            &model,
            &code,
            TrueClass::Uniform,
            TiePolicy::LowestIndex,
            &cfg
        )
        .is_err());
        let model = iid(10, 0.1);
        assert!(mc_decode_error(
            &model,
            &code,
            TrueClass::Fixed(10),
            TiePolicy::LowestIndex,
            &cfg
        )
        .is_err());
    }

    #[test]
    fn decode_never_worse_than_threshold_on_same_streams() {
        // With a fixed class both modes consume the same stream per trial,
        // and fewer than m flips are always corrected.
        let model = iid(10, 0.15);
        let code = build_code_matrix(10, Orientation::default()).unwrap();
        let cfg = SimConfig::new(50_000, 8);
        let t = mc_threshold_error(&model, code.m(), &cfg).unwrap();
        let d = mc_decode_error(
            &model,
            &code,
            TrueClass::Fixed(3),
            TiePolicy::ReportTie,
            &cfg,
        )
        .unwrap();
        assert!(d.errors <= t.errors, "{} > {}", d.errors, t.errors);
        assert!(d.ties > 0);
    }
}
