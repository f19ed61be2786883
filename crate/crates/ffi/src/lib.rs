//! C ABI for `ecoc-core`.
//!
//! Every fallible function returns an [`EcocStatus`] and writes results
//! through out-pointers. On failure the message is kept per thread and can
//! be read with [`ecoc_last_error_message`]. Handles are opaque and must be
//! released with their `_free` function.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ecoc::bounds::{kz_bound_corrected, BoundInputs, KzGate};
use ecoc::code_matrix::build_code_matrix;
use ecoc::error::EcocError;
use ecoc::prob::{bahadur_range, binomial_pmf, exchangeable_tail, pair_correlated_tail, tail_iid};
use ecoc::simulator::{mc_decode_error, mc_threshold_error, DEFAULT_SEED};
use ecoc::{
    CodeMatrix, DependenceModel, Determinism, ErrorProfile, ExchangeableModel, Orientation,
    PairModel, SimConfig, SimResult, TiePolicy, TrueClass,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EcocStatus {
    Ok = 0,
    Argument = 1,
    Size = 2,
    Model = 3,
    Domain = 4,
    Parse = 5,
    Io = 6,
    NullPointer = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EcocOrientation {
    KeepBottomRight = 0,
    KeepTopLeft = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EcocTiePolicy {
    LowestIndex = 0,
    ReportTie = 1,
}

/// Why the KZ bound was withheld; `None` when it applies.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EcocKzGate {
    None = 0,
    NoCorrelation = 1,
    NegativeCorrelation = 2,
    RateAboveThreshold = 3,
    OutsideBahadurRange = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EcocDecoded {
    pub class_index: usize,
    pub distance: usize,
    pub tie: bool,
}

/// Bounds for one parameter set. `has_*` flags mark optional values; the
/// value field is NaN when its flag is false.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcocBoundReport {
    pub gs: f64,
    pub has_feller: bool,
    pub feller: f64,
    pub has_chernoff_mu: bool,
    pub chernoff_mu: f64,
    pub chernoff: f64,
    pub has_kz: bool,
    pub kz: f64,
    pub kz_gate: EcocKzGate,
    pub has_kz_formula: bool,
    pub kz_formula: f64,
    pub lambda: f64,
    pub omega: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EcocSimConfig {
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
    /// One RNG stream per worker: reproducible only for a fixed worker count.
    pub fast: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EcocSimResult {
    pub error_rate: f64,
    pub std_err: f64,
    pub trials: u64,
    pub errors: u64,
    pub ties: u64,
}

pub struct EcocCodeMatrix(CodeMatrix);

pub struct EcocModel(DependenceModel);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn status_of(err: &EcocError) -> EcocStatus {
    match err {
        EcocError::Argument(_) => EcocStatus::Argument,
        EcocError::Size(_) => EcocStatus::Size,
        EcocError::Model(_) => EcocStatus::Model,
        EcocError::Domain(_) => EcocStatus::Domain,
        EcocError::Parse { .. } => EcocStatus::Parse,
        EcocError::Io { .. } => EcocStatus::Io,
    }
}

enum Failure {
    Core(EcocError),
    Null(&'static str),
}

impl From<EcocError> for Failure {
    fn from(err: EcocError) -> Self {
        Failure::Core(err)
    }
}

/// Runs `body`, translating errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> EcocStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => EcocStatus::Ok,
        Ok(Err(Failure::Core(err))) => {
            let status = status_of(&err);
            set_last_error(err.to_string());
            status
        }
        Ok(Err(Failure::Null(name))) => {
            set_last_error(format!("`{name}` is null"));
            EcocStatus::NullPointer
        }
        Err(payload) => {
            let text = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("internal panic: {text}"));
            EcocStatus::Panic
        }
    }
}

unsafe fn out_ref<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(name))
}

unsafe fn in_ref<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(name))
}

unsafe fn in_slice<'a, T>(p: *const T, len: usize, name: &'static str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(name));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn out_slice<'a, T>(
    p: *mut T,
    len: usize,
    name: &'static str,
) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(Failure::Null(name));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

fn write_scalar(out: *mut f64, f: impl FnOnce() -> ecoc::error::Result<f64>) -> EcocStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out") }?;
        *out = f()?;
        Ok(())
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ecoc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (truncated and
/// always NUL-terminated when `len > 0`). Returns the full message length
/// including the terminator, or 0 if there is no message.
#[no_mangle]
pub unsafe extern "C" fn ecoc_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let slot = slot.borrow();
        let Some(message) = slot.as_ref() else {
            return 0;
        };
        let bytes = message.as_bytes_with_nul();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n - 1) = 0;
        }
        bytes.len()
    })
}

#[no_mangle]
pub extern "C" fn ecoc_clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

#[no_mangle]
pub unsafe extern "C" fn ecoc_code_matrix_build(
    classes: usize,
    orientation: EcocOrientation,
    out: *mut *mut EcocCodeMatrix,
) -> EcocStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let orientation = match orientation {
            EcocOrientation::KeepBottomRight => Orientation::KeepBottomRight,
            EcocOrientation::KeepTopLeft => Orientation::KeepTopLeft,
        };
        let code = build_code_matrix(classes, orientation)?;
        *out = Box::into_raw(Box::new(EcocCodeMatrix(code)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ecoc_code_matrix_free(code: *mut EcocCodeMatrix) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Number of classes (rows); 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ecoc_code_matrix_classes(code: *const EcocCodeMatrix) -> usize {
    code.as_ref().map_or(0, |c| c.0.classes())
}

/// Number of classifiers (columns); 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ecoc_code_matrix_n(code: *const EcocCodeMatrix) -> usize {
    code.as_ref().map_or(0, |c| c.0.n())
}

/// Minimum row distance; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ecoc_code_matrix_d(code: *const EcocCodeMatrix) -> usize {
    code.as_ref().map_or(0, |c| c.0.d())
}

/// `d / 2`; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ecoc_code_matrix_m(code: *const EcocCodeMatrix) -> usize {
    code.as_ref().map_or(0, |c| c.0.m())
}

/// Copies the codeword of `class_index` into `out`, which must hold `n` bytes.
#[no_mangle]
pub unsafe extern "C" fn ecoc_code_matrix_codeword(
    code: *const EcocCodeMatrix,
    class_index: usize,
    out: *mut u8,
    len: usize,
) -> EcocStatus {
    guard(|| {
        let code = &in_ref(code, "code")?.0;
        if class_index >= code.classes() {
            return Err(EcocError::Argument(format!(
                "class {class_index} out of range for {} classes",
                code.classes()
            ))
            .into());
        }
        if len != code.n() {
            return Err(EcocError::Argument(format!(
                "buffer holds {len} bits, codeword has {}",
                code.n()
            ))
            .into());
        }
        out_slice(out, len, "out")?.copy_from_slice(code.codeword(class_index));
        Ok(())
    })
}

/// Nearest-codeword decoding of a 0/1 word of length `n`.
#[no_mangle]
pub unsafe extern "C" fn ecoc_code_matrix_decode(
    code: *const EcocCodeMatrix,
    word: *const u8,
    len: usize,
    tie_policy: EcocTiePolicy,
    out: *mut EcocDecoded,
) -> EcocStatus {
    guard(|| {
        let code = &in_ref(code, "code")?.0;
        let word = in_slice(word, len, "word")?;
        let out = out_ref(out, "out")?;
        let policy = match tie_policy {
            EcocTiePolicy::LowestIndex => TiePolicy::LowestIndex,
            EcocTiePolicy::ReportTie => TiePolicy::ReportTie,
        };
        let d = code.decode(word, policy)?;
        *out = EcocDecoded {
            class_index: d.class,
            distance: d.distance,
            tie: d.tie,
        };
        Ok(())
    })
}

unsafe fn emit_model(out: *mut *mut EcocModel, model: DependenceModel) -> Result<(), Failure> {
    *out_ref(out, "out")? = Box::into_raw(Box::new(EcocModel(model)));
    Ok(())
}

/// Independent classifiers with per-classifier error rates.
#[no_mangle]
pub unsafe extern "C" fn ecoc_model_independent(
    rates: *const f64,
    n: usize,
    out: *mut *mut EcocModel,
) -> EcocStatus {
    guard(|| {
        let profile = ErrorProfile::new(in_slice(rates, n, "rates")?.to_vec())?;
        emit_model(out, DependenceModel::Independent(profile))
    })
}

/// The last two classifiers are correlated with joint error probability `f`;
/// the rest are independent.
#[no_mangle]
pub unsafe extern "C" fn ecoc_model_pair(
    rates: *const f64,
    n: usize,
    f: f64,
    out: *mut *mut EcocModel,
) -> EcocStatus {
    guard(|| {
        let profile = ErrorProfile::new(in_slice(rates, n, "rates")?.to_vec())?;
        let model = PairModel::new(profile, f)?;
        emit_model(out, DependenceModel::CorrelatedPair(model))
    })
}

/// `n` exchangeable classifiers with common rate `e_bar` and pairwise correlation `c`.
#[no_mangle]
pub unsafe extern "C" fn ecoc_model_exchangeable(
    n: usize,
    e_bar: f64,
    c: f64,
    out: *mut *mut EcocModel,
) -> EcocStatus {
    guard(|| {
        let model = ExchangeableModel::new(n, e_bar, c)?;
        emit_model(out, DependenceModel::Exchangeable(model))
    })
}

#[no_mangle]
pub unsafe extern "C" fn ecoc_model_free(model: *mut EcocModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Number of classifiers; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ecoc_model_n(model: *const EcocModel) -> usize {
    model.as_ref().map_or(0, |m| m.0.n())
}

/// Probability of exactly `k` errors.
#[no_mangle]
pub unsafe extern "C" fn ecoc_model_pmf(
    model: *const EcocModel,
    k: usize,
    out: *mut f64,
) -> EcocStatus {
    guard(|| {
        let model = &in_ref(model, "model")?.0;
        *out_ref(out, "out")? = model.pmf(k)?;
        Ok(())
    })
}

/// Probability of at least `m` errors.
#[no_mangle]
pub unsafe extern "C" fn ecoc_model_tail(
    model: *const EcocModel,
    m: usize,
    out: *mut f64,
) -> EcocStatus {
    guard(|| {
        let model = &in_ref(model, "model")?.0;
        *out_ref(out, "out")? = model.tail(m)?;
        Ok(())
    })
}

/// Writes the full error-count distribution; `out` must hold `n + 1` values.
#[no_mangle]
pub unsafe extern "C" fn ecoc_model_distribution(
    model: *const EcocModel,
    out: *mut f64,
    len: usize,
) -> EcocStatus {
    guard(|| {
        let model = &in_ref(model, "model")?.0;
        let dist = model.distribution();
        if len != dist.len() {
            return Err(EcocError::Argument(format!(
                "buffer holds {len} values, distribution has {}",
                dist.len()
            ))
            .into());
        }
        out_slice(out, len, "out")?.copy_from_slice(&dist);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ecoc_binomial_pmf(
    n: usize,
    k: usize,
    e: f64,
    out: *mut f64,
) -> EcocStatus {
    write_scalar(out, || binomial_pmf(n, k, e))
}

#[no_mangle]
pub unsafe extern "C" fn ecoc_tail_iid(n: usize, m: usize, e: f64, out: *mut f64) -> EcocStatus {
    write_scalar(out, || tail_iid(n, m, e))
}

#[no_mangle]
pub unsafe extern "C" fn ecoc_pair_correlated_tail(
    n: usize,
    m: usize,
    e: f64,
    f: f64,
    out: *mut f64,
) -> EcocStatus {
    write_scalar(out, || pair_correlated_tail(n, m, e, f))
}

#[no_mangle]
pub unsafe extern "C" fn ecoc_exchangeable_tail(
    n: usize,
    m: usize,
    e_bar: f64,
    c: f64,
    out: *mut f64,
) -> EcocStatus {
    write_scalar(out, || exchangeable_tail(n, m, e_bar, c))
}

/// Admissible correlation interval for `n` exchangeable classifiers.
#[no_mangle]
pub unsafe extern "C" fn ecoc_bahadur_range(
    n: usize,
    e_bar: f64,
    lower: *mut f64,
    upper: *mut f64,
) -> EcocStatus {
    guard(|| {
        let lower = out_ref(lower, "lower")?;
        let upper = out_ref(upper, "upper")?;
        let range = bahadur_range(n, e_bar)?;
        *lower = range.lower;
        *upper = range.upper;
        Ok(())
    })
}

/// All bounds for `(n, m, e_bar)`. `c` and `mu` are optional (may be null).
#[no_mangle]
pub unsafe extern "C" fn ecoc_bounds(
    n: usize,
    m: usize,
    e_bar: f64,
    c: *const f64,
    mu: *const f64,
    out: *mut EcocBoundReport,
) -> EcocStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let mut inputs = BoundInputs::new(n, m, e_bar);
        if let Some(&c) = c.as_ref() {
            inputs = inputs.with_correlation(c);
        }
        if let Some(&mu) = mu.as_ref() {
            inputs = inputs.with_mu(mu);
        }
        let r = inputs.evaluate()?;
        let split = |v: Option<f64>| (v.is_some(), v.unwrap_or(f64::NAN));
        let (has_feller, feller) = split(r.feller);
        let (has_chernoff_mu, chernoff_mu) = split(r.chernoff_mu);
        let (has_kz, kz) = split(r.kz);
        let (has_kz_formula, kz_formula) = split(r.kz_formula);
        *out = EcocBoundReport {
            gs: r.gs,
            has_feller,
            feller,
            has_chernoff_mu,
            chernoff_mu,
            chernoff: r.chernoff_lambda,
            has_kz,
            kz,
            kz_gate: match r.kz_gate {
                None => EcocKzGate::None,
                Some(KzGate::NoCorrelation) => EcocKzGate::NoCorrelation,
                Some(KzGate::NegativeCorrelation) => EcocKzGate::NegativeCorrelation,
                Some(KzGate::RateAboveThreshold) => EcocKzGate::RateAboveThreshold,
                Some(KzGate::OutsideBahadurRange) => EcocKzGate::OutsideBahadurRange,
            },
            has_kz_formula,
            kz_formula,
            lambda: r.lambda,
            omega: r.omega,
        };
        Ok(())
    })
}

/// KZ bound with the correlation term scaled by `r/ē`.
#[no_mangle]
pub unsafe extern "C" fn ecoc_kz_bound_corrected(
    n: usize,
    m: usize,
    e_bar: f64,
    c: f64,
    out: *mut f64,
) -> EcocStatus {
    write_scalar(out, || kz_bound_corrected(n, m, e_bar, c))
}

/// 100 000 trials, the default seed, one worker, strict determinism.
#[no_mangle]
pub extern "C" fn ecoc_sim_config_default() -> EcocSimConfig {
    EcocSimConfig {
        trials: 100_000,
        seed: DEFAULT_SEED,
        workers: 1,
        fast: false,
    }
}

fn sim_config(cfg: &EcocSimConfig) -> SimConfig {
    SimConfig::new(cfg.trials, cfg.seed)
        .with_workers(cfg.workers)
        .with_determinism(if cfg.fast {
            Determinism::Fast
        } else {
            Determinism::Strict
        })
}

fn sim_result(r: SimResult) -> EcocSimResult {
    EcocSimResult {
        error_rate: r.error_rate,
        std_err: r.std_err,
        trials: r.trials,
        errors: r.errors,
        ties: r.ties,
    }
}

/// Monte Carlo estimate of `P(at least m errors)`.
#[no_mangle]
pub unsafe extern "C" fn ecoc_simulate_threshold(
    model: *const EcocModel,
    m: usize,
    config: *const EcocSimConfig,
    out: *mut EcocSimResult,
) -> EcocStatus {
    guard(|| {
        let model = &in_ref(model, "model")?.0;
        let cfg = sim_config(in_ref(config, "config")?);
        let out = out_ref(out, "out")?;
        *out = sim_result(mc_threshold_error(model, m, &cfg)?);
        Ok(())
    })
}

/// Monte Carlo decoding error. A negative `true_class` draws the class
/// uniformly in every trial.
#[no_mangle]
pub unsafe extern "C" fn ecoc_simulate_decode(
    model: *const EcocModel,
    code: *const EcocCodeMatrix,
    true_class: i64,
    tie_policy: EcocTiePolicy,
    config: *const EcocSimConfig,
    out: *mut EcocSimResult,
) -> EcocStatus {
    guard(|| {
        let model = &in_ref(model, "model")?.0;
        let code = &in_ref(code, "code")?.0;
        let cfg = sim_config(in_ref(config, "config")?);
        let out = out_ref(out, "out")?;
        let true_class = if true_class < 0 {
            TrueClass::Uniform
        } else {
            TrueClass::Fixed(true_class as usize)
        };
        let policy = match tie_policy {
            EcocTiePolicy::LowestIndex => TiePolicy::LowestIndex,
            EcocTiePolicy::ReportTie => TiePolicy::ReportTie,
        };
        *out = sim_result(mc_decode_error(model, code, true_class, policy, &cfg)?);
        Ok(())
    })
}
