//! C ABI over the `errstat` library.
//!
//! Every function returns an [`ErrstatStatus`] and writes its result through
//! an out-pointer. On failure the message is kept per thread and can be read
//! with [`errstat_last_error_message`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use errstat::cli::{self, AnalyzeArgs};
use errstat::decision_cost::{self, CostParams};
use errstat::error_tradeoff::{self, GaussianTestModel};
use errstat::mc_oracle::{self, Execution, SimConfig};
use errstat::pvalue_dist::{self, AlternativeSpec, ObservedResult};
use errstat::screening::{self, PriorOdds, ScreeningParams};
use errstat::severity::{self, ReferenceDist, SeverityClaim, SummaryStats};
use errstat::timeseries::{self, Series};
use errstat::{distributions, Error, Tail};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrstatStatus {
    Ok = 0,
    Domain = 1,
    Infeasible = 2,
    Degenerate = 3,
    Parse = 4,
    Io = 5,
    NullPointer = 6,
    InvalidUtf8 = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrstatTail {
    OneSided = 0,
    TwoSided = 1,
}

impl From<ErrstatTail> for Tail {
    fn from(t: ErrstatTail) -> Tail {
        match t {
            ErrstatTail::OneSided => Tail::OneSidedUpper,
            ErrstatTail::TwoSided => Tail::TwoSided,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrstatReference {
    Normal = 0,
    StudentT = 1,
}

impl From<ErrstatReference> for ReferenceDist {
    fn from(r: ErrstatReference) -> ReferenceDist {
        match r {
            ErrstatReference::Normal => ReferenceDist::Normal,
            ErrstatReference::StudentT => ReferenceDist::StudentT,
        }
    }
}

/// Costs, prior of a true null and the two Gaussian statistic distributions.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ErrstatCostParams {
    pub p0: f64,
    pub p1: f64,
    pub phi: f64,
    pub mu0: f64,
    pub mu1: f64,
    pub sigma: f64,
}

impl ErrstatCostParams {
    fn to_lib(self) -> Result<CostParams, Error> {
        CostParams::new(self.p0, self.p1, self.phi, self.mu0, self.mu1, self.sigma)
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ErrstatLagFit {
    pub tau: usize,
    pub beta0: f64,
    pub beta1: f64,
    pub stderr_beta1: f64,
    pub r: f64,
    pub n_pairs: usize,
    pub t_stat: f64,
    pub p_two_sided_t: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ErrstatSimConfig {
    pub num_trials: u64,
    pub seed: u64,
    pub prior_null: f64,
    pub alpha: f64,
    pub effect_size: f64,
    pub n_per_study: u32,
    pub tail: ErrstatTail,
    /// Nonzero runs all chunks on the calling thread.
    pub serial: u8,
}

/// Confusion counts and rates. A rate is meaningful only when its `has_`
/// flag is 1; otherwise its denominator was zero.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ErrstatSimOutcome {
    pub num_trials: u64,
    pub true_pos: u64,
    pub false_pos: u64,
    pub true_neg: u64,
    pub false_neg: u64,
    pub has_fpr: u8,
    pub empirical_fpr: f64,
    pub mc_stderr_fpr: f64,
    pub has_power: u8,
    pub empirical_power: f64,
    pub mc_stderr_power: f64,
    pub has_size: u8,
    pub empirical_size: f64,
    pub mc_stderr_size: f64,
}

/// Opaque time series.
pub struct ErrstatSeries {
    inner: Series,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> ErrstatStatus {
    match e {
        Error::Domain(_) => ErrstatStatus::Domain,
        Error::Infeasible(_) => ErrstatStatus::Infeasible,
        Error::Degenerate(_) => ErrstatStatus::Degenerate,
        Error::Parse { .. } => ErrstatStatus::Parse,
        Error::Io(_) => ErrstatStatus::Io,
    }
}

struct Failure(ErrstatStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null_pointer(name: &str) -> Failure {
    Failure(ErrstatStatus::NullPointer, format!("{name} is null"))
}

/// Runs `f` behind a panic guard and records any failure message.
fn guard<F>(f: F) -> ErrstatStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            clear_last_error();
            ErrstatStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| (*s).to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_last_error(&format!("panic: {msg}"));
            ErrstatStatus::Panic
        }
    }
}

fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null_pointer("out"));
    }
    // SAFETY: non-null and, by the caller's contract, valid for writes.
    unsafe { out.write(value) };
    Ok(())
}

fn scalar<F>(out: *mut f64, f: F) -> ErrstatStatus
where
    F: FnOnce() -> Result<f64, Error>,
{
    guard(|| {
        if out.is_null() {
            return Err(null_pointer("out"));
        }
        let v = f()?;
        write_out(out, v)
    })
}

/// Message of the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn errstat_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn errstat_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn errstat_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: allocated by CString::into_raw in this crate.
        drop(unsafe { CString::from_raw(s) });
    }
}

// distributions

/// # Safety
/// `out` must be valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn errstat_normal_cdf(x: f64, out: *mut f64) -> ErrstatStatus {
    scalar(out, || distributions::normal_cdf(x))
}

/// # Safety
/// `out` must be valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn errstat_normal_quantile(p: f64, out: *mut f64) -> ErrstatStatus {
    scalar(out, || distributions::normal_quantile(p))
}

/// # Safety
/// `out` must be valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn errstat_student_t_cdf(x: f64, df: u32, out: *mut f64) -> ErrstatStatus {
    scalar(out, || distributions::student_t_cdf(x, df))
}

/// # Safety
/// `out` must be valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn errstat_student_t_quantile(p: f64, df: u32, out: *mut f64) -> ErrstatStatus {
    scalar(out, || distributions::student_t_quantile(p, df))
}

// error trade-off

/// # Safety
/// `out` must be valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn errstat_type2_error(
    alpha: f64,
    effect_size: f64,
    n: u32,
    tail: ErrstatTail,
    out: *mut f64,
) -> ErrstatStatus {
    scalar(out, || {
        let model = GaussianTestModel::new(effect_size, n, tail.into())?;
        error_tradeoff::type2_error(alpha, &model)
    })
}

/// # Safety
/// `out` must be valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn errstat_power(
    alpha: f64,
    effect_size: f64,
    n: u32,
    tail: ErrstatTail,
    out: *mut f64,
) -> ErrstatStatus {
    scalar(out, || {
        let model = GaussianTestModel::new(effect_size, n, tail.into())?;
        error_tradeoff::power(alpha, &model)
    })
}

/// # Safety
/// `out` must be valid for writing one `uint64_t`.
#[no_mangle]
pub unsafe extern "C" fn errstat_required_sample_size(
    alpha: f64,
    beta: f64,
    mu_star: f64,
    sigma: f64,
    out: *mut u64,
) -> ErrstatStatus {
    guard(|| {
        let n = error_tradeoff::required_sample_size(alpha, beta, mu_star, sigma)?;
        write_out(out, n)
    })
}

// screening

/// # Safety
/// `out` must be valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn errstat_false_positive_rate(
    alpha: f64,
    power: f64,
    prior_null: f64,
    out: *mut f64,
) -> ErrstatStatus {
    scalar(out, || {
        Ok(screening::false_positive_rate(&ScreeningParams::new(alpha, power, prior_null)?))
    })
}

/// # Safety
/// `out` must be valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn errstat_false_positive_rate_odds(
    alpha: f64,
    power: f64,
    odds: f64,
    out: *mut f64,
) -> ErrstatStatus {
    scalar(out, || screening::false_positive_rate_odds(alpha, power, PriorOdds::new(odds)?))
}

/// # Safety
/// `out` must be valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn errstat_replication_threshold_factor(
    gamma: f64,
    n_fold: f64,
    out: *mut f64,
) -> ErrstatStatus {
    scalar(out, || screening::replication_threshold_factor(gamma, n_fold))
}

/// # Safety
/// `out` must be valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn errstat_gamma_for_factor(r: f64, n_fold: f64, out: *mut f64) -> ErrstatStatus {
    scalar(out, || screening::gamma_for_factor(r, n_fold))
}

// decision cost

/// # Safety
/// `params` must point to a valid struct and `out` be valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn errstat_expected_cost(
    c: f64,
    params: *const ErrstatCostParams,
    out: *mut f64,
) -> ErrstatStatus {
    guard(|| {
        // SAFETY: caller contract.
        let params = unsafe { params.as_ref() }.ok_or_else(|| null_pointer("params"))?;
        write_out(out, decision_cost::expected_cost(c, &params.to_lib()?))
    })
}

/// Closed-form cost-minimizing critical value.
///
/// # Safety
/// `params` must point to a valid struct and `out` be valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn errstat_cost_minimizer(
    params: *const ErrstatCostParams,
    out: *mut f64,
) -> ErrstatStatus {
    guard(|| {
        // SAFETY: caller contract.
        let params = unsafe { params.as_ref() }.ok_or_else(|| null_pointer("params"))?;
        write_out(out, decision_cost::closed_form_minimizer(&params.to_lib()?)?)
    })
}

// p-value distribution

/// # Safety
/// `out` must be valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn errstat_pvalue_pdf(p: f64, delta: f64, n: u32, out: *mut f64) -> ErrstatStatus {
    scalar(out, || pvalue_dist::pdf_under_alternative(p, &AlternativeSpec::new(delta, n)?))
}

/// # Safety
/// `out` must be valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn errstat_pvalue_cdf(p: f64, delta: f64, n: u32, out: *mut f64) -> ErrstatStatus {
    scalar(out, || pvalue_dist::cdf_under_alternative(p, &AlternativeSpec::new(delta, n)?))
}

/// Reproducibility probability of an observed standardized statistic.
///
/// # Safety
/// `out` must be valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn errstat_reproducibility_probability(
    d_obs: f64,
    alpha: f64,
    out: *mut f64,
) -> ErrstatStatus {
    scalar(out, || pvalue_dist::reproducibility_probability(&ObservedResult::Statistic(d_obs), alpha))
}

// severity

/// Severity of the claim `parameter > bound`.
///
/// # Safety
/// `out` must be valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn errstat_severity(
    estimate: f64,
    stderr: f64,
    df: u32,
    bound: f64,
    reference: ErrstatReference,
    out: *mut f64,
) -> ErrstatStatus {
    scalar(out, || {
        let stats = SummaryStats::new(estimate, stderr, df.saturating_add(2), df)?;
        severity::severity(&stats, &SeverityClaim::greater_than(bound), reference.into())
    })
}

/// # Safety
/// `out` must be valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn errstat_confidence_lower_limit(
    estimate: f64,
    stderr: f64,
    df: u32,
    level: f64,
    reference: ErrstatReference,
    out: *mut f64,
) -> ErrstatStatus {
    scalar(out, || {
        let stats = SummaryStats::new(estimate, stderr, df.saturating_add(2), df)?;
        severity::confidence_lower_limit(&stats, level, reference.into())
    })
}

/// Full summary report as a JSON string; release it with [`errstat_string_free`].
/// `has_claim = 0` uses the 95% lower confidence limit as the claim bound.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn errstat_analyze_summary_json(
    estimate: f64,
    stderr: f64,
    has_claim: u8,
    claim: f64,
    alpha: f64,
    out: *mut *mut c_char,
) -> ErrstatStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_pointer("out"));
        }
        let args = AnalyzeArgs {
            csv: None,
            tau: 1,
            estimate: Some(estimate),
            stderr: Some(stderr),
            n: None,
            df: None,
            claim: (has_claim != 0).then_some(claim),
            alpha,
            level: 0.95,
            sev_grid: None,
        };
        let report = cli::cmd_analyze(&args).map_err(|e| {
            let status = match e.code {
                cli::EXIT_INFEASIBLE => ErrstatStatus::Infeasible,
                cli::EXIT_IO => ErrstatStatus::Io,
                _ => ErrstatStatus::Domain,
            };
            Failure(status, e.message)
        })?;
        let text = CString::new(report.to_string()).expect("JSON has no NUL bytes");
        write_out(out, text.into_raw())
    })
}

// time series

/// Copies `len` values into a new series.
///
/// # Safety
/// `values` must be valid for reading `len` doubles; `out` for one pointer.
#[no_mangle]
pub unsafe extern "C" fn errstat_series_new(
    values: *const f64,
    len: usize,
    start_label: i64,
    out: *mut *mut ErrstatSeries,
) -> ErrstatStatus {
    guard(|| {
        if values.is_null() {
            return Err(null_pointer("values"));
        }
        if out.is_null() {
            return Err(null_pointer("out"));
        }
        // SAFETY: caller contract.
        let slice = unsafe { std::slice::from_raw_parts(values, len) };
        let inner = Series::new(slice.to_vec(), start_label)?;
        write_out(out, Box::into_raw(Box::new(ErrstatSeries { inner })))
    })
}

/// Reads a `label,value` CSV file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` valid for one pointer.
#[no_mangle]
pub unsafe extern "C" fn errstat_series_from_csv(
    path: *const c_char,
    out: *mut *mut ErrstatSeries,
) -> ErrstatStatus {
    guard(|| {
        if path.is_null() {
            return Err(null_pointer("path"));
        }
        if out.is_null() {
            return Err(null_pointer("out"));
        }
        // SAFETY: caller contract.
        let path = unsafe { CStr::from_ptr(path) }
            .to_str()
            .map_err(|_| Failure(ErrstatStatus::InvalidUtf8, "path is not valid UTF-8".into()))?;
        let inner = Series::from_csv_path(path)?;
        write_out(out, Box::into_raw(Box::new(ErrstatSeries { inner })))
    })
}

/// # Safety
/// `series` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn errstat_series_free(series: *mut ErrstatSeries) {
    if !series.is_null() {
        // SAFETY: allocated by Box::into_raw above.
        drop(unsafe { Box::from_raw(series) });
    }
}

/// Number of observations, or 0 for a null handle.
///
/// # Safety
/// `series` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn errstat_series_len(series: *const ErrstatSeries) -> usize {
    // SAFETY: caller contract.
    unsafe { series.as_ref() }.map_or(0, |s| s.inner.len())
}

/// # Safety
/// `series` must be a live handle and `out` valid for one struct.
#[no_mangle]
pub unsafe extern "C" fn errstat_lag_regression(
    series: *const ErrstatSeries,
    tau: usize,
    out: *mut ErrstatLagFit,
) -> ErrstatStatus {
    guard(|| {
        // SAFETY: caller contract.
        let series = unsafe { series.as_ref() }.ok_or_else(|| null_pointer("series"))?;
        let fit = timeseries::lag_regression(&series.inner, tau)?;
        write_out(
            out,
            ErrstatLagFit {
                tau: fit.tau,
                beta0: fit.beta0,
                beta1: fit.beta1,
                stderr_beta1: fit.stderr_beta1,
                r: fit.r,
                n_pairs: fit.n_pairs,
                t_stat: fit.t_stat,
                p_two_sided_t: fit.p_two_sided_t,
            },
        )
    })
}

/// # Safety
/// `series` must be a live handle and `out` valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn errstat_autocorrelation(
    series: *const ErrstatSeries,
    tau: usize,
    out: *mut f64,
) -> ErrstatStatus {
    guard(|| {
        // SAFETY: caller contract.
        let series = unsafe { series.as_ref() }.ok_or_else(|| null_pointer("series"))?;
        let r = timeseries::autocorrelation(&series.inner, tau)?;
        write_out(out, r)
    })
}

// simulation

/// # Safety
/// `config` must point to a valid struct and `out` be valid for one struct.
#[no_mangle]
pub unsafe extern "C" fn errstat_simulate_studies(
    config: *const ErrstatSimConfig,
    out: *mut ErrstatSimOutcome,
) -> ErrstatStatus {
    guard(|| {
        // SAFETY: caller contract.
        let c = unsafe { config.as_ref() }.ok_or_else(|| null_pointer("config"))?;
        if out.is_null() {
            return Err(null_pointer("out"));
        }
        let lib = SimConfig {
            num_trials: c.num_trials,
            seed: c.seed,
            prior_null: c.prior_null,
            alpha: c.alpha,
            effect_size: c.effect_size,
            n_per_study: c.n_per_study,
            tail: c.tail.into(),
        };
        let execution = if c.serial != 0 { Execution::Serial } else { Execution::Parallel };
        let o = mc_oracle::simulate_studies_with(&lib, execution)?;
        let split = |v: Option<f64>, s: Option<f64>| match (v, s) {
            (Some(v), Some(s)) => (1, v, s),
            _ => (0, 0.0, 0.0),
        };
        let (has_fpr, empirical_fpr, mc_stderr_fpr) = split(o.empirical_fpr, o.mc_stderr_fpr);
        let (has_power, empirical_power, mc_stderr_power) = split(o.empirical_power, o.mc_stderr_power);
        let (has_size, empirical_size, mc_stderr_size) = split(o.empirical_size, o.mc_stderr_size);
        write_out(
            out,
            ErrstatSimOutcome {
                num_trials: o.num_trials,
                true_pos: o.true_pos,
                false_pos: o.false_pos,
                true_neg: o.true_neg,
                false_neg: o.false_neg,
                has_fpr,
                empirical_fpr,
                mc_stderr_fpr,
                has_power,
                empirical_power,
                mc_stderr_power,
                has_size,
                empirical_size,
                mc_stderr_size,
            },
        )
    })
}
