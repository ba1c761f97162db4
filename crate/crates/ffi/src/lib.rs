//! C ABI for `permrow`.
//!
//! Objects cross the boundary as opaque handles that must be released with
//! the matching `*_free` function. Every fallible call returns a
//! [`PermrowStatus`]; on failure the message is available from
//! [`permrow_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use permrow::analysis::{f_test_oneway, t_test_two_sample, GroupedValues, TTestVariant};
use permrow::linalg::Matrix;
use permrow::simulation::{run_monte_carlo_with, RiskReport, SimulationConfig};
use permrow::theory::{classify_snr, minimax_rate_extreme, rate_psi, RateTarget, SignalIndices, SnrRegime};
use permrow::{estimate, EstimateOptions, Error, ExtremeEstimates, Method, ObservationMatrix, SignConvention, SvdOptions};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermrowStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Numerical = 4,
    Io = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermrowMethod {
    Spectral = 0,
    Regression = 1,
    DirectSorting = 2,
    OrderStatistic = 3,
    IRep = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermrowSign {
    RowMajority = 0,
    FirstNegative = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermrowTarget {
    ThetaR = 0,
    ThetaL = 1,
    Range = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermrowRegime {
    Weak = 0,
    Intermediate = 1,
    Strong = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermrowVariant {
    Welch = 0,
    Pooled = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PermrowFTest {
    pub f: f64,
    pub df1: usize,
    pub df2: usize,
    pub p_value: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PermrowTTest {
    pub t: f64,
    pub df: f64,
    pub p_value: f64,
}

/// Validated observation matrix.
pub struct PermrowMatrix(ObservationMatrix);

/// Result of one estimator run.
pub struct PermrowEstimates(ExtremeEstimates);

/// Monte Carlo risk report.
pub struct PermrowRiskReport(RiskReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> PermrowStatus {
    match err {
        e if e.is_numerical() => PermrowStatus::Numerical,
        Error::Parse { .. } | Error::Json(_) | Error::Csv(_) => PermrowStatus::Parse,
        Error::Io(_) => PermrowStatus::Io,
        _ => PermrowStatus::InvalidArgument,
    }
}

struct Failure(PermrowStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(PermrowStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(PermrowStatus::InvalidArgument, msg.into())
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PermrowStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PermrowStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("internal panic: {msg}"));
            PermrowStatus::Panic
        }
    }
}

unsafe fn slice_arg<'a, T>(data: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(data, len))
}

unsafe fn out_arg<'a, T>(out: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    out.as_mut().ok_or_else(|| null(what))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message for the most recent failed call on this thread, or null.
///
/// The pointer stays valid until the next `permrow_*` call on this thread.
#[no_mangle]
pub extern "C" fn permrow_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Copies a row-major `rows x cols` array into a new matrix handle.
///
/// # Safety
/// `data` must point to `rows * cols` readable doubles and `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn permrow_matrix_new(
    data: *const f64,
    rows: usize,
    cols: usize,
    out: *mut *mut PermrowMatrix,
) -> PermrowStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let len = rows
            .checked_mul(cols)
            .ok_or_else(|| invalid("matrix size overflows"))?;
        let values = slice_arg(data, len, "data")?.to_vec();
        let y = ObservationMatrix::new(Matrix::new(rows, cols, values)?)?;
        *out = Box::into_raw(Box::new(PermrowMatrix(y)));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle from [`permrow_matrix_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn permrow_matrix_free(m: *mut PermrowMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Runs an estimator. `trim_fraction` is used by the iRep method only.
///
/// # Safety
/// `m` must be a live matrix handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn permrow_estimate(
    m: *const PermrowMatrix,
    method: PermrowMethod,
    sign: PermrowSign,
    trim_fraction: f64,
    out: *mut *mut PermrowEstimates,
) -> PermrowStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let m = m.as_ref().ok_or_else(|| null("matrix"))?;
        let method = match method {
            PermrowMethod::Spectral => Method::Spectral,
            PermrowMethod::Regression => Method::Regression,
            PermrowMethod::DirectSorting => Method::DirectSorting,
            PermrowMethod::OrderStatistic => Method::OrderStatistic,
            PermrowMethod::IRep => Method::IRep,
        };
        let convention = match sign {
            PermrowSign::RowMajority => SignConvention::RowMajoritySign,
            PermrowSign::FirstNegative => SignConvention::FirstNonzeroNegative,
        };
        let opts = EstimateOptions {
            svd: SvdOptions::with_convention(convention),
            trim_fraction,
        };
        let est = estimate(&m.0, method, &opts)?;
        *out = Box::into_raw(Box::new(PermrowEstimates(est)));
        Ok(())
    })
}

/// # Safety
/// `e` must be null or a handle from [`permrow_estimate`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn permrow_estimates_free(e: *mut PermrowEstimates) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Number of samples, or 0 for a null handle.
///
/// # Safety
/// `e` must be null or a live estimates handle.
#[no_mangle]
pub unsafe extern "C" fn permrow_estimates_len(e: *const PermrowEstimates) -> usize {
    e.as_ref().map_or(0, |e| e.0.n())
}

/// Copies one estimated vector into `out`, which must hold exactly
/// [`permrow_estimates_len`] doubles.
///
/// # Safety
/// `e` must be a live handle and `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn permrow_estimates_copy(
    e: *const PermrowEstimates,
    target: PermrowTarget,
    out: *mut f64,
    len: usize,
) -> PermrowStatus {
    guard(|| {
        let e = e.as_ref().ok_or_else(|| null("estimates"))?;
        let src = match target {
            PermrowTarget::ThetaR => &e.0.theta_r,
            PermrowTarget::ThetaL => &e.0.theta_l,
            PermrowTarget::Range => &e.0.range,
        };
        if len != src.len() {
            return Err(invalid(format!("buffer holds {len} values, need {}", src.len())));
        }
        if len > 0 {
            if out.is_null() {
                return Err(null("out"));
            }
            slice::from_raw_parts_mut(out, len).copy_from_slice(src);
        }
        Ok(())
    })
}

/// Copies the estimated column order (zero-based, smallest score first).
/// Fails with `InvalidArgument` for methods that do not compute one.
///
/// # Safety
/// `e` must be a live handle and `out` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn permrow_estimates_order(
    e: *const PermrowEstimates,
    out: *mut usize,
    len: usize,
) -> PermrowStatus {
    guard(|| {
        let e = e.as_ref().ok_or_else(|| null("estimates"))?;
        let order = e
            .0
            .permutation_hat()
            .ok_or_else(|| invalid(format!("method {} has no column order", e.0.method)))?;
        if len != order.len() {
            return Err(invalid(format!("buffer holds {len} values, need {}", order.len())));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        slice::from_raw_parts_mut(out, len).copy_from_slice(order);
        Ok(())
    })
}

/// Leading singular value of the centered data for spectral methods.
///
/// # Safety
/// `e` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn permrow_estimates_singular_value(
    e: *const PermrowEstimates,
    out: *mut f64,
) -> PermrowStatus {
    guard(|| {
        let e = e.as_ref().ok_or_else(|| null("estimates"))?;
        let out = out_arg(out, "out")?;
        let fit = e
            .0
            .spectral
            .as_ref()
            .ok_or_else(|| invalid(format!("method {} has no singular triple", e.0.method)))?;
        *out = fit.triple.lambda;
        Ok(())
    })
}

/// `√(ln p / n)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn permrow_rate_psi(n: usize, p: usize, out: *mut f64) -> PermrowStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        if n == 0 || p < 2 {
            return Err(invalid(format!("need n >= 1 and p >= 2, got n={n}, p={p}")));
        }
        *out = rate_psi(n, p);
        Ok(())
    })
}

/// Minimax rate for one extreme column with bound `beta`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn permrow_minimax_rate(
    t: f64,
    beta: f64,
    sigma: f64,
    n: usize,
    p: usize,
    out: *mut f64,
) -> PermrowStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        if n == 0 || p < 2 {
            return Err(invalid(format!("need n >= 1 and p >= 2, got n={n}, p={p}")));
        }
        let idx = SignalIndices {
            t,
            beta_r: beta,
            beta_l: 0.0,
            sigma,
        };
        idx.validate()?;
        *out = minimax_rate_extreme(&idx, RateTarget::Right, n, p);
        Ok(())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn permrow_classify_snr(
    t: f64,
    sigma: f64,
    n: usize,
    p: usize,
    out: *mut PermrowRegime,
) -> PermrowStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        if !(t >= 0.0) || !(sigma > 0.0) {
            return Err(invalid(format!("need t >= 0 and sigma > 0, got t={t}, sigma={sigma}")));
        }
        *out = match classify_snr(t, sigma, n, p) {
            SnrRegime::Weak => PermrowRegime::Weak,
            SnrRegime::Intermediate => PermrowRegime::Intermediate,
            SnrRegime::Strong => PermrowRegime::Strong,
        };
        Ok(())
    })
}

/// One-way ANOVA. `values` holds the groups back to back and `sizes` the
/// length of each group.
///
/// # Safety
/// `values` must hold the sum of `sizes` doubles, `sizes` must hold `groups`
/// values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn permrow_f_test(
    values: *const f64,
    sizes: *const usize,
    groups: usize,
    out: *mut PermrowFTest,
) -> PermrowStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let sizes = slice_arg(sizes, groups, "sizes")?;
        let total = sizes
            .iter()
            .try_fold(0usize, |acc, &s| acc.checked_add(s))
            .ok_or_else(|| invalid("group sizes overflow"))?;
        let values = slice_arg(values, total, "values")?;
        let mut start = 0;
        let grouped = sizes
            .iter()
            .enumerate()
            .map(|(k, &s)| {
                let g = (format!("group{k}"), values[start..start + s].to_vec());
                start += s;
                g
            })
            .collect();
        let r = f_test_oneway(&GroupedValues::new(grouped))?;
        *out = PermrowFTest {
            f: r.f,
            df1: r.df1,
            df2: r.df2,
            p_value: r.p_value,
        };
        Ok(())
    })
}

/// Two-sample t test with a two-sided p-value.
///
/// # Safety
/// `x` and `y` must hold `nx` and `ny` doubles, `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn permrow_t_test(
    x: *const f64,
    nx: usize,
    y: *const f64,
    ny: usize,
    variant: PermrowVariant,
    out: *mut PermrowTTest,
) -> PermrowStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let x = slice_arg(x, nx, "x")?;
        let y = slice_arg(y, ny, "y")?;
        let variant = match variant {
            PermrowVariant::Welch => TTestVariant::Welch,
            PermrowVariant::Pooled => TTestVariant::Pooled,
        };
        let r = t_test_two_sample(x, y, variant)?;
        *out = PermrowTTest {
            t: r.t,
            df: r.df,
            p_value: r.p_value,
        };
        Ok(())
    })
}

/// Runs a Monte Carlo study described by a JSON config (the same format as
/// the `simulate` command). `seed` replaces the config's seed.
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn permrow_simulate(
    config_json: *const c_char,
    reps: usize,
    seed: u64,
    out: *mut *mut PermrowRiskReport,
) -> PermrowStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        if config_json.is_null() {
            return Err(null("config_json"));
        }
        let text = CStr::from_ptr(config_json)
            .to_str()
            .map_err(|e| Failure(PermrowStatus::Parse, format!("config is not UTF-8: {e}")))?;
        let mut cfg: SimulationConfig = serde_json::from_str(text).map_err(Error::from)?;
        cfg.scenario.seed = seed;
        let report = run_monte_carlo_with(&cfg.scenario, &cfg.estimators, reps, &cfg.run_options())?;
        *out = Box::into_raw(Box::new(PermrowRiskReport(report)));
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a handle from [`permrow_simulate`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn permrow_report_free(r: *mut PermrowRiskReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Tidy CSV of the per-replicate risks. Free with [`permrow_string_free`].
/// Returns null for a null handle.
///
/// # Safety
/// `r` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn permrow_report_csv(r: *const PermrowRiskReport) -> *mut c_char {
    r.as_ref().map_or(ptr::null_mut(), |r| into_c_string(r.0.to_csv_string()))
}

/// Full report as JSON. Free with [`permrow_string_free`].
///
/// # Safety
/// `r` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn permrow_report_json(r: *const PermrowRiskReport) -> *mut c_char {
    r.as_ref().map_or(ptr::null_mut(), |r| {
        serde_json::to_string(&r.0).map_or(ptr::null_mut(), into_c_string)
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn permrow_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
