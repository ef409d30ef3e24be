//! C interface to `xlab`.
//!
//! Every fallible function returns an [`XlabStatus`]; on failure the message
//! is available from [`xlab_last_error`] on the same thread. Handles are
//! opaque, created by the `*_from_*` and `*_run` functions and released with the
//! matching `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::BufWriter;
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;

use xlab::asymptotics::{predicted_limit, run_sweep, schedule, write_sweep_csv, SweepResult};
use xlab::christoffel::{lambda, ComputeOptions, Method};
use xlab::measure::{EvalPoint, MeasureSpec};
use xlab::measure_file::MeasureFile;
use xlab::scalar::Precision;
use xlab::verify::{run_suite, Suite};
use xlab::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XlabStatus {
    Ok = 0,
    VerificationFailed = 1,
    InputError = 2,
    NumericError = 3,
    NullPointer = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XlabMethod {
    Kernel = 0,
    Direct = 1,
}

impl From<XlabMethod> for Method {
    fn from(m: XlabMethod) -> Self {
        match m {
            XlabMethod::Kernel => Method::Kernel,
            XlabMethod::Direct => Method::Direct,
        }
    }
}

/// A measure with its evaluation point.
pub struct XlabMeasure {
    inner: MeasureSpec,
}

/// Rows of a sweep of `n lambda_n`.
pub struct XlabSweep {
    inner: SweepResult,
}

/// One sweep row; `failed` rows carry NaN values.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XlabSweepRow {
    pub n: usize,
    pub lambda_n: f64,
    pub n_lambda_n: f64,
    pub predicted_limit: f64,
    pub relative_error: f64,
    pub failed: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(XlabStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e.exit_code() {
            3 => XlabStatus::NumericError,
            _ => XlabStatus::InputError,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(XlabStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<XlabStatus, Failure>) -> XlabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => {
            if status == XlabStatus::Ok {
                set_error("");
            }
            status
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(&format!("panic: {msg}"));
            XlabStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(XlabStatus::InputError, format!("{what} is not valid UTF-8")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

fn options(precision_bits: u32) -> Result<ComputeOptions, Failure> {
    Ok(ComputeOptions {
        precision: if precision_bits == 0 {
            Precision::Auto
        } else {
            Precision::from_bits(precision_bits)?
        },
        ..ComputeOptions::default()
    })
}

fn boxed_measure(inner: MeasureSpec, out: *mut *mut XlabMeasure) -> Result<XlabStatus, Failure> {
    let out = unsafe { out_arg(out, "out")? };
    *out = Box::into_raw(Box::new(XlabMeasure { inner }));
    Ok(XlabStatus::Ok)
}

/// Message of the last failure on this thread, empty after a success. The
/// pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn xlab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn xlab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a measure from the text of a measure file.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn xlab_measure_from_text(text: *const c_char, out: *mut *mut XlabMeasure) -> XlabStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        boxed_measure(text.parse::<MeasureFile>()?.to_measure()?, out)
    })
}

/// Builds a measure from a measure file on disk.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn xlab_measure_from_file(path: *const c_char, out: *mut *mut XlabMeasure) -> XlabStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        boxed_measure(xlab::measure_file::load(path.as_ref())?, out)
    })
}

/// # Safety
/// `measure` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn xlab_measure_free(measure: *mut XlabMeasure) {
    if !measure.is_null() {
        drop(Box::from_raw(measure));
    }
}

/// Moves the evaluation point to `(re, im)`, which must lie on the support.
///
/// # Safety
/// `measure` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn xlab_measure_set_z0(measure: *mut XlabMeasure, re: f64, im: f64) -> XlabStatus {
    guard(|| {
        let m = out_arg(measure, "measure")?;
        m.inner = m.inner.at(EvalPoint::Point(Complex64::new(re, im)))?;
        Ok(XlabStatus::Ok)
    })
}

/// The evaluation point.
///
/// # Safety
/// `measure` must be a valid handle, `re` and `im` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn xlab_measure_z0(measure: *const XlabMeasure, re: *mut f64, im: *mut f64) -> XlabStatus {
    guard(|| {
        let m = measure.as_ref().ok_or_else(|| null("measure"))?;
        let z = m.inner.z0()?.z;
        *out_arg(re, "re")? = z.re;
        *out_arg(im, "im")? = z.im;
        Ok(XlabStatus::Ok)
    })
}

/// Total mass of the measure.
///
/// # Safety
/// `measure` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn xlab_measure_mass(measure: *const XlabMeasure, out: *mut f64) -> XlabStatus {
    guard(|| {
        let m = measure.as_ref().ok_or_else(|| null("measure"))?;
        *out_arg(out, "out")? = m.inner.mass()?;
        Ok(XlabStatus::Ok)
    })
}

/// `lambda_n(mu, re + i im)`. `precision_bits == 0` selects the precision
/// automatically.
///
/// # Safety
/// `measure` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn xlab_lambda(
    measure: *const XlabMeasure,
    n: usize,
    re: f64,
    im: f64,
    method: XlabMethod,
    precision_bits: u32,
    out: *mut f64,
) -> XlabStatus {
    guard(|| {
        let m = measure.as_ref().ok_or_else(|| null("measure"))?;
        let out = out_arg(out, "out")?;
        let v = lambda(&m.inner, n, Complex64::new(re, im), method.into(), &options(precision_bits)?)?;
        *out = v.lambda;
        Ok(XlabStatus::Ok)
    })
}

/// Predicted limit of `n lambda_n` at the evaluation point.
///
/// # Safety
/// `measure` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn xlab_predicted_limit(measure: *const XlabMeasure, out: *mut f64) -> XlabStatus {
    guard(|| {
        let m = measure.as_ref().ok_or_else(|| null("measure"))?;
        *out_arg(out, "out")? = predicted_limit(&m.inner)?.value;
        Ok(XlabStatus::Ok)
    })
}

/// Sweeps `n lambda_n` at the evaluation point over the geometric schedule
/// from `n_min` to `n_max`.
///
/// # Safety
/// `measure` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn xlab_sweep_run(
    measure: *const XlabMeasure,
    n_min: usize,
    n_max: usize,
    ratio: f64,
    method: XlabMethod,
    precision_bits: u32,
    out: *mut *mut XlabSweep,
) -> XlabStatus {
    guard(|| {
        let m = measure.as_ref().ok_or_else(|| null("measure"))?;
        let out = out_arg(out, "out")?;
        let sched = schedule(n_min, n_max, ratio)?;
        let inner = run_sweep(&m.inner, &sched, method.into(), &options(precision_bits)?)?;
        *out = Box::into_raw(Box::new(XlabSweep { inner }));
        Ok(XlabStatus::Ok)
    })
}

/// # Safety
/// `sweep` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn xlab_sweep_free(sweep: *mut XlabSweep) {
    if !sweep.is_null() {
        drop(Box::from_raw(sweep));
    }
}

/// Number of rows, 0 for a null handle.
///
/// # Safety
/// `sweep` must be a valid handle or null.
#[no_mangle]
pub unsafe extern "C" fn xlab_sweep_len(sweep: *const XlabSweep) -> usize {
    sweep.as_ref().map_or(0, |s| s.inner.rows.len())
}

/// # Safety
/// `sweep` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn xlab_sweep_row(sweep: *const XlabSweep, index: usize, out: *mut XlabSweepRow) -> XlabStatus {
    guard(|| {
        let s = sweep.as_ref().ok_or_else(|| null("sweep"))?;
        let out = out_arg(out, "out")?;
        let r = s.inner.rows.get(index).ok_or_else(|| {
            Failure(
                XlabStatus::InputError,
                format!("row {index} out of range ({} rows)", s.inner.rows.len()),
            )
        })?;
        *out = XlabSweepRow {
            n: r.n,
            lambda_n: r.lambda_n,
            n_lambda_n: r.n_lambda_n,
            predicted_limit: r.predicted_limit,
            relative_error: r.relative_error,
            failed: !r.ok(),
        };
        Ok(XlabStatus::Ok)
    })
}

/// Fits `L + c1/n + c2/n^2` to the last rows. `flagged` is set when the fit
/// was rejected and `limit` is the last raw value.
///
/// # Safety
/// `sweep` must be a valid handle, `limit` and `flagged` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn xlab_sweep_extrapolate(sweep: *mut XlabSweep, limit: *mut f64, flagged: *mut bool) -> XlabStatus {
    guard(|| {
        let s = out_arg(sweep, "sweep")?;
        let limit = out_arg(limit, "limit")?;
        let flagged = out_arg(flagged, "flagged")?;
        let e = s.inner.extrapolate()?;
        *limit = e.limit;
        *flagged = e.flagged;
        Ok(XlabStatus::Ok)
    })
}

/// Writes the sweep as CSV.
///
/// # Safety
/// `sweep` must be a valid handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn xlab_sweep_write_csv(sweep: *const XlabSweep, path: *const c_char) -> XlabStatus {
    guard(|| {
        let s = sweep.as_ref().ok_or_else(|| null("sweep"))?;
        let path = str_arg(path, "path")?;
        let mut w = BufWriter::new(File::create(path).map_err(Error::from)?);
        write_sweep_csv(&mut w, &s.inner)?;
        Ok(XlabStatus::Ok)
    })
}

/// Runs a verification suite. `tolerance <= 0` uses the suite default.
/// Returns `XLAB_STATUS_VERIFICATION_FAILED` when a check fails.
///
/// # Safety
/// `suite` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn xlab_verify(suite: *const c_char, tolerance: f64) -> XlabStatus {
    guard(|| {
        let suite: Suite = str_arg(suite, "suite")?.parse()?;
        let tol = (tolerance > 0.0).then_some(tolerance);
        let report = run_suite(suite, tol)?;
        if report.passed {
            Ok(XlabStatus::Ok)
        } else {
            Err(Failure(XlabStatus::VerificationFailed, report.to_string()))
        }
    })
}
