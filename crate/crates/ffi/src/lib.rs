//! C ABI over `qcbound`.
//!
//! Expressions are opaque `QcExpr` handles created by [`qc_expr_parse`] and
//! released with [`qc_expr_free`]. Every other call returns a [`QcStatus`] and
//! writes its result through an out-pointer. On failure a message is kept per
//! thread and can be read with [`qc_last_error_message`].
//!
//! Optional reals (`x` for trapezoid rows, `p`/`q` where a bound has none)
//! are NaN.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qcbound::bounds::{self, BoundReport, EvalOptions, HolderPair, TheoremId};
use qcbound::identity::{self, IdentityKind, IdentityReport, ProblemSpec};
use qcbound::{jet, quasi, Error, Expr};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    Domain = 5,
    NonFinite = 6,
    ToleranceNotReached = 7,
    KernelDivergent = 8,
    /// A Rust panic was caught at the boundary.
    Internal = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcTheorem {
    T21 = 0,
    C11 = 1,
    T22 = 2,
    T23 = 3,
    T31 = 4,
    C31 = 5,
    T32 = 6,
}

impl From<QcTheorem> for TheoremId {
    fn from(t: QcTheorem) -> Self {
        match t {
            QcTheorem::T21 => TheoremId::T21,
            QcTheorem::C11 => TheoremId::C11,
            QcTheorem::T22 => TheoremId::T22,
            QcTheorem::T23 => TheoremId::T23,
            QcTheorem::T31 => TheoremId::T31,
            QcTheorem::C31 => TheoremId::C31,
            QcTheorem::T32 => TheoremId::T32,
        }
    }
}

impl From<TheoremId> for QcTheorem {
    fn from(t: TheoremId) -> Self {
        match t {
            TheoremId::T21 => QcTheorem::T21,
            TheoremId::C11 => QcTheorem::C11,
            TheoremId::T22 => QcTheorem::T22,
            TheoremId::T23 => QcTheorem::T23,
            TheoremId::T31 => QcTheorem::T31,
            TheoremId::C31 => QcTheorem::C31,
            TheoremId::T32 => QcTheorem::T32,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcIdentity {
    EndpointRule = 0,
    Trapezoid = 1,
}

/// Interval `[a, b]`, evaluation point `x` and order `n`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QcProblem {
    pub a: f64,
    pub b: f64,
    pub x: f64,
    pub n: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QcIdentityReport {
    pub kind: QcIdentity,
    pub a: f64,
    pub b: f64,
    pub x: f64,
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub scale: f64,
    pub tol: f64,
    pub pass: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QcBoundReport {
    pub theorem: QcTheorem,
    pub a: f64,
    pub b: f64,
    pub x: f64,
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub bound: f64,
    pub measured_error: f64,
    pub slack_ratio: f64,
    pub hypothesis_ok: bool,
    pub holds: bool,
}

/// Most bound reports [`qc_evaluate_all`] can produce.
pub const QC_MAX_REPORTS: usize = 7;

/// Opaque parsed expression in the variable `t`.
pub struct QcExpr {
    inner: Expr,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> QcStatus {
    match e {
        Error::Parse(_) => QcStatus::Parse,
        Error::Domain { .. } => QcStatus::Domain,
        Error::NonFinite { .. } => QcStatus::NonFinite,
        Error::ToleranceNotReached { .. } => QcStatus::ToleranceNotReached,
        Error::KernelDivergent { .. } => QcStatus::KernelDivergent,
        _ => QcStatus::InvalidInput,
    }
}

/// Run `body` behind the boundary: record errors, catch panics.
fn guard<F>(body: F) -> QcStatus
where
    F: FnOnce() -> Result<(), QcFail>,
{
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => QcStatus::Ok,
        Ok(Err(QcFail(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("internal error: {msg}"));
            QcStatus::Internal
        }
    }
}

struct QcFail(QcStatus, String);

impl From<Error> for QcFail {
    fn from(e: Error) -> Self {
        QcFail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> QcFail {
    QcFail(QcStatus::NullArgument, format!("{what} is null"))
}

/// # Safety
/// `ptr` is null or points to a live value of `T`.
unsafe fn borrow<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, QcFail> {
    ptr.as_ref().ok_or_else(|| null(what))
}

/// # Safety
/// `ptr` is null or valid for a write of `T`.
unsafe fn put<T>(ptr: *mut T, value: T, what: &str) -> Result<(), QcFail> {
    if ptr.is_null() {
        return Err(null(what));
    }
    ptr.write(value);
    Ok(())
}

fn opt(v: Option<f64>) -> f64 {
    v.unwrap_or(f64::NAN)
}

fn spec_of(p: &QcProblem) -> Result<ProblemSpec, QcFail> {
    Ok(ProblemSpec::new(p.a, p.b, p.x, p.n)?)
}

impl From<&IdentityReport> for QcIdentityReport {
    fn from(r: &IdentityReport) -> Self {
        QcIdentityReport {
            kind: match r.kind {
                IdentityKind::EndpointRule => QcIdentity::EndpointRule,
                IdentityKind::Trapezoid => QcIdentity::Trapezoid,
            },
            a: r.a,
            b: r.b,
            x: opt(r.x),
            n: r.n,
            lhs: r.lhs,
            rhs: r.rhs,
            residual: r.residual,
            scale: r.scale,
            tol: r.tol,
            pass: r.pass,
        }
    }
}

impl From<&BoundReport> for QcBoundReport {
    fn from(r: &BoundReport) -> Self {
        QcBoundReport {
            theorem: r.theorem_id.into(),
            a: r.a,
            b: r.b,
            x: opt(r.x),
            n: r.n,
            p: opt(r.p),
            q: opt(r.q),
            bound: r.bound,
            measured_error: r.measured_error,
            slack_ratio: r.slack_ratio,
            hypothesis_ok: r.hypothesis_ok,
            holds: r.holds,
        }
    }
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next `qc_` call on the same thread.
#[no_mangle]
pub extern "C" fn qc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parse `source` into a new expression handle stored in `*out`.
///
/// # Safety
/// `source` is a NUL-terminated string and `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qc_expr_parse(source: *const c_char, out: *mut *mut QcExpr) -> QcStatus {
    guard(|| {
        if source.is_null() {
            return Err(null("source"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(source)
            .to_str()
            .map_err(|e| QcFail(QcStatus::InvalidUtf8, format!("source is not UTF-8: {e}")))?;
        let inner = qcbound::parse(text).map_err(Error::from)?;
        out.write(Box::into_raw(Box::new(QcExpr { inner })));
        Ok(())
    })
}

/// Release a handle from [`qc_expr_parse`]. Null is ignored.
///
/// # Safety
/// `expr` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qc_expr_free(expr: *mut QcExpr) {
    if !expr.is_null() {
        drop(Box::from_raw(expr));
    }
}

/// # Safety
/// `expr` is a live handle and `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qc_expr_eval(expr: *const QcExpr, t: f64, out: *mut f64) -> QcStatus {
    guard(|| {
        let e = borrow(expr, "expr")?;
        put(out, e.inner.eval(t)?, "out")
    })
}

/// `k`-th derivative at `t` by Taylor-mode differentiation, `k <= 12`.
///
/// # Safety
/// `expr` is a live handle and `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qc_expr_derivative(expr: *const QcExpr, t: f64, k: usize, out: *mut f64) -> QcStatus {
    guard(|| {
        let e = borrow(expr, "expr")?;
        put(out, jet::derivative(&e.inner, t, k)?, "out")
    })
}

/// Endpoint-rule identity at `problem.x`.
///
/// # Safety
/// `expr` is a live handle and `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qc_check_endpoint_identity(
    expr: *const QcExpr,
    problem: QcProblem,
    tol: f64,
    out: *mut QcIdentityReport,
) -> QcStatus {
    guard(|| {
        let e = borrow(expr, "expr")?;
        let r = identity::check_lemma1(&e.inner, &spec_of(&problem)?, tol)?;
        put(out, (&r).into(), "out")
    })
}

/// Corrected trapezoid identity; `problem.x` is ignored.
///
/// # Safety
/// `expr` is a live handle and `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qc_check_trapezoid_identity(
    expr: *const QcExpr,
    problem: QcProblem,
    tol: f64,
    out: *mut QcIdentityReport,
) -> QcStatus {
    guard(|| {
        let e = borrow(expr, "expr")?;
        let r = identity::check_lemma2(&e.inner, problem.a, problem.b, problem.n, tol)?;
        put(out, (&r).into(), "out")
    })
}

/// Absolute error of the endpoint rule at `problem.x`.
///
/// # Safety
/// `expr` is a live handle and `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qc_measured_endpoint_error(
    expr: *const QcExpr,
    problem: QcProblem,
    out: *mut f64,
) -> QcStatus {
    guard(|| {
        let e = borrow(expr, "expr")?;
        put(out, bounds::measured_e1(&e.inner, &spec_of(&problem)?)?, "out")
    })
}

/// Absolute error of the corrected trapezoid rule.
///
/// # Safety
/// `expr` is a live handle and `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qc_measured_trapezoid_error(
    expr: *const QcExpr,
    problem: QcProblem,
    out: *mut f64,
) -> QcStatus {
    guard(|| {
        let e = borrow(expr, "expr")?;
        put(
            out,
            bounds::measured_e2(&e.inner, problem.a, problem.b, problem.n)?,
            "out",
        )
    })
}

/// One bound. `p` and `q` must be conjugate for T22, T23 and T32; T31 uses
/// only `q` (>= 1); the rest ignore both.
///
/// # Safety
/// `expr` is a live handle and `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qc_bound(
    expr: *const QcExpr,
    theorem: QcTheorem,
    problem: QcProblem,
    p: f64,
    q: f64,
    out: *mut f64,
) -> QcStatus {
    guard(|| {
        let f = &borrow(expr, "expr")?.inner;
        let QcProblem { a, b, n, .. } = problem;
        let value = match theorem {
            QcTheorem::T21 => bounds::bound_t21(f, &spec_of(&problem)?)?,
            QcTheorem::C11 => bounds::bound_c11(f, a, b, n)?,
            QcTheorem::T22 => bounds::bound_t22(f, &spec_of(&problem)?, HolderPair::new(p, q)?)?,
            QcTheorem::T23 => bounds::bound_t23(f, &spec_of(&problem)?, HolderPair::new(p, q)?)?,
            QcTheorem::T31 => bounds::bound_t31(f, a, b, n, q)?,
            QcTheorem::C31 => bounds::bound_c31(f, a, b, n)?,
            QcTheorem::T32 => bounds::bound_t32(f, a, b, n, HolderPair::new(p, q)?)?,
        };
        put(out, value, "out")
    })
}

/// Every applicable bound with its measured error and hypothesis verdict.
/// Writes up to `capacity` reports to `out` and the number produced to
/// `*len`; [`QC_MAX_REPORTS`] always suffices.
///
/// # Safety
/// `expr` is a live handle, `out` is valid for `capacity` writes and `len`
/// for one.
#[no_mangle]
pub unsafe extern "C" fn qc_evaluate_all(
    expr: *const QcExpr,
    problem: QcProblem,
    p: f64,
    q: f64,
    out: *mut QcBoundReport,
    capacity: usize,
    len: *mut usize,
) -> QcStatus {
    guard(|| {
        let f = &borrow(expr, "expr")?.inner;
        if out.is_null() && capacity > 0 {
            return Err(null("out"));
        }
        let suite = bounds::evaluate_all(f, &spec_of(&problem)?, HolderPair::new(p, q)?, EvalOptions::default())?;
        put(len, suite.reports.len(), "len")?;
        if suite.reports.len() > capacity {
            return Err(QcFail(
                QcStatus::InvalidInput,
                format!("{} reports do not fit in capacity {capacity}", suite.reports.len()),
            ));
        }
        for (i, r) in suite.reports.iter().enumerate() {
            out.add(i).write(r.into());
        }
        Ok(())
    })
}

/// Quasi-convexity of a sample sequence up to `tol`. On a violation the
/// indices of a witnessing triple go to `witness` when it is non-null.
///
/// # Safety
/// `samples` is valid for `len` reads, `is_qc` for one write and `witness`
/// is null or valid for three writes.
#[no_mangle]
pub unsafe extern "C" fn qc_quasiconvex_samples(
    samples: *const f64,
    len: usize,
    tol: f64,
    is_qc: *mut bool,
    witness: *mut usize,
) -> QcStatus {
    guard(|| {
        let s: &[f64] = if len == 0 {
            &[]
        } else if samples.is_null() {
            return Err(null("samples"));
        } else {
            std::slice::from_raw_parts(samples, len)
        };
        let v = quasi::find_violation(s, tol);
        put(is_qc, v.is_none(), "is_qc")?;
        if let (Some((i, j, k)), false) = (v, witness.is_null()) {
            witness.write(i);
            witness.add(1).write(j);
            witness.add(2).write(k);
        }
        Ok(())
    })
}
