//! C ABI over the `opcomp` engine.
//!
//! Instances and sequence-space models are opaque handles built from the
//! same JSON the command-line tool reads. Every function returns an
//! [`OcStatus`]; on failure [`oc_last_error`] describes the cause for the
//! calling thread. Strings handed out by the library are NUL-terminated
//! UTF-8 JSON and must be released with [`oc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use opcomp::complementable::{is_complementable, Instance};
use opcomp::douglas::{check_certificate, douglas_factorize};
use opcomp::error::{DouglasError, FormatError};
use opcomp::json::{matrix_to_json, parse_index_set, parse_instance, parse_matrix, parse_operator_spec};
use opcomp::matrix::ExactMatrix;
use opcomp::scalar::Rational;
use opcomp::seqspace::{complement_consistency, decide_decomposable, DenselyDefinedOperator, IndexSet};
use serde_json::{json, Value};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    MalformedInput = 3,
    NotComplementable = 4,
    RangeNotIncluded = 5,
    Internal = 6,
    Panic = 7,
}

/// A finite `(T, M, N)` instance with exact rational entries.
pub struct OcInstance {
    inner: Instance<Rational>,
}

/// A banded operator on `ℓ₂` with a coordinate subspace `M`.
pub struct OcSeqModel {
    operator: DenselyDefinedOperator,
    m: IndexSet,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

struct Failure(OcStatus, String);

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure(
            OcStatus::MalformedInput,
            format!("malformed input at {}: {}", e.field, e.message),
        )
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> OcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            OcStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            OcStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(OcStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(OcStatus::InvalidUtf8, "argument is not valid UTF-8".into()))
}

unsafe fn read_json(p: *const c_char) -> Result<Value, Failure> {
    let text = read_str(p)?;
    serde_json::from_str(text).map_err(|e| Failure(OcStatus::MalformedInput, format!("invalid JSON: {e}")))
}

fn non_null<T>(p: *mut T) -> Result<*mut T, Failure> {
    if p.is_null() {
        Err(Failure(OcStatus::NullPointer, "null output pointer".into()))
    } else {
        Ok(p)
    }
}

unsafe fn write_string(out: *mut *mut c_char, value: &Value) -> Result<(), Failure> {
    let out = non_null(out)?;
    let text = serde_json::to_string(value).map_err(|e| Failure(OcStatus::Internal, e.to_string()))?;
    let c = CString::new(text).map_err(|e| Failure(OcStatus::Internal, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(OcStatus::NullPointer, "null handle".into()))
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value, Failure> {
    v.get(name)
        .ok_or_else(|| FormatError::new(name, "missing field").into())
}

/// Message for the last failed call on this thread, or null after a
/// success. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn oc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn oc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn oc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"operator", "M", "N"}` into a new instance handle.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn oc_instance_from_json(json: *const c_char, out: *mut *mut OcInstance) -> OcStatus {
    guard(|| {
        let out = non_null(out)?;
        let value = read_json(json)?;
        let inner = parse_instance(&value)?;
        *out = Box::into_raw(Box::new(OcInstance { inner }));
        Ok(())
    })
}

/// # Safety
/// `instance` must come from [`oc_instance_from_json`] or be null.
#[no_mangle]
pub unsafe extern "C" fn oc_instance_free(instance: *mut OcInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// Writes 1 to `out` when the instance is complementable, else 0.
///
/// # Safety
/// `instance` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn oc_instance_is_complementable(instance: *const OcInstance, out: *mut c_int) -> OcStatus {
    guard(|| {
        let inst = &handle(instance)?.inner;
        let out = non_null(out)?;
        let report = is_complementable(&inst.operator, &inst.m, &inst.n)
            .map_err(|e| Failure(OcStatus::Internal, e.to_string()))?;
        *out = c_int::from(report.complementable);
        Ok(())
    })
}

/// Complementability report as JSON: verdict, failing inclusion, `X`, `Y`
/// and the shorted operator (null when not complementable).
///
/// # Safety
/// `instance` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn oc_instance_check(instance: *const OcInstance, out: *mut *mut c_char) -> OcStatus {
    guard(|| {
        let inst = &handle(instance)?.inner;
        let r = is_complementable(&inst.operator, &inst.m, &inst.n)
            .map_err(|e| Failure(OcStatus::Internal, e.to_string()))?;
        let opt = |m: Option<&ExactMatrix>| m.map_or(Value::Null, matrix_to_json);
        write_string(
            out,
            &json!({
                "complementable": r.complementable,
                "failing_inclusion": r.failing_inclusion,
                "x_factor": opt(r.x_factor.as_ref()),
                "y_factor": opt(r.y_factor.as_ref()),
                "schur": opt(r.schur.as_ref()),
            }),
        )
    })
}

/// Shorted operator as a JSON matrix of rational strings. Returns
/// `NotComplementable` when the instance has none.
///
/// # Safety
/// `instance` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn oc_instance_schur(instance: *const OcInstance, out: *mut *mut c_char) -> OcStatus {
    guard(|| {
        let inst = &handle(instance)?.inner;
        let r = is_complementable(&inst.operator, &inst.m, &inst.n)
            .map_err(|e| Failure(OcStatus::Internal, e.to_string()))?;
        match r.schur {
            Some(s) => write_string(out, &matrix_to_json(&s)),
            None => Err(Failure(
                OcStatus::NotComplementable,
                format!("not complementable: {} fails", r.failing_inclusion.as_str()),
            )),
        }
    })
}

/// Douglas factorization of `{"A", "B"}`: reduced solution, `λ*`, norm
/// and identity checks as JSON. Returns `RangeNotIncluded` when
/// `R(A) ⊄ R(B)`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn oc_douglas(json: *const c_char, out: *mut *mut c_char) -> OcStatus {
    guard(|| {
        let value = read_json(json)?;
        let a: ExactMatrix = parse_matrix(field(&value, "A")?, "A")?;
        let b: ExactMatrix = parse_matrix(field(&value, "B")?, "B")?;
        let cert = match douglas_factorize(&a, &b) {
            Ok(c) => c,
            Err(DouglasError::RangeNotIncluded) => {
                return Err(Failure(
                    OcStatus::RangeNotIncluded,
                    "R(A) is not contained in R(B)".into(),
                ))
            }
            Err(DouglasError::Linalg(e)) => return Err(Failure(OcStatus::MalformedInput, e.to_string())),
        };
        let checks = check_certificate(&a, &b, &cert).map_err(|e| Failure(OcStatus::Internal, e.to_string()))?;
        write_string(
            out,
            &json!({
                "reduced_solution": matrix_to_json(&cert.reduced_solution),
                "lambda_star": cert.lambda_star,
                "norm_c": cert.norm_c,
                "checks": checks,
            }),
        )
    })
}

/// Parses `{"operator", "M"}` (operator spec and index set, as read by the
/// command-line tool) into a sequence-space model.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn oc_seq_from_json(json: *const c_char, out: *mut *mut OcSeqModel) -> OcStatus {
    guard(|| {
        let out = non_null(out)?;
        let value = read_json(json)?;
        let operator = parse_operator_spec(field(&value, "operator")?, "operator")?;
        let m = parse_index_set(field(&value, "M")?, "M")?;
        *out = Box::into_raw(Box::new(OcSeqModel { operator, m }));
        Ok(())
    })
}

/// # Safety
/// `model` must come from [`oc_seq_from_json`] or be null.
#[no_mangle]
pub unsafe extern "C" fn oc_seq_free(model: *mut OcSeqModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Decomposability verdict with evidence, witness terms and the
/// complement check, as JSON.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn oc_seq_decide(model: *const OcSeqModel, out: *mut *mut c_char) -> OcStatus {
    guard(|| {
        let model = handle(model)?;
        let decision = decide_decomposable(&model.operator, &model.m);
        let terms = decision.witness.as_ref().map(|w| w.terms(8));
        let complement = complement_consistency(&model.operator, &model.m);
        write_string(
            out,
            &json!({ "decision": decision, "witness_terms": terms, "complement": complement }),
        )
    })
}

/// Runs the command-line tool in-process. `argv` excludes the program
/// name. Captured output is returned through `out_stdout` and `out_stderr`
/// (free both), the exit code through `out_code`.
///
/// # Safety
/// `argv` must hold `argc` NUL-terminated strings; the outputs must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn oc_cli_run(
    argc: c_int,
    argv: *const *const c_char,
    out_code: *mut c_int,
    out_stdout: *mut *mut c_char,
    out_stderr: *mut *mut c_char,
) -> OcStatus {
    guard(|| {
        let code = non_null(out_code)?;
        let (so, se) = (non_null(out_stdout)?, non_null(out_stderr)?);
        let mut args = vec!["opcomp".to_string()];
        if argc > 0 {
            if argv.is_null() {
                return Err(Failure(OcStatus::NullPointer, "null argv".into()));
            }
            for i in 0..argc as usize {
                args.push(read_str(*argv.add(i))?.to_string());
            }
        }
        let outcome = opcomp::cli::run(args);
        let text = |s: String| CString::new(s).map_err(|e| Failure(OcStatus::Internal, e.to_string()));
        *so = text(outcome.stdout)?.into_raw();
        *se = text(outcome.stderr)?.into_raw();
        *code = outcome.code;
        Ok(())
    })
}
