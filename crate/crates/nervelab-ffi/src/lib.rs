//! C ABI for the nervelab library.
//!
//! Conventions:
//! - Every function returns an [`NlStatus`]; results come back through out
//!   pointers.
//! - Handles (`NlComplex`, `NlInstance`) are opaque and must be released
//!   with the matching `_free` function.
//! - Strings returned through `char**` are NUL-terminated, UTF-8, owned by
//!   the library, and must be released with `nl_string_free`.
//! - On any non-zero status, `nl_last_error` returns a message describing
//!   the most recent failure on the calling thread.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use nervelab::complex::{SimplicialComplex, VertexId};
use nervelab::covers::{Codomain, Cover, Value};
use nervelab::generators::{minimal_generator_basis, BasisMode};
use nervelab::io;
use nervelab::metrics::{df_metric, MetricMode};
use nervelab::persistence::{bottleneck_distance, cech_filtration, persistence_diagram};
use nervelab::pullback::mapper;
use nervelab::reeb::reeb_graph;

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NlStatus {
    /// Success.
    NlOk = 0,
    /// A pointer argument was null or an argument was out of range.
    NlInvalidArgument = 1,
    /// Input text was not valid UTF-8 or failed to parse.
    NlParseError = 2,
    /// The computation itself reported an error.
    NlComputeError = 3,
    /// A panic was caught at the boundary; the handle state is unchanged.
    NlInternalError = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap();
    });
}

fn fail(status: NlStatus, message: &str) -> NlStatus {
    set_error(message);
    status
}

/// A finite simplicial complex.
pub struct NlComplex {
    inner: SimplicialComplex,
}

/// A complex together with vertex values and their codomain.
pub struct NlInstance {
    complex: SimplicialComplex,
    values: BTreeMap<VertexId, Value>,
    codomain: Codomain,
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, NlStatus> {
    if ptr.is_null() {
        return Err(fail(NlStatus::NlInvalidArgument, "null string argument"));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(NlStatus::NlParseError, "argument is not valid UTF-8"))
}

fn give_string(text: String, out: *mut *mut c_char) -> NlStatus {
    let c = match CString::new(text) {
        Ok(c) => c,
        Err(_) => return fail(NlStatus::NlInternalError, "output contained a NUL byte"),
    };
    unsafe { *out = c.into_raw() };
    NlStatus::NlOk
}

fn guarded(body: impl FnOnce() -> NlStatus) -> NlStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(NlStatus::NlInternalError, "internal panic"),
    }
}

fn parse_instance(complex_json: &str, function_json: &str) -> Result<NlInstance, NlStatus> {
    let cj: serde_json::Value = serde_json::from_str(complex_json)
        .map_err(|e| fail(NlStatus::NlParseError, &format!("complex: {e}")))?;
    let complex = io::parse_complex(&cj)
        .map_err(|e| fail(NlStatus::NlParseError, &format!("complex: {e}")))?;
    let fj: serde_json::Value = serde_json::from_str(function_json)
        .map_err(|e| fail(NlStatus::NlParseError, &format!("function: {e}")))?;
    let values = io::parse_values(&fj)
        .map_err(|e| fail(NlStatus::NlParseError, &format!("function: {e}")))?;
    let codomain = match fj.get("codomain") {
        Some(c) => io::parse_codomain(c)
            .map_err(|e| fail(NlStatus::NlParseError, &format!("codomain: {e}")))?,
        None => {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for v in values.values() {
                match v {
                    Value::Real(x) => {
                        lo = lo.min(*x);
                        hi = hi.max(*x);
                    }
                    Value::Point(_) => {
                        return Err(fail(
                            NlStatus::NlParseError,
                            "finite-metric values require an explicit codomain",
                        ))
                    }
                }
            }
            Codomain::real(lo, hi)
                .map_err(|e| fail(NlStatus::NlParseError, &format!("codomain: {e}")))?
        }
    };
    Ok(NlInstance {
        complex,
        values,
        codomain,
    })
}

fn parse_cover_arg(cover_json: &str) -> Result<Cover, NlStatus> {
    let j: serde_json::Value = serde_json::from_str(cover_json)
        .map_err(|e| fail(NlStatus::NlParseError, &format!("cover: {e}")))?;
    io::parse_cover(&j).map_err(|e| fail(NlStatus::NlParseError, &format!("cover: {e}")))
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn nl_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Releases a string produced by this library. Null is a no-op.
#[no_mangle]
pub extern "C" fn nl_string_free(s: *mut c_char) {
    if !s.is_null() {
        unsafe { drop(CString::from_raw(s)) };
    }
}

/// Parses a complex from its JSON encoding into a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nl_complex_from_json(
    json: *const c_char,
    out: *mut *mut NlComplex,
) -> NlStatus {
    guarded(|| {
        if out.is_null() {
            return fail(NlStatus::NlInvalidArgument, "null out pointer");
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let parsed: serde_json::Value = match serde_json::from_str(text) {
            Ok(v) => v,
            Err(e) => return fail(NlStatus::NlParseError, &e.to_string()),
        };
        match io::parse_complex(&parsed) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(NlComplex { inner }));
                NlStatus::NlOk
            }
            Err(e) => fail(NlStatus::NlParseError, &e.to_string()),
        }
    })
}

/// Releases a complex handle. Null is a no-op.
///
/// # Safety
/// `handle` must come from `nl_complex_from_json` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nl_complex_free(handle: *mut NlComplex) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of simplices of dimension `k`.
///
/// # Safety
/// `handle` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn nl_complex_size(
    handle: *const NlComplex,
    k: usize,
    out: *mut usize,
) -> NlStatus {
    guarded(|| {
        if handle.is_null() || out.is_null() {
            return fail(NlStatus::NlInvalidArgument, "null pointer");
        }
        let c = &(*handle).inner;
        *out = if k > c.dim_cap() {
            0
        } else {
            c.simplices(k).len()
        };
        NlStatus::NlOk
    })
}

/// Betti number of the complex in dimension `k`, with Z/2 coefficients.
///
/// # Safety
/// `handle` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn nl_complex_betti(
    handle: *const NlComplex,
    k: usize,
    out: *mut usize,
) -> NlStatus {
    guarded(|| {
        if handle.is_null() || out.is_null() {
            return fail(NlStatus::NlInvalidArgument, "null pointer");
        }
        match (*handle).inner.homology_basis(k) {
            Ok(basis) => {
                *out = basis.betti;
                NlStatus::NlOk
            }
            Err(e) => fail(NlStatus::NlComputeError, &e.to_string()),
        }
    })
}

/// Builds an instance (complex, vertex values, codomain) from JSON. The
/// function document uses the same shape as the command-line tool: a
/// `values` object plus an optional `codomain`; without one, the real
/// codomain is inferred from the value range.
///
/// # Safety
/// All pointers must be valid; the strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn nl_instance_new(
    complex_json: *const c_char,
    function_json: *const c_char,
    out: *mut *mut NlInstance,
) -> NlStatus {
    guarded(|| {
        if out.is_null() {
            return fail(NlStatus::NlInvalidArgument, "null out pointer");
        }
        let (cj, fj) = match (read_str(complex_json), read_str(function_json)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match parse_instance(cj, fj) {
            Ok(inst) => {
                *out = Box::into_raw(Box::new(inst));
                NlStatus::NlOk
            }
            Err(s) => s,
        }
    })
}

/// Releases an instance handle. Null is a no-op.
///
/// # Safety
/// `handle` must come from `nl_instance_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nl_instance_free(handle: *mut NlInstance) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Runs the mapper construction against a cover (JSON, same shape as the
/// command-line tool) and returns the nerve as a JSON document.
///
/// # Safety
/// All pointers must be valid; the strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn nl_mapper_nerve_json(
    handle: *const NlInstance,
    cover_json: *const c_char,
    dim_cap: usize,
    out: *mut *mut c_char,
) -> NlStatus {
    guarded(|| {
        if handle.is_null() || out.is_null() {
            return fail(NlStatus::NlInvalidArgument, "null pointer");
        }
        let cover = match read_str(cover_json).and_then(|t| parse_cover_arg(t)) {
            Ok(c) => c,
            Err(s) => return s,
        };
        let inst = &*handle;
        match mapper(&inst.complex, &inst.values, &cover, dim_cap) {
            Ok(m) => give_string(io::complex_to_json(&m.nerve).to_string(), out),
            Err(e) => fail(NlStatus::NlComputeError, &e.to_string()),
        }
    })
}

/// Computes the pulled-back path metric on the instance and returns it as
/// CSV. `exact` selects exhaustive path optimization; otherwise a
/// 2-approximation is used.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nl_df_metric_csv(
    handle: *const NlInstance,
    exact: bool,
    out: *mut *mut c_char,
) -> NlStatus {
    guarded(|| {
        if handle.is_null() || out.is_null() {
            return fail(NlStatus::NlInvalidArgument, "null pointer");
        }
        let inst = &*handle;
        let mode = if exact {
            MetricMode::Exact
        } else {
            MetricMode::Approx
        };
        match df_metric(&inst.complex, &inst.values, &inst.codomain, mode) {
            Ok(d) => {
                let points = d.points().to_vec();
                let csv = io::metric_to_csv(&points, &|i, j| d.distance(i, j));
                give_string(csv, out)
            }
            Err(e) => fail(NlStatus::NlComputeError, &e.to_string()),
        }
    })
}

/// Minimal-size generating cycles of first homology under the instance
/// path metric, as a JSON document. `exact` selects provably minimal sizes.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nl_generator_basis_json(
    handle: *const NlInstance,
    exact: bool,
    out: *mut *mut c_char,
) -> NlStatus {
    guarded(|| {
        if handle.is_null() || out.is_null() {
            return fail(NlStatus::NlInvalidArgument, "null pointer");
        }
        let inst = &*handle;
        let mode = if exact {
            BasisMode::Exact
        } else {
            BasisMode::Greedy
        };
        let result = df_metric(&inst.complex, &inst.values, &inst.codomain, MetricMode::Exact)
            .and_then(|d| minimal_generator_basis(&inst.complex, &d, mode));
        match result {
            Ok(basis) => give_string(io::basis_to_json(&basis).to_string(), out),
            Err(e) => fail(NlStatus::NlComputeError, &e.to_string()),
        }
    })
}

/// The Reeb graph of the instance in DOT format. Fails unless the values
/// are real-valued.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nl_reeb_dot(
    handle: *const NlInstance,
    out: *mut *mut c_char,
) -> NlStatus {
    guarded(|| {
        if handle.is_null() || out.is_null() {
            return fail(NlStatus::NlInvalidArgument, "null pointer");
        }
        let inst = &*handle;
        match reeb_graph(&inst.complex, &inst.values) {
            Ok(r) => give_string(io::reeb_to_dot(&r), out),
            Err(e) => fail(NlStatus::NlComputeError, &e.to_string()),
        }
    })
}

/// Persistence diagram of the Cech filtration of a finite pseudometric
/// (CSV, same shape as the command-line tool) in dimension `k`, returned
/// as diagram CSV.
///
/// # Safety
/// All pointers must be valid; the string NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn nl_cech_diagram_csv(
    metric_csv: *const c_char,
    k: usize,
    out: *mut *mut c_char,
) -> NlStatus {
    guarded(|| {
        if out.is_null() {
            return fail(NlStatus::NlInvalidArgument, "null pointer");
        }
        let text = match read_str(metric_csv) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let metric = match io::parse_metric_csv(text, MetricMode::Exact) {
            Ok(m) => m,
            Err(e) => return fail(NlStatus::NlParseError, &e.to_string()),
        };
        let dim_cap = k + 1;
        match cech_filtration(&metric, dim_cap, None) {
            Ok(filt) => {
                let diagram = persistence_diagram(&filt, k);
                give_string(io::diagram_to_csv(&diagram), out)
            }
            Err(e) => fail(NlStatus::NlComputeError, &e.to_string()),
        }
    })
}

/// Bottleneck distance between two diagrams given as diagram CSV. The
/// result may be infinity when essential class counts differ.
///
/// # Safety
/// All pointers must be valid; the strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn nl_bottleneck(
    left_csv: *const c_char,
    right_csv: *const c_char,
    out: *mut f64,
) -> NlStatus {
    guarded(|| {
        if out.is_null() {
            return fail(NlStatus::NlInvalidArgument, "null pointer");
        }
        let (lt, rt) = match (read_str(left_csv), read_str(right_csv)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let mode = nervelab::persistence::DiagramMode::Scale;
        let (left, right) = match (
            io::parse_diagram_csv(lt, mode),
            io::parse_diagram_csv(rt, mode),
        ) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return fail(NlStatus::NlParseError, &e.to_string()),
        };
        *out = bottleneck_distance(&left, &right);
        NlStatus::NlOk
    })
}
