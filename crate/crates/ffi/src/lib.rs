//! C interface to `susy_graph`.
//!
//! Graphs are exposed as an opaque `SgGraph` handle. Every fallible function
//! returns an `SgStatus`; on failure a message is kept per thread and can be
//! read with `sg_last_error_message`. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use susy_graph::error::Error;
use susy_graph::graph::OrientedGraph;
use susy_graph::operators::{dirac_incidence, laplacian_susy};
use susy_graph::spectral::{betti_numbers, eigvals_sym, even_spectrum, odd_spectrum};
use susy_graph::susy::{is_susy_broken, witten_index};

/// Opaque graph handle.
pub struct SgGraph(OrientedGraph);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    DomainError = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// Operators accepted by `sg_spectrum`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgOperator {
    Even = 0,
    Odd = 1,
    Susy = 2,
    Dirac = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_for(err: &Error) -> SgStatus {
    match err {
        Error::MalformedGraph(_)
        | Error::DuplicateVertex(_)
        | Error::DuplicateEdge(_)
        | Error::SelfLoop(_)
        | Error::ParallelEdge { .. }
        | Error::DanglingEndpoint { .. } => SgStatus::ParseError,
        _ => SgStatus::DomainError,
    }
}

fn guard(f: impl FnOnce() -> Result<(), SgStatus>) -> SgStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SgStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            SgStatus::Panic
        }
    }
}

fn fail(err: Error) -> SgStatus {
    set_error(err.to_string());
    status_for(&err)
}

unsafe fn graph_ref<'a>(g: *const SgGraph) -> Result<&'a OrientedGraph, SgStatus> {
    if g.is_null() {
        set_error("graph handle is null");
        return Err(SgStatus::NullPointer);
    }
    Ok(&(*g).0)
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, SgStatus> {
    if s.is_null() {
        set_error("string argument is null");
        return Err(SgStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|e| {
        set_error(e.to_string());
        SgStatus::InvalidUtf8
    })
}

fn out_ptr<T>(p: *mut T) -> Result<*mut T, SgStatus> {
    if p.is_null() {
        set_error("output pointer is null");
        return Err(SgStatus::NullPointer);
    }
    Ok(p)
}

/// Message for the last failure on this thread, or null. The pointer stays
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn sg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

unsafe fn parse_into(
    text: *const c_char,
    out: *mut *mut SgGraph,
    parse: fn(&str) -> susy_graph::error::Result<OrientedGraph>,
) -> SgStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = ptr::null_mut();
        let text = str_arg(text)?;
        let g = parse(text).map_err(fail)?;
        *out = Box::into_raw(Box::new(SgGraph(g)));
        Ok(())
    })
}

/// Parses a graph from canonical JSON. On success `*out` owns a handle that
/// must be released with `sg_graph_free`.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sg_graph_from_json(json: *const c_char, out: *mut *mut SgGraph) -> SgStatus {
    parse_into(json, out, OrientedGraph::from_json)
}

/// Parses a graph from the line-based text format (`tail head [id]`).
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sg_graph_from_text(text: *const c_char, out: *mut *mut SgGraph) -> SgStatus {
    parse_into(text, out, OrientedGraph::from_text)
}

/// Releases a graph handle. Null is ignored.
///
/// # Safety
/// `g` must be null or a handle from this library that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn sg_graph_free(g: *mut SgGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sg_graph_vertex_count(g: *const SgGraph, out: *mut usize) -> SgStatus {
    guard(|| {
        *out_ptr(out)? = graph_ref(g)?.vertex_count();
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sg_graph_edge_count(g: *const SgGraph, out: *mut usize) -> SgStatus {
    guard(|| {
        *out_ptr(out)? = graph_ref(g)?.edge_count();
        Ok(())
    })
}

/// Serializes the graph to canonical JSON. Free the result with
/// `sg_string_free`.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sg_graph_to_json(g: *const SgGraph, out: *mut *mut c_char) -> SgStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = ptr::null_mut();
        let json = graph_ref(g)?.to_json();
        *out = CString::new(json)
            .map_err(|e| fail(Error::Io(e.to_string())))?
            .into_raw();
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn sg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Witten index, cross-checked across all routes at the default inverse
/// temperatures.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sg_witten_index(g: *const SgGraph, out: *mut i64) -> SgStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = witten_index(graph_ref(g)?, &[], None).map_err(fail)?.witten;
        Ok(())
    })
}

/// `b0` (components) and `b1` (independent cycles) from the Laplacian kernels.
///
/// # Safety
/// `g` must be a live handle; `b0` and `b1` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sg_betti_numbers(g: *const SgGraph, b0: *mut usize, b1: *mut usize) -> SgStatus {
    guard(|| {
        let (b0, b1) = (out_ptr(b0)?, out_ptr(b1)?);
        let (x, y) = betti_numbers(graph_ref(g)?).map_err(fail)?;
        *b0 = x;
        *b1 = y;
        Ok(())
    })
}

/// Whether neither sector has a zero mode.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sg_is_susy_broken(g: *const SgGraph, out: *mut bool) -> SgStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = is_susy_broken(graph_ref(g)?, None).map_err(fail)?;
        Ok(())
    })
}

/// Ascending eigenvalues of an operator, written to `buf`.
///
/// `*len` receives the number of eigenvalues. If `capacity` is too small
/// nothing is written and `SG_STATUS_BUFFER_TOO_SMALL` is returned, so a
/// call with `capacity = 0` queries the size.
///
/// # Safety
/// `g` must be a live handle, `len` a valid pointer and `buf` valid for
/// `capacity` writes (it may be null when `capacity` is 0).
#[no_mangle]
pub unsafe extern "C" fn sg_spectrum(
    g: *const SgGraph,
    op: SgOperator,
    buf: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> SgStatus {
    guard(|| {
        let len = out_ptr(len)?;
        let g = graph_ref(g)?;
        let values = match op {
            SgOperator::Even => even_spectrum(g).map(|s| s.eigenvalues),
            SgOperator::Odd => odd_spectrum(g).map(|s| s.eigenvalues),
            SgOperator::Susy => laplacian_susy(g).to_sym().and_then(|m| eigvals_sym(&m)),
            SgOperator::Dirac => dirac_incidence(g).to_sym().and_then(|m| eigvals_sym(&m)),
        }
        .map_err(fail)?;
        *len = values.len();
        if values.len() > capacity {
            set_error(format!("buffer holds {capacity} values, {} needed", values.len()));
            return Err(SgStatus::BufferTooSmall);
        }
        if !values.is_empty() {
            let buf = out_ptr(buf)?;
            ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
        }
        Ok(())
    })
}
