//! C ABI over `fair_kset`.
//!
//! Instances and selections are opaque heap handles released with their
//! `_free` function. Every fallible call returns an [`FksStatus`]; on failure
//! [`fks_last_error`] describes the error for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fair_kset::error::Error;
use fair_kset::instance::{Instance, Selection};
use fair_kset::io::InstanceDoc;
use fair_kset::solve::{solve, Method, SolveOptions};

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FksStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    SolverError = 3,
    BufferTooSmall = 4,
    Panic = 5,
}

/// Algorithm selector for [`fks_solve`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FksMethod {
    Auto = 0,
    Delta2 = 1,
    Laminar = 2,
    Oracle = 3,
    Lll = 4,
    Pipage = 5,
    Independent = 6,
}

impl From<FksMethod> for Method {
    fn from(m: FksMethod) -> Self {
        match m {
            FksMethod::Auto => Method::Auto,
            FksMethod::Delta2 => Method::Delta2,
            FksMethod::Laminar => Method::Laminar,
            FksMethod::Oracle => Method::Oracle,
            FksMethod::Lll => Method::Lll,
            FksMethod::Pipage => Method::Pipage,
            FksMethod::Independent => Method::Independent,
        }
    }
}

/// Opaque instance handle.
pub struct FksInstance {
    doc: InstanceDoc,
    flat: Instance,
}

/// Opaque selection handle.
pub struct FksSelection {
    selection: Selection,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> FksStatus {
    if e.exit_code() == 1 {
        FksStatus::InvalidInput
    } else {
        FksStatus::SolverError
    }
}

/// Runs `f`, recording errors and converting panics.
fn guard(f: impl FnOnce() -> Result<(), (FksStatus, String)>) -> FksStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FksStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            FksStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (FksStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (FksStatus, String) {
    (FksStatus::NullPointer, format!("{what} is null"))
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn fks_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a NUL-terminated JSON instance.
///
/// # Safety
/// `json` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fks_instance_from_json(json: *const c_char, out: *mut *mut FksInstance) -> FksStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|e| (FksStatus::InvalidInput, e.to_string()))?;
        let doc = InstanceDoc::from_json(text).map_err(lib_err)?;
        let flat = doc.to_instance().map_err(lib_err)?;
        *out = Box::into_raw(Box::new(FksInstance { doc, flat }));
        Ok(())
    })
}

/// Builds an instance from compressed rows: agent `u` is adjacent to
/// `indices[offsets[u] .. offsets[u + 1]]`. `weights` may be null for unit
/// weights, otherwise it holds `n_candidates` entries.
///
/// # Safety
/// `offsets` must hold `n_agents + 1` entries, `indices` at least
/// `offsets[n_agents]`, and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fks_instance_from_csr(
    n_agents: usize,
    n_candidates: usize,
    offsets: *const usize,
    indices: *const usize,
    weights: *const f64,
    demand: usize,
    out: *mut *mut FksInstance,
) -> FksStatus {
    guard(|| {
        if offsets.is_null() {
            return Err(null("offsets"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let offsets = std::slice::from_raw_parts(offsets, n_agents + 1);
        if offsets[0] != 0 || offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err((FksStatus::InvalidInput, "offsets must start at 0 and be non-decreasing".into()));
        }
        let nnz = offsets[n_agents];
        if nnz > 0 && indices.is_null() {
            return Err(null("indices"));
        }
        let indices = if nnz == 0 { &[][..] } else { std::slice::from_raw_parts(indices, nnz) };
        let adj = offsets.windows(2).map(|w| indices[w[0]..w[1]].to_vec()).collect();
        let weights = (!weights.is_null()).then(|| std::slice::from_raw_parts(weights, n_candidates).to_vec());
        let flat = Instance::new(n_candidates, adj, weights, demand).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(FksInstance { doc: InstanceDoc::Bipartite(flat.clone()), flat }));
        Ok(())
    })
}

/// # Safety
/// `instance` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn fks_instance_free(instance: *mut FksInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// Number of agents, or 0 for a null handle.
///
/// # Safety
/// `instance` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fks_instance_n_agents(instance: *const FksInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.flat.n_agents())
}

/// # Safety
/// `instance` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fks_instance_n_candidates(instance: *const FksInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.flat.n_candidates)
}

/// # Safety
/// `instance` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fks_instance_demand(instance: *const FksInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.flat.demand)
}

/// Maximum disagreement of the candidates `ids[0 .. len]`.
///
/// # Safety
/// `instance` must be live, `ids` must hold `len` entries (or be null when
/// `len` is 0), and `value` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fks_evaluate(
    instance: *const FksInstance,
    ids: *const usize,
    len: usize,
    value: *mut f64,
) -> FksStatus {
    guard(|| {
        let instance = instance.as_ref().ok_or_else(|| null("instance"))?;
        if value.is_null() {
            return Err(null("value"));
        }
        if len > 0 && ids.is_null() {
            return Err(null("ids"));
        }
        let ids = if len == 0 { &[][..] } else { std::slice::from_raw_parts(ids, len) };
        *value = instance.flat.max_disagreement(ids).map_err(lib_err)?;
        Ok(())
    })
}

/// Solves `instance` with `method`.
///
/// # Safety
/// `instance` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn fks_solve(
    instance: *const FksInstance,
    method: FksMethod,
    seed: u64,
    out: *mut *mut FksSelection,
) -> FksStatus {
    guard(|| {
        let instance = instance.as_ref().ok_or_else(|| null("instance"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let options = SolveOptions { seed, ..Default::default() };
        let solved = solve(&instance.doc, method.into(), &options).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(FksSelection { selection: solved.selection }));
        Ok(())
    })
}

/// Number of selected candidates, or 0 for a null handle.
///
/// # Safety
/// `selection` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fks_selection_len(selection: *const FksSelection) -> usize {
    selection.as_ref().map_or(0, |s| s.selection.len())
}

/// Objective value, or NaN for a null handle.
///
/// # Safety
/// `selection` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fks_selection_value(selection: *const FksSelection) -> f64 {
    selection.as_ref().map_or(f64::NAN, |s| s.selection.value)
}

/// Copies the sorted candidate ids into `buf`, which holds `cap` entries.
///
/// # Safety
/// `selection` must be live and `buf` must hold `cap` entries.
#[no_mangle]
pub unsafe extern "C" fn fks_selection_ids(selection: *const FksSelection, buf: *mut usize, cap: usize) -> FksStatus {
    guard(|| {
        let s = selection.as_ref().ok_or_else(|| null("selection"))?;
        let ids = &s.selection.chosen;
        if ids.len() > cap {
            return Err((FksStatus::BufferTooSmall, format!("need {} entries, got {cap}", ids.len())));
        }
        if !ids.is_empty() {
            if buf.is_null() {
                return Err(null("buf"));
            }
            ptr::copy_nonoverlapping(ids.as_ptr(), buf, ids.len());
        }
        Ok(())
    })
}

/// # Safety
/// `selection` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn fks_selection_free(selection: *mut FksSelection) {
    if !selection.is_null() {
        drop(Box::from_raw(selection));
    }
}
