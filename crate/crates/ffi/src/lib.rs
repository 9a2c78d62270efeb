//! C ABI for the hinted-dict ordered dictionaries.
//!
//! The surface is monomorphized to 64-bit integer keys and 64-bit float
//! values under the float-add monoid (inserting an existing key adds the
//! values), which covers the sparse-vector and counted-set use cases other
//! languages typically bind first.
//!
//! Conventions:
//!
//! * Dictionaries are opaque handles (`HdDict*`) created by [`hd_dict_new`]
//!   and released by [`hd_dict_free`]. Handles are single-threaded values;
//!   they may be moved between threads but not shared without external
//!   synchronization.
//! * Every function returns an [`HdStatus`] (or a handle that is null on
//!   failure). Contract violations inside the library — a key equal to one
//!   of the order sentinels `i64::MIN`/`i64::MAX` — are caught and reported
//!   as [`HdStatus::ContractViolation`] instead of unwinding across the FFI
//!   boundary.
//! * Binary operations require both operands to use the same backend and
//!   report [`HdStatus::BackendMismatch`] otherwise.
//!
//! The C header is generated into `include/hinted_dict.h` at build time.

use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use hinted_dict::algebra::{monoids, orders};
use hinted_dict::algorithms;
use hinted_dict::array::{ArrayDict, ArrayView, SeekMethod, TunedArrayDict};
use hinted_dict::dict::HintedDict;
use hinted_dict::tree::{AvlDict, InfoEntry, Tree, UnbalancedDict, WbbDict};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// A library precondition was violated (for example a sentinel key).
    ContractViolation = 3,
    /// The caller-supplied buffer cannot hold the result.
    CapacityTooSmall = 4,
    /// Binary operation over two different backends.
    BackendMismatch = 5,
}

/// Backend selector for [`hd_dict_new`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HdBackend {
    ArrayLinear = 0,
    ArrayBinary = 1,
    Avl = 2,
    Wbb = 3,
    Unbalanced = 4,
    ArrayPersistent = 5,
}

enum Inner {
    Tuned(SeekMethod, TunedArrayDict<i64, f64>),
    Persistent(ArrayDict<i64, f64>, ArrayView<i64, f64>),
    Avl(AvlDict<i64, f64>, Tree<InfoEntry<i64, f64>>),
    Wbb(WbbDict<i64, f64>, Tree<InfoEntry<i64, f64>>),
    Unbalanced(UnbalancedDict<i64, f64>, Tree<(i64, f64)>),
}

/// Opaque dictionary handle.
pub struct HdDict {
    inner: Inner,
}

impl HdDict {
    fn new(backend: HdBackend) -> Self {
        let ord = orders::int64();
        let mon = monoids::f64_add();
        let inner = match backend {
            HdBackend::ArrayLinear => {
                Inner::Tuned(SeekMethod::Linear, TunedArrayDict::new(ord, mon))
            }
            HdBackend::ArrayBinary => {
                Inner::Tuned(SeekMethod::Binary, TunedArrayDict::new(ord, mon))
            }
            HdBackend::Avl => {
                let backend = AvlDict::new(ord, mon);
                let dict = backend.empty();
                Inner::Avl(backend, dict)
            }
            HdBackend::Wbb => {
                let backend = WbbDict::new(ord, mon);
                let dict = backend.empty();
                Inner::Wbb(backend, dict)
            }
            HdBackend::Unbalanced => {
                let backend = UnbalancedDict::new(ord, mon);
                let dict = backend.empty();
                Inner::Unbalanced(backend, dict)
            }
            HdBackend::ArrayPersistent => {
                let backend = ArrayDict::new(ord, mon);
                let dict = backend.empty();
                Inner::Persistent(backend, dict)
            }
        };
        HdDict { inner }
    }

    fn insert(&mut self, key: i64, value: f64) {
        match &mut self.inner {
            Inner::Tuned(method, d) => d.insert(&key, &value, *method),
            Inner::Persistent(b, d) => take_update(b, d, |b, d| b.insert(d, &key, &value)),
            Inner::Avl(b, d) => take_update(b, d, |b, d| b.insert(d, &key, &value)),
            Inner::Wbb(b, d) => take_update(b, d, |b, d| b.insert(d, &key, &value)),
            Inner::Unbalanced(b, d) => take_update(b, d, |b, d| b.insert(d, &key, &value)),
        }
    }

    fn delete(&mut self, key: i64) {
        match &mut self.inner {
            Inner::Tuned(method, d) => d.delete(&key, *method),
            Inner::Persistent(b, d) => take_update(b, d, |b, d| b.delete(d, &key)),
            Inner::Avl(b, d) => take_update(b, d, |b, d| b.delete(d, &key)),
            Inner::Wbb(b, d) => take_update(b, d, |b, d| b.delete(d, &key)),
            Inner::Unbalanced(b, d) => take_update(b, d, |b, d| b.delete(d, &key)),
        }
    }

    fn find(&self, key: i64) -> f64 {
        match &self.inner {
            Inner::Tuned(method, d) => d.find(&key, *method),
            Inner::Persistent(b, d) => b.find(d, &key),
            Inner::Avl(b, d) => b.find(d, &key),
            Inner::Wbb(b, d) => b.find(d, &key),
            Inner::Unbalanced(b, d) => b.find(d, &key),
        }
    }

    fn size(&self) -> usize {
        match &self.inner {
            Inner::Tuned(_, d) => d.size(),
            Inner::Persistent(b, d) => b.size(d),
            Inner::Avl(b, d) => b.size(d),
            Inner::Wbb(b, d) => b.size(d),
            Inner::Unbalanced(b, d) => b.size(d),
        }
    }

    fn count(&self) -> usize {
        match &self.inner {
            Inner::Tuned(_, d) => d.count(),
            Inner::Persistent(b, d) => b.count(d),
            Inner::Avl(b, d) => b.count(d),
            Inner::Wbb(b, d) => b.count(d),
            Inner::Unbalanced(b, d) => b.count(d),
        }
    }

    fn entries(&self) -> Vec<(i64, f64)> {
        match &self.inner {
            Inner::Tuned(_, d) => d.to_list(),
            Inner::Persistent(b, d) => b.to_list(d),
            Inner::Avl(b, d) => b.to_list(d),
            Inner::Wbb(b, d) => b.to_list(d),
            Inner::Unbalanced(b, d) => b.to_list(d),
        }
    }

    /// Key-union with added values (`None` when backends differ).
    fn merge_add(&self, other: &HdDict) -> Option<HdDict> {
        let inner = match (&self.inner, &other.inner) {
            (Inner::Tuned(m, a), Inner::Tuned(m2, b)) if m == m2 => {
                Inner::Tuned(*m, algorithms::union_hinted(a, b.clone(), *m))
            }
            (Inner::Persistent(be, a), Inner::Persistent(_, b)) => {
                Inner::Persistent(be.clone(), algorithms::union_fold_tree(be, a, b.clone()))
            }
            (Inner::Avl(be, a), Inner::Avl(_, b)) => {
                Inner::Avl(be.clone(), algorithms::union_fold_tree(be, a, b.clone()))
            }
            (Inner::Wbb(be, a), Inner::Wbb(_, b)) => {
                Inner::Wbb(be.clone(), algorithms::union_fold_tree(be, a, b.clone()))
            }
            (Inner::Unbalanced(be, a), Inner::Unbalanced(_, b)) => {
                Inner::Unbalanced(be.clone(), algorithms::union_fold_tree(be, a, b.clone()))
            }
            _ => return None,
        };
        Some(HdDict { inner })
    }

    /// Key-intersection with multiplied values (`None` when backends differ).
    fn merge_mul(&self, other: &HdDict) -> Option<HdDict> {
        let mul = monoids::f64_mul();
        let inner = match (&self.inner, &other.inner) {
            (Inner::Tuned(m, a), Inner::Tuned(m2, b)) if m == m2 => {
                Inner::Tuned(*m, algorithms::intersect_hinted(&mul, a, b.clone(), *m))
            }
            (Inner::Persistent(be, a), Inner::Persistent(_, b)) => Inner::Persistent(
                be.clone(),
                algorithms::intersect_fold_tree(be, &mul, a, b.clone()),
            ),
            (Inner::Avl(be, a), Inner::Avl(_, b)) => {
                Inner::Avl(be.clone(), algorithms::intersect_fold_tree(be, &mul, a, b.clone()))
            }
            (Inner::Wbb(be, a), Inner::Wbb(_, b)) => {
                Inner::Wbb(be.clone(), algorithms::intersect_fold_tree(be, &mul, a, b.clone()))
            }
            (Inner::Unbalanced(be, a), Inner::Unbalanced(_, b)) => Inner::Unbalanced(
                be.clone(),
                algorithms::intersect_fold_tree(be, &mul, a, b.clone()),
            ),
            _ => return None,
        };
        Some(HdDict { inner })
    }

    fn inner_product(&self, other: &HdDict) -> Option<f64> {
        let mul = monoids::f64_mul();
        match (&self.inner, &other.inner) {
            (Inner::Tuned(m, a), Inner::Tuned(m2, b)) if m == m2 => {
                Some(algorithms::inner_product_hinted(&mul, a, b.clone(), *m))
            }
            (Inner::Persistent(be, a), Inner::Persistent(_, b)) => {
                Some(algorithms::inner_product_fold_left(be, &mul, a, b.clone()))
            }
            (Inner::Avl(be, a), Inner::Avl(_, b)) => {
                Some(algorithms::inner_product_fold_left(be, &mul, a, b.clone()))
            }
            (Inner::Wbb(be, a), Inner::Wbb(_, b)) => {
                Some(algorithms::inner_product_fold_left(be, &mul, a, b.clone()))
            }
            (Inner::Unbalanced(be, a), Inner::Unbalanced(_, b)) => {
                Some(algorithms::inner_product_fold_left(be, &mul, a, b.clone()))
            }
            _ => None,
        }
    }

    fn duplicate(&self) -> HdDict {
        let inner = match &self.inner {
            Inner::Tuned(m, d) => Inner::Tuned(*m, d.clone()),
            Inner::Persistent(b, d) => Inner::Persistent(b.clone(), d.clone()),
            Inner::Avl(b, d) => Inner::Avl(b.clone(), d.clone()),
            Inner::Wbb(b, d) => Inner::Wbb(b.clone(), d.clone()),
            Inner::Unbalanced(b, d) => Inner::Unbalanced(b.clone(), d.clone()),
        };
        HdDict { inner }
    }
}

fn take_update<B: HintedDict>(backend: &B, dict: &mut B::Dict, op: impl FnOnce(&B, B::Dict) -> B::Dict) {
    let taken = std::mem::replace(dict, backend.empty());
    *dict = op(backend, taken);
}

fn backend_from_raw(raw: i32) -> Option<HdBackend> {
    match raw {
        0 => Some(HdBackend::ArrayLinear),
        1 => Some(HdBackend::ArrayBinary),
        2 => Some(HdBackend::Avl),
        3 => Some(HdBackend::Wbb),
        4 => Some(HdBackend::Unbalanced),
        5 => Some(HdBackend::ArrayPersistent),
        _ => None,
    }
}

fn guarded(body: impl FnOnce() -> HdStatus) -> HdStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => HdStatus::ContractViolation,
    }
}

/// Create a dictionary for the given backend code; null for unknown codes.
#[no_mangle]
pub extern "C" fn hd_dict_new(backend: i32) -> *mut HdDict {
    match backend_from_raw(backend) {
        Some(kind) => Box::into_raw(Box::new(HdDict::new(kind))),
        None => std::ptr::null_mut(),
    }
}

/// Deep copy; null input yields null.
///
/// # Safety
/// `dict` must be null or a pointer from `hd_dict_new`/merge functions that
/// has not been freed.
#[no_mangle]
pub unsafe extern "C" fn hd_dict_clone(dict: *const HdDict) -> *mut HdDict {
    if dict.is_null() {
        return std::ptr::null_mut();
    }
    Box::into_raw(Box::new((*dict).duplicate()))
}

/// Release a dictionary handle; null is a no-op.
///
/// # Safety
/// `dict` must be null or an unfreed pointer obtained from this library.
#[no_mangle]
pub unsafe extern "C" fn hd_dict_free(dict: *mut HdDict) {
    if !dict.is_null() {
        drop(Box::from_raw(dict));
    }
}

/// Insert `(key, value)`; an existing key accumulates (`old + value`).
///
/// # Safety
/// `dict` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn hd_dict_insert(dict: *mut HdDict, key: i64, value: f64) -> HdStatus {
    let Some(dict) = dict.as_mut() else {
        return HdStatus::NullPointer;
    };
    guarded(|| {
        dict.insert(key, value);
        HdStatus::Ok
    })
}

/// Remove `key`; removing an absent key succeeds.
///
/// # Safety
/// `dict` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn hd_dict_delete(dict: *mut HdDict, key: i64) -> HdStatus {
    let Some(dict) = dict.as_mut() else {
        return HdStatus::NullPointer;
    };
    guarded(|| {
        dict.delete(key);
        HdStatus::Ok
    })
}

/// Fetch the value at `key` into `out`; absent keys read 0.0.
///
/// # Safety
/// `dict` must be a valid handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hd_dict_find(dict: *const HdDict, key: i64, out: *mut f64) -> HdStatus {
    let Some(dict) = dict.as_ref() else {
        return HdStatus::NullPointer;
    };
    if out.is_null() {
        return HdStatus::NullPointer;
    }
    guarded(|| {
        *out = dict.find(key);
        HdStatus::Ok
    })
}

/// Number of stored entries (zero-valued entries included).
///
/// # Safety
/// `dict` must be a valid handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hd_dict_size(dict: *const HdDict, out: *mut u64) -> HdStatus {
    let Some(dict) = dict.as_ref() else {
        return HdStatus::NullPointer;
    };
    if out.is_null() {
        return HdStatus::NullPointer;
    }
    *out = dict.size() as u64;
    HdStatus::Ok
}

/// Number of entries with a non-zero value.
///
/// # Safety
/// `dict` must be a valid handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hd_dict_count(dict: *const HdDict, out: *mut u64) -> HdStatus {
    let Some(dict) = dict.as_ref() else {
        return HdStatus::NullPointer;
    };
    if out.is_null() {
        return HdStatus::NullPointer;
    }
    *out = dict.count() as u64;
    HdStatus::Ok
}

/// Copy all entries in ascending key order into the caller's buffers.
/// `capacity` is the element capacity of both buffers; `written` receives
/// the entry count. Fails with `CapacityTooSmall` (writing nothing) when the
/// dictionary holds more entries than `capacity`.
///
/// # Safety
/// `dict` must be a valid handle; `keys` and `values` must point to at least
/// `capacity` writable elements; `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hd_dict_entries(
    dict: *const HdDict,
    keys: *mut i64,
    values: *mut f64,
    capacity: u64,
    written: *mut u64,
) -> HdStatus {
    let Some(dict) = dict.as_ref() else {
        return HdStatus::NullPointer;
    };
    if keys.is_null() || values.is_null() || written.is_null() {
        return HdStatus::NullPointer;
    }
    let entries = dict.entries();
    if entries.len() as u64 > capacity {
        return HdStatus::CapacityTooSmall;
    }
    for (i, (k, v)) in entries.iter().enumerate() {
        *keys.add(i) = *k;
        *values.add(i) = *v;
    }
    *written = entries.len() as u64;
    HdStatus::Ok
}

/// Key-union of two dictionaries of the same backend; matched values are
/// added. Returns null on null input or backend mismatch.
///
/// # Safety
/// `left` and `right` must be valid handles.
#[no_mangle]
pub unsafe extern "C" fn hd_dict_merge_add(
    left: *const HdDict,
    right: *const HdDict,
) -> *mut HdDict {
    let (Some(left), Some(right)) = (left.as_ref(), right.as_ref()) else {
        return std::ptr::null_mut();
    };
    match catch_unwind(AssertUnwindSafe(|| left.merge_add(right))) {
        Ok(Some(result)) => Box::into_raw(Box::new(result)),
        _ => std::ptr::null_mut(),
    }
}

/// Key-intersection of two dictionaries of the same backend; matched values
/// are multiplied. Returns null on null input or backend mismatch.
///
/// # Safety
/// `left` and `right` must be valid handles.
#[no_mangle]
pub unsafe extern "C" fn hd_dict_merge_mul(
    left: *const HdDict,
    right: *const HdDict,
) -> *mut HdDict {
    let (Some(left), Some(right)) = (left.as_ref(), right.as_ref()) else {
        return std::ptr::null_mut();
    };
    match catch_unwind(AssertUnwindSafe(|| left.merge_mul(right))) {
        Ok(Some(result)) => Box::into_raw(Box::new(result)),
        _ => std::ptr::null_mut(),
    }
}

/// Sum over shared keys of multiplied values.
///
/// # Safety
/// `left` and `right` must be valid handles and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hd_dict_inner_product(
    left: *const HdDict,
    right: *const HdDict,
    out: *mut f64,
) -> HdStatus {
    let (Some(left), Some(right)) = (left.as_ref(), right.as_ref()) else {
        return HdStatus::NullPointer;
    };
    if out.is_null() {
        return HdStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(|| left.inner_product(right))) {
        Ok(Some(value)) => {
            *out = value;
            HdStatus::Ok
        }
        Ok(None) => HdStatus::BackendMismatch,
        Err(_) => HdStatus::ContractViolation,
    }
}

/// Static name for a status code (never null).
#[no_mangle]
pub extern "C" fn hd_status_name(status: HdStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        HdStatus::Ok => b"ok\0",
        HdStatus::NullPointer => b"null pointer\0",
        HdStatus::InvalidArgument => b"invalid argument\0",
        HdStatus::ContractViolation => b"contract violation\0",
        HdStatus::CapacityTooSmall => b"capacity too small\0",
        HdStatus::BackendMismatch => b"backend mismatch\0",
    };
    name.as_ptr() as *const c_char
}
