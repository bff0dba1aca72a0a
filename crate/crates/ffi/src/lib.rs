//! C interface. Handles are opaque pointers owned by the library;
//! every function returns an AlwpStatus and writes results through out
//! pointers. All entry points catch panics so that no unwinding ever
//! crosses the language boundary.

use std::ffi::CStr;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use alwp_core::fixedpoints::{enumerate_fixed_points, nu, HeegnerPoint};
use alwp_core::weierstrass::{classify, genus0, Status};
use alwp_core::wronskian::basis::{load_basis, CuspFormBasis};
use alwp_core::wronskian::verdict;

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlwpStatus {
    AlwpOk = 0,
    AlwpNullPointer = 1,
    AlwpInvalidArgument = 2,
    AlwpNotExactDivisor = 3,
    AlwpIoError = 4,
    AlwpNumericError = 5,
    AlwpIndexOutOfRange = 6,
}

/// Weierstrass classification by the counting criterion.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlwpClassification {
    AlwpAllWeierstrass = 0,
    AlwpNoFixedPoints = 1,
    AlwpUndeterminedByCriterion = 2,
    AlwpGenusTooSmall = 3,
}

/// Outcome of the numerical Wronskian test.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlwpVerdict {
    AlwpNotWeierstrass = 0,
    AlwpLikelyWeierstrass = 1,
    AlwpInconclusive = 2,
}

/// A fixed point as an exact CM point: tau = (-b + sqrt(-d)) / (2a)
/// with the level form [a, b, c] of discriminant -d.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlwpPoint {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub beta: i64,
}

/// Determinant interval and scale from one Wronskian evaluation.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlwpWronskian {
    pub det_re: f64,
    pub det_im: f64,
    pub det_rad: f64,
    pub hadamard: f64,
    pub verdict: AlwpVerdict,
}

/// Opaque enumeration of the fixed points of the full involution.
pub struct AlwpFixedPoints {
    level: i64,
    points: Vec<HeegnerPoint>,
}

/// Opaque loaded cusp form basis.
pub struct AlwpBasis {
    basis: CuspFormBasis,
}

fn guarded<F: FnOnce() -> AlwpStatus>(f: F) -> AlwpStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(AlwpStatus::AlwpNumericError)
}

/// Number of fixed points of W_Q on X_0(N). Returns
/// ALWP_NOT_EXACT_DIVISOR unless Q is an exact divisor of N with Q >= 2.
#[no_mangle]
pub extern "C" fn alwp_nu(level: i64, q: i64, out: *mut i64) -> AlwpStatus {
    if out.is_null() {
        return AlwpStatus::AlwpNullPointer;
    }
    guarded(|| match nu(q, level) {
        Ok(report) => {
            unsafe { *out = report.total };
            AlwpStatus::AlwpOk
        }
        Err(_) => AlwpStatus::AlwpNotExactDivisor,
    })
}

/// Genus of X_0(N).
#[no_mangle]
pub extern "C" fn alwp_genus(level: i64, out: *mut i64) -> AlwpStatus {
    if out.is_null() {
        return AlwpStatus::AlwpNullPointer;
    }
    if level < 1 {
        return AlwpStatus::AlwpInvalidArgument;
    }
    guarded(|| {
        unsafe { *out = genus0(level).g0 };
        AlwpStatus::AlwpOk
    })
}

/// Classify the fixed points of W_Q on X_0(N) by the counting
/// criterion.
#[no_mangle]
pub extern "C" fn alwp_classify(
    level: i64,
    q: i64,
    out: *mut AlwpClassification,
) -> AlwpStatus {
    if out.is_null() {
        return AlwpStatus::AlwpNullPointer;
    }
    guarded(|| match classify(level, q) {
        Ok(v) => {
            let c = match v.status {
                Status::AllWeierstrass => AlwpClassification::AlwpAllWeierstrass,
                Status::NoFixedPoints => AlwpClassification::AlwpNoFixedPoints,
                Status::UndeterminedByCriterion => {
                    AlwpClassification::AlwpUndeterminedByCriterion
                }
                Status::GenusTooSmall => AlwpClassification::AlwpGenusTooSmall,
            };
            unsafe { *out = c };
            AlwpStatus::AlwpOk
        }
        Err(_) => AlwpStatus::AlwpNotExactDivisor,
    })
}

/// Enumerate the fixed points of the full involution at the given
/// level. The handle must be released with alwp_fixed_points_free.
#[no_mangle]
pub extern "C" fn alwp_fixed_points_new(
    level: i64,
    out: *mut *mut AlwpFixedPoints,
) -> AlwpStatus {
    if out.is_null() {
        return AlwpStatus::AlwpNullPointer;
    }
    guarded(|| match enumerate_fixed_points(level) {
        Ok(points) => {
            let handle = Box::new(AlwpFixedPoints { level, points });
            unsafe { *out = Box::into_raw(handle) };
            AlwpStatus::AlwpOk
        }
        Err(_) => AlwpStatus::AlwpInvalidArgument,
    })
}

/// Number of points behind the handle.
#[no_mangle]
pub extern "C" fn alwp_fixed_points_count(
    handle: *const AlwpFixedPoints,
    out: *mut usize,
) -> AlwpStatus {
    if handle.is_null() || out.is_null() {
        return AlwpStatus::AlwpNullPointer;
    }
    unsafe { *out = (*handle).points.len() };
    AlwpStatus::AlwpOk
}

/// Copy out the point at the given index.
#[no_mangle]
pub extern "C" fn alwp_fixed_points_get(
    handle: *const AlwpFixedPoints,
    index: usize,
    out: *mut AlwpPoint,
) -> AlwpStatus {
    if handle.is_null() || out.is_null() {
        return AlwpStatus::AlwpNullPointer;
    }
    let points = unsafe { &(*handle).points };
    match points.get(index) {
        Some(p) => {
            unsafe {
                *out = AlwpPoint {
                    a: p.form.a,
                    b: p.form.b,
                    c: p.form.c,
                    d: p.d,
                    beta: p.beta,
                };
            }
            AlwpStatus::AlwpOk
        }
        None => AlwpStatus::AlwpIndexOutOfRange,
    }
}

/// Release an enumeration handle. Passing NULL is a no-op.
#[no_mangle]
pub extern "C" fn alwp_fixed_points_free(handle: *mut AlwpFixedPoints) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Load a cusp form basis from a text file. The handle must be
/// released with alwp_basis_free.
#[no_mangle]
pub extern "C" fn alwp_basis_load(
    path: *const c_char,
    out: *mut *mut AlwpBasis,
) -> AlwpStatus {
    if path.is_null() || out.is_null() {
        return AlwpStatus::AlwpNullPointer;
    }
    let path = match unsafe { CStr::from_ptr(path) }.to_str() {
        Ok(s) => s,
        Err(_) => return AlwpStatus::AlwpInvalidArgument,
    };
    guarded(|| match load_basis(Path::new(path)) {
        Ok(basis) => {
            let handle = Box::new(AlwpBasis { basis });
            unsafe { *out = Box::into_raw(handle) };
            AlwpStatus::AlwpOk
        }
        Err(_) => AlwpStatus::AlwpIoError,
    })
}

/// Level and genus of a loaded basis.
#[no_mangle]
pub extern "C" fn alwp_basis_info(
    handle: *const AlwpBasis,
    out_level: *mut i64,
    out_genus: *mut usize,
) -> AlwpStatus {
    if handle.is_null() || out_level.is_null() || out_genus.is_null() {
        return AlwpStatus::AlwpNullPointer;
    }
    let basis = unsafe { &(*handle).basis };
    unsafe {
        *out_level = basis.n;
        *out_genus = basis.g;
    }
    AlwpStatus::AlwpOk
}

/// Release a basis handle. Passing NULL is a no-op.
#[no_mangle]
pub extern "C" fn alwp_basis_free(handle: *mut AlwpBasis) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Run the Wronskian test at one fixed point of the enumeration.
/// digits is the working precision (minimum 15); trunc 0 selects the
/// default series truncation.
#[no_mangle]
pub extern "C" fn alwp_wronskian(
    basis: *const AlwpBasis,
    points: *const AlwpFixedPoints,
    index: usize,
    digits: u32,
    trunc: usize,
    out: *mut AlwpWronskian,
) -> AlwpStatus {
    if basis.is_null() || points.is_null() || out.is_null() {
        return AlwpStatus::AlwpNullPointer;
    }
    if digits < 15 {
        return AlwpStatus::AlwpInvalidArgument;
    }
    let basis = unsafe { &(*basis).basis };
    let handle = unsafe { &*points };
    let pt = match handle.points.get(index) {
        Some(p) => p,
        None => return AlwpStatus::AlwpIndexOutOfRange,
    };
    if basis.n != handle.level {
        return AlwpStatus::AlwpInvalidArgument;
    }
    let trunc = if trunc == 0 { None } else { Some(trunc) };
    guarded(|| match verdict(basis, pt, digits, trunc) {
        Ok(r) => {
            let v = match r.verdict {
                alwp_core::wronskian::WronskianVerdict::NotWeierstrass => {
                    AlwpVerdict::AlwpNotWeierstrass
                }
                alwp_core::wronskian::WronskianVerdict::LikelyWeierstrass => {
                    AlwpVerdict::AlwpLikelyWeierstrass
                }
                alwp_core::wronskian::WronskianVerdict::Inconclusive => {
                    AlwpVerdict::AlwpInconclusive
                }
            };
            unsafe {
                *out = AlwpWronskian {
                    det_re: r.det.mid.real().to_f64(),
                    det_im: r.det.mid.imag().to_f64(),
                    det_rad: r.det.rad,
                    hadamard: r.hadamard,
                    verdict: v,
                };
            }
            AlwpStatus::AlwpOk
        }
        Err(_) => AlwpStatus::AlwpNumericError,
    })
}
