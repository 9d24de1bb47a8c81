//! C ABI for `linhyp`.
//!
//! Matrices cross the boundary as opaque [`LinhypMatrix`] handles built from
//! row-major `double` arrays and released with [`linhyp_matrix_free`]. Every
//! fallible call returns a [`LinhypStatus`] and writes results through out
//! pointers, which are left untouched on failure. A `tau` below zero selects
//! the default band `1e-9 · (1 + ‖A‖₂)`. Panics are caught and reported as
//! [`LinhypStatus::Panic`].

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use linhyp::flow::expm;
use linhyp::robustness::{hyperbolize, margin};
use linhyp::{classify, default_tau, eigenvalues, Error, HyperbolicityVerdict, MatrixR};

/// Opaque matrix handle.
pub struct LinhypMatrix {
    inner: MatrixR,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinhypStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NonFinite = 3,
    DimensionMismatch = 4,
    NotHyperbolic = 5,
    NonConvergence = 6,
    ShiftTooSmall = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinhypVerdict {
    Hyperbolic = 0,
    NonHyperbolic = 1,
    Indeterminate = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinhypClassification {
    pub verdict: LinhypVerdict,
    pub s: usize,
    pub u: usize,
    pub c: usize,
    pub tau: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinhypMargin {
    pub lower: f64,
    pub upper: f64,
    pub omega_star: f64,
    pub iterations: usize,
    pub hyperbolic: bool,
}

fn status_of(e: &Error) -> LinhypStatus {
    match e {
        Error::NonFinite { .. } => LinhypStatus::NonFinite,
        Error::DimensionMismatch { .. } | Error::NotSquare { .. } | Error::UnsupportedDimension { .. } => {
            LinhypStatus::DimensionMismatch
        }
        Error::NotHyperbolic { .. } => LinhypStatus::NotHyperbolic,
        Error::NonConvergence { .. } => LinhypStatus::NonConvergence,
        Error::ShiftTooSmall { .. } => LinhypStatus::ShiftTooSmall,
        _ => LinhypStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), LinhypStatus>) -> LinhypStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LinhypStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => LinhypStatus::Panic,
    }
}

unsafe fn matrix_ref<'a>(m: *const LinhypMatrix) -> Result<&'a MatrixR, LinhypStatus> {
    m.as_ref().map(|m| &m.inner).ok_or(LinhypStatus::NullPointer)
}

fn resolve_tau(a: &MatrixR, tau: f64) -> Result<f64, LinhypStatus> {
    if tau.is_nan() || tau.is_infinite() {
        Err(LinhypStatus::InvalidArgument)
    } else if tau < 0.0 {
        Ok(default_tau(a))
    } else {
        Ok(tau)
    }
}

fn boxed(m: MatrixR) -> *mut LinhypMatrix {
    Box::into_raw(Box::new(LinhypMatrix { inner: m }))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn linhyp_status_message(status: LinhypStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        LinhypStatus::Ok => b"ok\0",
        LinhypStatus::NullPointer => b"null pointer argument\0",
        LinhypStatus::InvalidArgument => b"invalid argument\0",
        LinhypStatus::NonFinite => b"matrix has a non-finite entry\0",
        LinhypStatus::DimensionMismatch => b"dimension mismatch\0",
        LinhypStatus::NotHyperbolic => b"matrix is not hyperbolic\0",
        LinhypStatus::NonConvergence => b"iteration did not converge\0",
        LinhypStatus::ShiftTooSmall => b"shift would not exceed the tolerance band\0",
        LinhypStatus::BufferTooSmall => b"output buffer too small\0",
        LinhypStatus::Panic => b"internal error\0",
    };
    msg.as_ptr().cast()
}

/// Builds a `d × d` matrix from `d*d` row-major entries.
///
/// # Safety
/// `data` must point to `d*d` readable doubles and `out` to writable storage
/// for one pointer.
#[no_mangle]
pub unsafe extern "C" fn linhyp_matrix_new(d: usize, data: *const f64, out: *mut *mut LinhypMatrix) -> LinhypStatus {
    guard(|| {
        if data.is_null() || out.is_null() {
            return Err(LinhypStatus::NullPointer);
        }
        let len = d.checked_mul(d).filter(|&n| n > 0).ok_or(LinhypStatus::InvalidArgument)?;
        let values = std::slice::from_raw_parts(data, len).to_vec();
        let m = MatrixR::from_row_major(d, values).map_err(|e| status_of(&e))?;
        *out = boxed(m);
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `m` must be null or a handle returned by this library that has not been
/// freed yet.
#[no_mangle]
pub unsafe extern "C" fn linhyp_matrix_free(m: *mut LinhypMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Dimension of the matrix, 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn linhyp_matrix_dim(m: *const LinhypMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.inner.dim())
}

/// Entry `(i, j)`.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn linhyp_matrix_get(m: *const LinhypMatrix, i: usize, j: usize, out: *mut f64) -> LinhypStatus {
    guard(|| {
        let a = matrix_ref(m)?;
        if out.is_null() {
            return Err(LinhypStatus::NullPointer);
        }
        if i >= a.dim() || j >= a.dim() {
            return Err(LinhypStatus::InvalidArgument);
        }
        *out = a[(i, j)];
        Ok(())
    })
}

/// Eigenvalues, `ε`-band inertia and verdict.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn linhyp_classify(m: *const LinhypMatrix, tau: f64, out: *mut LinhypClassification) -> LinhypStatus {
    guard(|| {
        let a = matrix_ref(m)?;
        if out.is_null() {
            return Err(LinhypStatus::NullPointer);
        }
        let tau = resolve_tau(a, tau)?;
        let v = classify(a, tau).map_err(|e| status_of(&e))?;
        let verdict = match v {
            HyperbolicityVerdict::Hyperbolic { .. } => LinhypVerdict::Hyperbolic,
            HyperbolicityVerdict::NonHyperbolic { .. } => LinhypVerdict::NonHyperbolic,
            HyperbolicityVerdict::Indeterminate { .. } => LinhypVerdict::Indeterminate,
        };
        let i = v.inertia();
        *out = LinhypClassification { verdict, s: i.s, u: i.u, c: i.c, tau };
        Ok(())
    })
}

/// Writes the `d` eigenvalues, sorted by real then imaginary part, to `re`
/// and `im`, each of length at least `len`.
///
/// # Safety
/// `m` must be a live handle; `re` and `im` must each point to `len`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn linhyp_eigenvalues(m: *const LinhypMatrix, re: *mut f64, im: *mut f64, len: usize) -> LinhypStatus {
    guard(|| {
        let a = matrix_ref(m)?;
        if re.is_null() || im.is_null() {
            return Err(LinhypStatus::NullPointer);
        }
        if len < a.dim() {
            return Err(LinhypStatus::BufferTooSmall);
        }
        let values = eigenvalues(a).map_err(|e| status_of(&e))?.sorted();
        for (k, z) in values.iter().enumerate() {
            *re.add(k) = z.re;
            *im.add(k) = z.im;
        }
        Ok(())
    })
}

/// Distance to the nearest non-hyperbolic matrix. Non-hyperbolic input
/// succeeds with zero bounds and `hyperbolic = false`.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn linhyp_margin(m: *const LinhypMatrix, tau: f64, tol: f64, out: *mut LinhypMargin) -> LinhypStatus {
    guard(|| {
        let a = matrix_ref(m)?;
        if out.is_null() {
            return Err(LinhypStatus::NullPointer);
        }
        let r = margin(a, resolve_tau(a, tau)?, tol).map_err(|e| status_of(&e))?;
        *out = LinhypMargin {
            lower: r.lower,
            upper: r.upper,
            omega_star: r.omega_star,
            iterations: r.iterations,
            hyperbolic: r.hyperbolic,
        };
        Ok(())
    })
}

/// `A + εI` with `ε = min(eps_cap, δ/2)`; the new handle must be freed by the
/// caller.
///
/// # Safety
/// `m` must be a live handle; `epsilon` and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn linhyp_hyperbolize(
    m: *const LinhypMatrix,
    tau: f64,
    eps_cap: f64,
    epsilon: *mut f64,
    out: *mut *mut LinhypMatrix,
) -> LinhypStatus {
    guard(|| {
        let a = matrix_ref(m)?;
        if epsilon.is_null() || out.is_null() {
            return Err(LinhypStatus::NullPointer);
        }
        let r = hyperbolize(a, resolve_tau(a, tau)?, eps_cap).map_err(|e| status_of(&e))?;
        *epsilon = r.epsilon;
        *out = boxed(r.shifted);
        Ok(())
    })
}

/// `e^{tA}`; the new handle must be freed by the caller.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn linhyp_expm(m: *const LinhypMatrix, t: f64, out: *mut *mut LinhypMatrix) -> LinhypStatus {
    guard(|| {
        let a = matrix_ref(m)?;
        if out.is_null() {
            return Err(LinhypStatus::NullPointer);
        }
        if !t.is_finite() {
            return Err(LinhypStatus::InvalidArgument);
        }
        let e = expm(&a.scale(t));
        if e.as_slice().iter().any(|x| !x.is_finite()) {
            return Err(LinhypStatus::NonFinite);
        }
        *out = boxed(e);
        Ok(())
    })
}
