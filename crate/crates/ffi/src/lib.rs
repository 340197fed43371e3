//! C ABI over `polar3`.
//!
//! Matrices and generators are opaque heap handles released with their
//! `*_free` function. Every fallible call returns a [`P3Status`] and writes
//! results through out-pointers; a panic inside the library is caught and
//! reported as `P3_STATUS_PANIC`. Matrices cross the boundary as two
//! row-major arrays of nine doubles, one for the real parts and one for the
//! imaginary parts.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use polar3::characteristic::{characteristic_decomposition, regularity_report};
use polar3::interface::{generate_haar_unitary, SeededGenerator};
use polar3::linalg::Tolerances;
use polar3::parametrization::recover_params_with;
use polar3::{compose_unitary, ComplexMatrix3, Error, RotationAngles, UnitaryParams};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum P3Status {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotUnitary = 3,
    NotHermitian = 4,
    NotPositiveSemidefinite = 5,
    ZeroTrace = 6,
    NotUnit = 7,
    NotOrthogonal = 8,
    Inconsistent = 9,
    StructureViolation = 10,
    ToleranceExceeded = 11,
    NoConvergence = 12,
    Panic = 13,
}

impl From<&Error> for P3Status {
    fn from(e: &Error) -> Self {
        match e.root() {
            Error::NotHermitian { .. } => P3Status::NotHermitian,
            Error::NotPositiveSemidefinite { .. } => P3Status::NotPositiveSemidefinite,
            Error::NotUnitary { .. } => P3Status::NotUnitary,
            Error::NotOrthogonal { .. } => P3Status::NotOrthogonal,
            Error::NotUnit { .. } => P3Status::NotUnit,
            Error::ZeroTrace => P3Status::ZeroTrace,
            Error::NoConvergence { .. } => P3Status::NoConvergence,
            Error::Inconsistent(_) => P3Status::Inconsistent,
            Error::StructureViolation { .. } => P3Status::StructureViolation,
            Error::ToleranceExceeded { .. } => P3Status::ToleranceExceeded,
            Error::Recovery { .. } | Error::MalformedDocument(_) | Error::Io(_) => P3Status::InvalidArgument,
        }
    }
}

/// The nine parameters in radians.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct P3Params {
    pub phi: f64,
    pub theta: f64,
    pub varphi: f64,
    pub chi: f64,
    pub mu: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub beta2: f64,
}

impl From<P3Params> for UnitaryParams {
    fn from(p: P3Params) -> Self {
        UnitaryParams {
            rotation: RotationAngles::new(p.phi, p.theta, p.varphi),
            chi: p.chi,
            mu: p.mu,
            alpha1: p.alpha1,
            alpha2: p.alpha2,
            alpha3: p.alpha3,
            beta2: p.beta2,
        }
    }
}

impl From<UnitaryParams> for P3Params {
    fn from(p: UnitaryParams) -> Self {
        P3Params {
            phi: p.rotation.phi,
            theta: p.rotation.theta,
            varphi: p.rotation.varphi,
            chi: p.chi,
            mu: p.mu,
            alpha1: p.alpha1,
            alpha2: p.alpha2,
            alpha3: p.alpha3,
            beta2: p.beta2,
        }
    }
}

/// Characteristic decomposition and regularity of a coherency matrix.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct P3CharSummary {
    pub trace: f64,
    /// Nonincreasing.
    pub eigenvalues: [f64; 3],
    pub p1: f64,
    pub p2: f64,
    /// Spectrum of the real part of the middle component, nonincreasing.
    pub m_hat: [f64; 3],
    pub chi_m: f64,
    pub im_norm: f64,
    /// 1 when the middle component is regular, 0 otherwise.
    pub regular: u8,
}

/// Opaque 3x3 complex matrix.
pub struct P3Matrix(ComplexMatrix3);

/// Opaque seeded random generator.
pub struct P3Rng(SeededGenerator);

fn guard(f: impl FnOnce() -> P3Status) -> P3Status {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(P3Status::Panic)
}

fn boxed(m: ComplexMatrix3) -> *mut P3Matrix {
    Box::into_raw(Box::new(P3Matrix(m)))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn p3_status_message(status: P3Status) -> *const c_char {
    let s: &'static [u8] = match status {
        P3Status::Ok => b"ok\0",
        P3Status::NullPointer => b"null pointer argument\0",
        P3Status::InvalidArgument => b"invalid argument\0",
        P3Status::NotUnitary => b"matrix is not unitary\0",
        P3Status::NotHermitian => b"matrix is not Hermitian\0",
        P3Status::NotPositiveSemidefinite => b"matrix is not positive semidefinite\0",
        P3Status::ZeroTrace => b"matrix trace is zero\0",
        P3Status::NotUnit => b"vector is not unit\0",
        P3Status::NotOrthogonal => b"matrix is not proper orthogonal\0",
        P3Status::Inconsistent => b"inconsistent first column\0",
        P3Status::StructureViolation => b"core matrix structure violated\0",
        P3Status::ToleranceExceeded => b"recovery residual exceeds tolerance\0",
        P3Status::NoConvergence => b"eigensolver did not converge\0",
        P3Status::Panic => b"internal error\0",
    };
    s.as_ptr().cast()
}

/// New identity matrix. Release with `p3_matrix_free`.
#[no_mangle]
pub extern "C" fn p3_matrix_identity() -> *mut P3Matrix {
    boxed(ComplexMatrix3::identity())
}

/// Builds a matrix from row-major real and imaginary parts.
///
/// # Safety
/// `re` and `im` must each point to nine readable doubles and `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn p3_matrix_from_parts(re: *const f64, im: *const f64, out: *mut *mut P3Matrix) -> P3Status {
    if re.is_null() || im.is_null() || out.is_null() {
        return P3Status::NullPointer;
    }
    guard(|| {
        let re = std::slice::from_raw_parts(re, 9);
        let im = std::slice::from_raw_parts(im, 9);
        let mut r = [[0.0; 3]; 3];
        let mut i = [[0.0; 3]; 3];
        for k in 0..9 {
            r[k / 3][k % 3] = re[k];
            i[k / 3][k % 3] = im[k];
        }
        let m = ComplexMatrix3::from_parts(r, i);
        if !m.is_finite() {
            return P3Status::InvalidArgument;
        }
        *out = boxed(m);
        P3Status::Ok
    })
}

/// Copies the row-major real and imaginary parts out of a matrix.
///
/// # Safety
/// `m` must be a live handle; `re` and `im` must each point to nine
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn p3_matrix_parts(m: *const P3Matrix, re: *mut f64, im: *mut f64) -> P3Status {
    if m.is_null() || re.is_null() || im.is_null() {
        return P3Status::NullPointer;
    }
    let m = &(*m).0;
    for k in 0..9 {
        let z = m.0[k / 3][k % 3];
        *re.add(k) = z.re;
        *im.add(k) = z.im;
    }
    P3Status::Ok
}

/// Releases a matrix. Null is ignored.
///
/// # Safety
/// `m` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn p3_matrix_free(m: *mut P3Matrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Composes the unitary for `params`.
///
/// # Safety
/// `params` must be readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn p3_compose(params: *const P3Params, out: *mut *mut P3Matrix) -> P3Status {
    if params.is_null() || out.is_null() {
        return P3Status::NullPointer;
    }
    let p = UnitaryParams::from(*params);
    if !p.is_finite() {
        return P3Status::InvalidArgument;
    }
    guard(|| {
        *out = boxed(compose_unitary(&p));
        P3Status::Ok
    })
}

/// Recovers canonical parameters. `tolerance` caps the reconstruction
/// residual; pass a non-positive value for the default of 1e-10.
/// `residual` may be null.
///
/// # Safety
/// `m` must be a live handle, `params` writable, `residual` null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn p3_recover(
    m: *const P3Matrix,
    tolerance: f64,
    params: *mut P3Params,
    residual: *mut f64,
) -> P3Status {
    if m.is_null() || params.is_null() {
        return P3Status::NullPointer;
    }
    if tolerance.is_nan() {
        return P3Status::InvalidArgument;
    }
    let u = (*m).0;
    guard(|| {
        let mut tol = Tolerances::default();
        if tolerance > 0.0 {
            tol.recovery = tolerance;
        }
        match recover_params_with(&u, &tol) {
            Ok(r) => {
                *params = r.params.into();
                if !residual.is_null() {
                    *residual = r.residual;
                }
                P3Status::Ok
            }
            Err(e) => (&e).into(),
        }
    })
}

/// Characteristic decomposition of a Hermitian positive semidefinite matrix.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn p3_characteristic(m: *const P3Matrix, out: *mut P3CharSummary) -> P3Status {
    if m.is_null() || out.is_null() {
        return P3Status::NullPointer;
    }
    let r = (*m).0;
    guard(|| {
        let c = match characteristic_decomposition(&r) {
            Ok(c) => c,
            Err(e) => return (&e).into(),
        };
        let reg = match regularity_report(&r) {
            Ok(reg) => reg,
            Err(e) => return (&e).into(),
        };
        *out = P3CharSummary {
            trace: c.trace,
            eigenvalues: c.eigen.eigenvalues,
            p1: c.purity.p1,
            p2: c.purity.p2,
            m_hat: reg.m_hat,
            chi_m: reg.chi_m,
            im_norm: reg.im_norm,
            regular: reg.regular as u8,
        };
        P3Status::Ok
    })
}

/// New generator; the same seed gives the same stream on every platform.
#[no_mangle]
pub extern "C" fn p3_rng_new(seed: u64) -> *mut P3Rng {
    Box::into_raw(Box::new(P3Rng(SeededGenerator::new(seed))))
}

/// Releases a generator. Null is ignored.
///
/// # Safety
/// `rng` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn p3_rng_free(rng: *mut P3Rng) {
    if !rng.is_null() {
        drop(Box::from_raw(rng));
    }
}

/// Draws the next Haar-random unitary.
///
/// # Safety
/// `rng` must be a live handle not used concurrently, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn p3_haar(rng: *mut P3Rng, out: *mut *mut P3Matrix) -> P3Status {
    if rng.is_null() || out.is_null() {
        return P3Status::NullPointer;
    }
    let g = &mut (*rng).0;
    guard(|| {
        *out = boxed(generate_haar_unitary(g));
        P3Status::Ok
    })
}
