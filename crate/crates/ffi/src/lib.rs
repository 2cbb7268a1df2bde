//! C interface. Scenarios are opaque handles built from the same JSON the
//! command line reads. Every function returns an [`RpStatus`]; on failure
//! `rp_last_error` gives the message for the calling thread.
//!
//! Vectors are `double[3]`, tensors `double[9]` in row-major order.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use relpower::harness::{invariance_decomposition, BodyPart, PartEvaluation};
use relpower::scenario::{run_checks, ScenarioConfig};
use relpower::{Error, Scenario, Tensor33, Vector3, VirtualFieldPair};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RpStatus {
    Ok = 0,
    /// Null pointer or non-UTF-8 string.
    InvalidArgument = 1,
    ConfigInvalid = 2,
    NonPositiveJacobian = 3,
    EvaluationOutOfDomain = 4,
    NotAntisymmetric = 5,
    SingularTensor = 6,
    NonAffineDefect = 7,
    PreconditionViolated = 8,
    ToleranceFailure = 9,
    Io = 10,
    Panic = 11,
}

impl From<&Error> for RpStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::NonPositiveJacobian { .. } => RpStatus::NonPositiveJacobian,
            Error::EvaluationOutOfDomain { .. } => RpStatus::EvaluationOutOfDomain,
            Error::NotAntisymmetric { .. } => RpStatus::NotAntisymmetric,
            Error::SingularTensor { .. } => RpStatus::SingularTensor,
            Error::NonAffineDefect { .. } => RpStatus::NonAffineDefect,
            Error::PreconditionViolated(_) => RpStatus::PreconditionViolated,
            Error::ConfigInvalid(_) => RpStatus::ConfigInvalid,
            Error::ToleranceFailure { .. } => RpStatus::ToleranceFailure,
            Error::Io(_) => RpStatus::Io,
        }
    }
}

/// Integrated powers of the scenario's virtual fields over its part.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RpPower {
    pub relative_active: f64,
    pub disarrangement: f64,
    pub relative: f64,
    pub inner: f64,
    /// Sum of absolute values of the integrated terms.
    pub magnitude: f64,
}

/// Opaque scenario handle.
pub struct RpScenario {
    config: ScenarioConfig,
    scenario: Scenario,
    part: BodyPart,
    pair: VirtualFieldPair,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

enum Failure {
    Arg(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> RpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            RpStatus::Ok
        }
        Ok(Err(Failure::Arg(m))) => {
            set_error(m.into());
            RpStatus::InvalidArgument
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            RpStatus::from(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            RpStatus::Panic
        }
    }
}

unsafe fn handle<'a>(s: *const RpScenario) -> Result<&'a RpScenario, Failure> {
    s.as_ref().ok_or(Failure::Arg("null scenario handle"))
}

unsafe fn point(x: *const f64) -> Result<Vector3, Failure> {
    if x.is_null() {
        return Err(Failure::Arg("null point"));
    }
    Ok(Vector3(std::ptr::read(x as *const [f64; 3])))
}

unsafe fn write<const N: usize>(out: *mut f64, v: [f64; N]) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Arg("null output buffer"));
    }
    std::ptr::write(out as *mut [f64; N], v);
    Ok(())
}

fn flat(t: &Tensor33) -> [f64; 9] {
    let mut o = [0.0; 9];
    for i in 0..3 {
        for j in 0..3 {
            o[3 * i + j] = t[(i, j)];
        }
    }
    o
}

fn flat4(v: [Vector3; 4]) -> [f64; 12] {
    std::array::from_fn(|k| v[k / 3][k % 3])
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn rp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a scenario from a JSON scenario file's contents.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rp_scenario_from_json(json: *const c_char, out: *mut *mut RpScenario) -> RpStatus {
    guard(|| {
        if json.is_null() || out.is_null() {
            return Err(Failure::Arg("null argument"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|_| Failure::Arg("config is not UTF-8"))?;
        let config = ScenarioConfig::from_json(text)?;
        let scenario = config.scenario();
        let part = config.part()?;
        let pair = config.pair();
        *out = Box::into_raw(Box::new(RpScenario {
            config,
            scenario,
            part,
            pair,
        }));
        Ok(())
    })
}

/// # Safety
/// `s` must come from [`rp_scenario_from_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rp_scenario_free(s: *mut RpScenario) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Stored energy at reference point `x`.
///
/// # Safety
/// Pointers must be valid; `x` holds 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn rp_energy(s: *const RpScenario, x: *const f64, out: *mut f64) -> RpStatus {
    guard(|| {
        let st = handle(s)?.scenario.state(point(x)?)?;
        write::<1>(out, [st.energy])
    })
}

/// First Piola stress at `x`, 9 doubles.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rp_stress(s: *const RpScenario, x: *const f64, out: *mut f64) -> RpStatus {
    guard(|| {
        let st = handle(s)?.scenario.state(point(x)?)?;
        write(out, flat(&st.stress))
    })
}

/// Eshelby stress `e I − Fᵀ P` at `x`, 9 doubles.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rp_eshelby(s: *const RpScenario, x: *const f64, out: *mut f64) -> RpStatus {
    guard(|| {
        let p = handle(s)?.scenario.eshelby_stress(point(x)?)?;
        write(out, flat(&p))
    })
}

/// Force, torque, configurational force and configurational torque
/// residuals at `x`, 12 doubles.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rp_pointwise_residuals(s: *const RpScenario, x: *const f64, out: *mut f64) -> RpStatus {
    guard(|| {
        let r = handle(s)?.scenario.pointwise_residuals(point(x)?)?;
        write(
            out,
            flat4([r.force, r.torque, r.configurational_force, r.configurational_torque]),
        )
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rp_relative_power(s: *const RpScenario, out: *mut RpPower) -> RpStatus {
    guard(|| {
        let h = handle(s)?;
        if out.is_null() {
            return Err(Failure::Arg("null output"));
        }
        let eval = PartEvaluation::new(&h.scenario, &h.part)?;
        let rel = eval.relative_power(&h.pair)?;
        let inner = eval.inner_relative_power(&h.pair)?;
        *out = RpPower {
            relative_active: rel.relative_active,
            disarrangement: rel.disarrangement,
            relative: rel.relative,
            inner: inner.value,
            magnitude: rel.magnitude,
        };
        Ok(())
    })
}

/// The four integral balance residuals over the part, 12 doubles.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rp_integral_balances(s: *const RpScenario, out: *mut f64) -> RpStatus {
    guard(|| {
        let h = handle(s)?;
        let b = PartEvaluation::new(&h.scenario, &h.part)?.integral_balances()?;
        write(out, flat4(b.as_array()))
    })
}

/// Coefficients of the observer-change defect in the order ambient
/// translation, ambient rotation, material translation, material rotation
/// (12 doubles), and the power scale they should be compared against.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rp_invariance_coefficients(
    s: *const RpScenario,
    probes: usize,
    seed: u64,
    out: *mut f64,
    scale: *mut f64,
) -> RpStatus {
    guard(|| {
        let h = handle(s)?;
        if scale.is_null() {
            return Err(Failure::Arg("null scale"));
        }
        let eval = PartEvaluation::new(&h.scenario, &h.part)?;
        let d = invariance_decomposition(&eval, &h.pair, probes, seed)?;
        write(out, flat4(d.coefficients()))?;
        *scale = d.scale;
        Ok(())
    })
}

/// Runs the scenario's checks without writing files. `failed` receives the
/// number of checks outside tolerance.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rp_run_checks(s: *const RpScenario, failed: *mut usize) -> RpStatus {
    guard(|| {
        let h = handle(s)?;
        if failed.is_null() {
            return Err(Failure::Arg("null output"));
        }
        *failed = run_checks(&h.config)?.failed_checks();
        Ok(())
    })
}
