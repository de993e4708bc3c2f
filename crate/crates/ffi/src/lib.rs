//! C ABI over `phondeq`.
//!
//! Every fallible call returns a [`PhondeqStatus`] and writes its result
//! through an out-pointer. On failure the message is kept per thread and
//! can be read with [`phondeq_last_error_message`]. Register states are
//! passed as basis indices `0..4` in the order `|++>, |+->, |-+>, |-->`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nalgebra::Matrix4;
use num_complex::Complex64;
use phondeq::oracle::{KQuadratureSpec, ModeSumOracle, ThermalWeight};
use phondeq::{Error, Preset, QubitSpec, RegisterState, SystemGeometry, TwoQubitSystem, Vec3};

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhondeqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidGeometry = 3,
    UnknownPreset = 4,
    NonPhysical = 5,
    NotConverged = 6,
    Panic = 7,
}

/// Thermal weight selector for [`phondeq_oracle_new`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhondeqThermalWeight {
    Classical = 0,
    FullCoth = 1,
}

/// One qubit: donor pair at `center ± axis/2` with per-site Bohr radii.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PhondeqQubit {
    pub center: [f64; 3],
    pub axis: [f64; 3],
    pub radius_minus: f64,
    pub radius_plus: f64,
}

/// Opaque two-qubit system.
pub struct PhondeqSystem {
    inner: TwoQubitSystem,
}

/// Opaque mode-sum oracle.
pub struct PhondeqOracle {
    inner: ModeSumOracle,
}

struct Failure {
    status: PhondeqStatus,
    message: String,
}

impl Failure {
    fn new(status: PhondeqStatus, message: impl Into<String>) -> Self {
        Self { status, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Domain(_) => PhondeqStatus::InvalidArgument,
            Error::Geometry(_) => PhondeqStatus::InvalidGeometry,
            Error::UnknownPreset(_) => PhondeqStatus::UnknownPreset,
            Error::NonPhysical(_) => PhondeqStatus::NonPhysical,
            Error::NotConverged(_) => PhondeqStatus::NotConverged,
        };
        Failure::new(status, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard<T>(out: *mut T, f: impl FnOnce() -> Result<T, Failure>) -> PhondeqStatus {
    if out.is_null() {
        set_last_error("output pointer is null".into());
        return PhondeqStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(value)) => {
            unsafe { out.write(value) };
            PhondeqStatus::Ok
        }
        Ok(Err(failure)) => {
            set_last_error(failure.message);
            failure.status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            PhondeqStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::new(PhondeqStatus::NullPointer, format!("{what} is null")))
}

fn register_state(index: u32) -> Result<RegisterState, Failure> {
    RegisterState::BASIS
        .get(index as usize)
        .copied()
        .ok_or_else(|| Failure::new(PhondeqStatus::InvalidArgument, format!("register state index {index} is not in 0..4")))
}

fn vec3(v: [f64; 3]) -> Vec3 {
    Vec3::new(v[0], v[1], v[2])
}

/// Message of the last failed call on this thread, or null if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn phondeq_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn phondeq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a system from a named preset (`paper45`, `collinear`, `perpendicular`).
///
/// # Safety
/// `name` must be a valid NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn phondeq_system_from_preset(name: *const c_char, out: *mut *mut PhondeqSystem) -> PhondeqStatus {
    guard(out, || {
        let name = unsafe { borrow(name, "preset name")? };
        let name = unsafe { CStr::from_ptr(name) }
            .to_str()
            .map_err(|_| Failure::new(PhondeqStatus::InvalidArgument, "preset name is not UTF-8"))?;
        let preset: Preset = name.parse()?;
        let inner = TwoQubitSystem::new(preset.geometry())?;
        Ok(Box::into_raw(Box::new(PhondeqSystem { inner })))
    })
}

/// Builds a system from `count` qubit descriptions (currently exactly two).
///
/// # Safety
/// `qubits` must point to `count` readable elements and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn phondeq_system_new(
    qubits: *const PhondeqQubit,
    count: usize,
    out: *mut *mut PhondeqSystem,
) -> PhondeqStatus {
    guard(out, || {
        unsafe { borrow(qubits, "qubit array")? };
        let specs = unsafe { std::slice::from_raw_parts(qubits, count) }
            .iter()
            .map(|q| QubitSpec::with_radii(vec3(q.center), vec3(q.axis), q.radius_minus, q.radius_plus))
            .collect::<Result<Vec<_>, _>>()?;
        let inner = TwoQubitSystem::new(SystemGeometry::new(specs)?)?;
        Ok(Box::into_raw(Box::new(PhondeqSystem { inner })))
    })
}

/// Releases a system. Null is ignored.
///
/// # Safety
/// `system` must come from a `phondeq_system_*` constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn phondeq_system_free(system: *mut PhondeqSystem) {
    if !system.is_null() {
        drop(unsafe { Box::from_raw(system) });
    }
}

/// Closed-form kernel for arbitrary radii.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn phondeq_gamma_general(t: f64, a: f64, a2: f64, l: f64, out: *mut f64) -> PhondeqStatus {
    guard(out, || Ok(phondeq::gamma_general(t, a, a2, l)?))
}

/// Closed-form kernel for identical unit radii at separation `l`.
#[no_mangle]
pub extern "C" fn phondeq_gamma_identical(t: f64, l: f64) -> f64 {
    phondeq::gamma_identical(t, l)
}

/// Same-site kernel for unit radius.
#[no_mangle]
pub extern "C" fn phondeq_gamma_zero(t: f64) -> f64 {
    phondeq::gamma_zero(t)
}

/// Dephasing rate of the coherence between register states `m` and `s`.
///
/// # Safety
/// `system` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn phondeq_decoherence_rate(
    system: *const PhondeqSystem,
    t: f64,
    m: u32,
    s: u32,
    out: *mut f64,
) -> PhondeqStatus {
    guard(out, || {
        let sys = unsafe { borrow(system, "system")? };
        Ok(sys.inner.rates().decoherence_rate(t, register_state(m)?, register_state(s)?)?)
    })
}

/// Time integral of the dephasing rate from 0 to `t`.
///
/// # Safety
/// `system` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn phondeq_integrated_exponent(
    system: *const PhondeqSystem,
    t: f64,
    m: u32,
    s: u32,
    out: *mut f64,
) -> PhondeqStatus {
    guard(out, || {
        let sys = unsafe { borrow(system, "system")? };
        Ok(sys.inner.rates().integrated_exponent(t, register_state(m)?, register_state(s)?)?)
    })
}

/// Concurrence of `sqrt(p)|a> + sqrt(1-p)|b>` in the one-excitation
/// (`two_excitation == 0`) or two-excitation sector.
///
/// # Safety
/// `system` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn phondeq_concurrence(
    system: *const PhondeqSystem,
    t: f64,
    p: f64,
    temperature_ratio: f64,
    two_excitation: bool,
    out: *mut f64,
) -> PhondeqStatus {
    guard(out, || {
        let sys = unsafe { borrow(system, "system")? };
        let c = if two_excitation {
            sys.inner.concurrence_two_excitation(t, p, temperature_ratio)?
        } else {
            sys.inner.concurrence_one_excitation(t, p, temperature_ratio)?
        };
        Ok(c)
    })
}

/// Wootters concurrence of a 4x4 density matrix given as row-major real
/// and imaginary parts.
///
/// # Safety
/// `re` and `im` must each point to 16 readable doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn phondeq_wootters_concurrence(re: *const f64, im: *const f64, out: *mut f64) -> PhondeqStatus {
    guard(out, || {
        unsafe { borrow(re, "real part")? };
        unsafe { borrow(im, "imaginary part")? };
        let (re, im) = unsafe { (std::slice::from_raw_parts(re, 16), std::slice::from_raw_parts(im, 16)) };
        let m = Matrix4::from_fn(|i, j| Complex64::new(re[4 * i + j], im[4 * i + j]));
        Ok(phondeq::dynamics::wootters_concurrence_of(m)?)
    })
}

/// Creates a mode-sum oracle. `inverse_temperature` is read only for
/// [`PhondeqThermalWeight::FullCoth`].
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn phondeq_oracle_new(
    k_max: f64,
    panels: usize,
    nodes_per_panel: usize,
    weight: PhondeqThermalWeight,
    inverse_temperature: f64,
    out: *mut *mut PhondeqOracle,
) -> PhondeqStatus {
    guard(out, || {
        let thermal_weight = match weight {
            PhondeqThermalWeight::Classical => ThermalWeight::Classical,
            PhondeqThermalWeight::FullCoth => ThermalWeight::FullCoth { inverse_temperature },
        };
        let inner = ModeSumOracle::new(KQuadratureSpec { k_max, panels, nodes_per_panel, thermal_weight })?;
        Ok(Box::into_raw(Box::new(PhondeqOracle { inner })))
    })
}

/// Releases an oracle. Null is ignored.
///
/// # Safety
/// `oracle` must come from [`phondeq_oracle_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn phondeq_oracle_free(oracle: *mut PhondeqOracle) {
    if !oracle.is_null() {
        drop(unsafe { Box::from_raw(oracle) });
    }
}

/// Calibrated normalization constant of the oracle.
///
/// # Safety
/// `oracle` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn phondeq_oracle_normalization(oracle: *const PhondeqOracle, out: *mut f64) -> PhondeqStatus {
    guard(out, || Ok(unsafe { borrow(oracle, "oracle")? }.inner.normalization()))
}

/// Mode-sum dephasing rate for the same arguments as [`phondeq_decoherence_rate`].
///
/// # Safety
/// Both handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn phondeq_oracle_rate(
    oracle: *const PhondeqOracle,
    system: *const PhondeqSystem,
    t: f64,
    m: u32,
    s: u32,
    out: *mut f64,
) -> PhondeqStatus {
    guard(out, || {
        let oracle = unsafe { borrow(oracle, "oracle")? };
        let sys = unsafe { borrow(system, "system")? };
        Ok(oracle.inner.rate_modesum(t, sys.inner.geometry(), register_state(m)?, register_state(s)?)?)
    })
}
