//! C interface to the qfisher simulation library.
//!
//! Every fallible function returns a [`QfStatus`]; on failure a message is
//! kept per thread and read with [`qf_last_error_message`]. Objects are
//! opaque handles released with their `_free` function. Strings returned
//! by the library are released with [`qf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qfisher::experiments::grover_trace;
use qfisher::number::{modpow, order_bruteforce};
use qfisher::output::{to_json, trace_csv};
use qfisher::period::{compare_methods, factor, FactorBudget, PeriodSettings, DEFAULT_MEMORY_CAP};
use qfisher::{run_grover, Error, GroverInstance, Method, PeriodInstance, Register, StateVector};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Resource = 4,
    BudgetExhausted = 5,
    DegenerateFisher = 6,
    Internal = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QfMethod {
    Shor = 0,
    GroverAdiabatic = 1,
}

impl From<QfMethod> for Method {
    fn from(m: QfMethod) -> Self {
        match m {
            QfMethod::Shor => Method::Shor,
            QfMethod::GroverAdiabatic => Method::GroverAdiabatic,
        }
    }
}

/// A statevector.
pub struct QfState(StateVector);

/// A seeded random stream for measurements.
pub struct QfRng(ChaCha8Rng);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let text = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn status_of(e: &Error) -> QfStatus {
    match e {
        Error::InvalidDimension(_) | Error::Input(_) => QfStatus::InvalidArgument,
        Error::Domain(_) => QfStatus::Domain,
        Error::Resource { .. } => QfStatus::Resource,
        Error::BudgetExhausted { .. } => QfStatus::BudgetExhausted,
        Error::DegenerateFisher { .. } => QfStatus::DegenerateFisher,
        Error::Internal(_) => QfStatus::Internal,
    }
}

/// Runs `body`, recording the message of any error or panic.
fn guard<F>(body: F) -> QfStatus
where
    F: FnOnce() -> Result<(), (QfStatus, String)>,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => QfStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("panic: {message}"));
            QfStatus::Panic
        }
    }
}

trait IntoFfi<T> {
    fn ffi(self) -> Result<T, (QfStatus, String)>;
}

impl<T> IntoFfi<T> for qfisher::Result<T> {
    fn ffi(self) -> Result<T, (QfStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

fn null(name: &str) -> (QfStatus, String) {
    (QfStatus::NullPointer, format!("{name} is null"))
}

fn invalid(message: String) -> (QfStatus, String) {
    (QfStatus::InvalidArgument, message)
}

unsafe fn write_out<T>(out: *mut T, value: T, name: &str) -> Result<(), (QfStatus, String)> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

unsafe fn index_slice<'a>(
    ptr: *const usize,
    len: usize,
    name: &str,
) -> Result<&'a [usize], (QfStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null(name));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn state_mut<'a>(state: *mut QfState) -> Result<&'a mut StateVector, (QfStatus, String)> {
    state
        .as_mut()
        .map(|s| &mut s.0)
        .ok_or_else(|| null("state"))
}

unsafe fn state_ref<'a>(state: *const QfState) -> Result<&'a StateVector, (QfStatus, String)> {
    state.as_ref().map(|s| &s.0).ok_or_else(|| null("state"))
}

fn into_c_string(text: String) -> Result<*mut c_char, (QfStatus, String)> {
    CString::new(text)
        .map(CString::into_raw)
        .map_err(|_| (QfStatus::Internal, "output contains a nul byte".to_string()))
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `text` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qf_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Uniform superposition over `dim` basis states.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qf_state_new_uniform(dim: usize, out: *mut *mut QfState) -> QfStatus {
    guard(|| {
        let state = StateVector::new_uniform(dim).ffi()?;
        write_out(out, Box::into_raw(Box::new(QfState(state))), "out")
    })
}

/// # Safety
/// `state` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qf_state_free(state: *mut QfState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// `state` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qf_state_dim(state: *const QfState, out: *mut usize) -> QfStatus {
    guard(|| write_out(out, state_ref(state)?.dim(), "out"))
}

/// Flips the sign of the amplitudes at the `len` indices in `marked`.
///
/// # Safety
/// `state` must be a live handle; `marked` must point to `len` readable values.
#[no_mangle]
pub unsafe extern "C" fn qf_state_phase_flip(
    state: *mut QfState,
    marked: *const usize,
    len: usize,
) -> QfStatus {
    guard(|| {
        let s = state_mut(state)?;
        let indices = index_slice(marked, len, "marked")?;
        let dim = s.dim();
        let mut mask = vec![false; dim];
        for &i in indices {
            *mask
                .get_mut(i)
                .ok_or_else(|| invalid(format!("index {i} outside dimension {dim}")))? = true;
        }
        s.phase_flip(|i| mask[i]);
        Ok(())
    })
}

/// # Safety
/// `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qf_state_invert_about_average(state: *mut QfState) -> QfStatus {
    guard(|| {
        state_mut(state)?.invert_about_average();
        Ok(())
    })
}

/// Fourier transform with `+2πi` phases and `1/√d` scaling.
///
/// # Safety
/// `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qf_state_qft(state: *mut QfState) -> QfStatus {
    guard(|| state_mut(state)?.qft(Register::First).ffi())
}

/// # Safety
/// `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qf_state_inverse_qft(state: *mut QfState) -> QfStatus {
    guard(|| state_mut(state)?.inverse_qft(Register::First).ffi())
}

/// Copies the `dim` probabilities into `out`, which holds `len` values.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable for `len` values.
#[no_mangle]
pub unsafe extern "C" fn qf_state_probabilities(
    state: *const QfState,
    out: *mut f64,
    len: usize,
) -> QfStatus {
    guard(|| {
        let s = state_ref(state)?;
        if out.is_null() {
            return Err(null("out"));
        }
        if len < s.dim() {
            return Err(invalid(format!(
                "buffer of {len} is shorter than dimension {}",
                s.dim()
            )));
        }
        let probs = s.probabilities();
        std::slice::from_raw_parts_mut(out, s.dim()).copy_from_slice(probs.as_slice());
        Ok(())
    })
}

/// Copies the amplitudes into `out` as interleaved `(re, im)` pairs;
/// `len` counts doubles and must be at least `2 * dim`.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable for `len` values.
#[no_mangle]
pub unsafe extern "C" fn qf_state_amplitudes(
    state: *const QfState,
    out: *mut f64,
    len: usize,
) -> QfStatus {
    guard(|| {
        let s = state_ref(state)?;
        if out.is_null() {
            return Err(null("out"));
        }
        if len < 2 * s.dim() {
            return Err(invalid(format!(
                "buffer of {len} is shorter than {}",
                2 * s.dim()
            )));
        }
        let buf = std::slice::from_raw_parts_mut(out, 2 * s.dim());
        for (pair, c) in buf.chunks_exact_mut(2).zip(s.amplitudes()) {
            pair[0] = c.re;
            pair[1] = c.im;
        }
        Ok(())
    })
}

/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qf_rng_new(seed: u64, out: *mut *mut QfRng) -> QfStatus {
    guard(|| {
        write_out(
            out,
            Box::into_raw(Box::new(QfRng(ChaCha8Rng::seed_from_u64(seed)))),
            "out",
        )
    })
}

/// # Safety
/// `rng` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qf_rng_free(rng: *mut QfRng) {
    if !rng.is_null() {
        drop(Box::from_raw(rng));
    }
}

/// Projective measurement in the computational basis; the state collapses.
///
/// # Safety
/// `state` and `rng` must be live handles; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qf_state_measure(
    state: *mut QfState,
    rng: *mut QfRng,
    out: *mut usize,
) -> QfStatus {
    guard(|| {
        let s = state_mut(state)?;
        let r = rng.as_mut().ok_or_else(|| null("rng"))?;
        let outcome = s.measure(Register::First, &mut r.0).ffi()?;
        write_out(out, outcome, "out")
    })
}

/// `base^exp mod modulus`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qf_modpow(base: u64, exp: u64, modulus: u64, out: *mut u64) -> QfStatus {
    guard(|| {
        if modulus == 0 {
            return Err(invalid("modulus must be positive".to_string()));
        }
        write_out(out, modpow(base, exp, modulus), "out")
    })
}

/// Multiplicative order of `base` modulo `modulus`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qf_order(base: u64, modulus: u64, out: *mut u64) -> QfStatus {
    guard(|| write_out(out, order_bruteforce(base, modulus).ffi()?, "out"))
}

/// Marked-item probability after `steps` simulated Grover iterations.
///
/// # Safety
/// `marked` must point to `len` readable values; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qf_grover_marked_mass(
    n_items: usize,
    marked: *const usize,
    len: usize,
    steps: usize,
    out: *mut f64,
) -> QfStatus {
    guard(|| {
        let inst =
            GroverInstance::new(n_items, index_slice(marked, len, "marked")?.iter().copied())
                .ffi()?;
        let traj = run_grover(&inst, steps, false).ffi()?;
        write_out(out, traj.marked_mass(&inst, steps), "out")
    })
}

/// Factors `n` with random bases drawn from `seed`. On success `out`
/// receives the two factors in ascending order.
///
/// # Safety
/// `out` must be writable for two values.
#[no_mangle]
pub unsafe extern "C" fn qf_factor(n: u64, method: QfMethod, seed: u64, out: *mut u64) -> QfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = factor(n, method.into(), &mut rng, &FactorBudget::default()).ffi()?;
        std::slice::from_raw_parts_mut(out, 2).copy_from_slice(&f.factors);
        Ok(())
    })
}

/// Per-step Grover trace as CSV, the same text the command line writes.
///
/// # Safety
/// `marked` must point to `len` readable values; `out` valid for a write.
/// The string must be released with [`qf_string_free`].
#[no_mangle]
pub unsafe extern "C" fn qf_grover_trace_csv(
    n_items: usize,
    marked: *const usize,
    len: usize,
    steps: usize,
    dphi: f64,
    out: *mut *mut c_char,
) -> QfStatus {
    guard(|| {
        let inst =
            GroverInstance::new(n_items, index_slice(marked, len, "marked")?.iter().copied())
                .ffi()?;
        let trace = grover_trace(&inst, steps, dphi, DEFAULT_MEMORY_CAP).ffi()?;
        write_out(out, into_c_string(trace_csv(&trace))?, "out")
    })
}

/// Comparison report for `(n, y)` as JSON.
///
/// # Safety
/// `out` must be valid for a write. The string must be released with
/// [`qf_string_free`].
#[no_mangle]
pub unsafe extern "C" fn qf_compare_json(
    n: u64,
    y: u64,
    seed: u64,
    dphi: f64,
    out: *mut *mut c_char,
) -> QfStatus {
    guard(|| {
        let inst = PeriodInstance::new(n, y).ffi()?;
        let report = compare_methods(&inst, seed, &PeriodSettings::default(), dphi).ffi()?;
        write_out(out, into_c_string(to_json(&report))?, "out")
    })
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn qf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
