//! C ABI for the photon-added squeezed thermal state library.
//!
//! The surface follows the usual opaque-handle pattern: a caller builds a
//! [`PastsState`] (and, for decoherence work, a [`PastsEvolved`] evaluator)
//! through a constructor that returns a status code, reads values through
//! out-pointers, and frees the handle when done. All functions are
//! panic-free at the boundary: any internal panic is caught and surfaced
//! as `PASTS_STATUS_INTERNAL_ERROR` rather than unwinding into C.
//!
//! The generated header lives at `include/pasts.h` and is refreshed by the
//! build script on every compile of this crate.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use pasts_core::analytics::{self, PastsWigner, PhasePoint};
use pasts_core::decoherence::{self, EvolvedWigner};
use pasts_core::gaussianity;
use pasts_core::states::{ChannelSpec, StateSpec};
use pasts_core::Error;

/// Result of every fallible call in this ABI.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PastsStatus {
    /// The call succeeded and any out-parameter has been written.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A parameter is outside its mathematical domain.
    InvalidParameter = 2,
    /// The requested quantity is undefined at this point (e.g. Mandel Q
    /// of a state with zero mean photon number).
    Undefined = 3,
    /// A truncated Fock-space computation would not be trustworthy.
    Truncation = 4,
    /// A phase-space point lies outside the numerically trusted region.
    OutOfTrustedRange = 5,
    /// The requested threshold does not exist as a finite positive time.
    NoFiniteThreshold = 6,
    /// Numerical integration failed to hold its accuracy target.
    IntegrationFailure = 7,
    /// An internal cross-check failed or a panic was caught; the library
    /// refused to return a value it cannot stand behind.
    InternalError = 8,
}

impl From<&Error> for PastsStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidParameter { .. } => PastsStatus::InvalidParameter,
            Error::Undefined(_) => PastsStatus::Undefined,
            Error::Truncation { .. } => PastsStatus::Truncation,
            Error::OutOfTrustedRange { .. } => PastsStatus::OutOfTrustedRange,
            Error::NoFiniteThreshold(_) => PastsStatus::NoFiniteThreshold,
            Error::IntegrationFailure(_) => PastsStatus::IntegrationFailure,
            Error::InternalConsistency(_) | Error::Io(_) => PastsStatus::InternalError,
        }
    }
}

/// Opaque handle for a photon-added squeezed thermal state `(λ, n_c, m)`.
pub struct PastsState {
    spec: StateSpec,
    wigner: PastsWigner,
}

/// Opaque handle for the Wigner function of a state after a thermal
/// channel `(N, κt)`; precomputes the evolved coefficients once so grid
/// sweeps pay only the per-point cost.
pub struct PastsEvolved {
    evaluator: EvolvedWigner,
}

/// Runs `body` with panics converted to `InternalError`, writing the
/// computed value through `out` only on success.
fn write_result(
    out: *mut f64,
    body: impl FnOnce() -> Result<f64, PastsStatus>,
) -> PastsStatus {
    if out.is_null() {
        return PastsStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(value)) => {
            // SAFETY: `out` was checked non-null; the caller promises it
            // points at a writable f64.
            unsafe { *out = value };
            PastsStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => PastsStatus::InternalError,
    }
}

/// Creates a state handle for `m` photons added to a squeezed thermal
/// state with squeeze parameter `lambda` and thermal occupation `n_c`.
/// On success writes the new handle to `out`; free it with
/// `pasts_state_free`.
#[no_mangle]
pub extern "C" fn pasts_state_new(
    lambda: f64,
    n_c: f64,
    m: u32,
    out: *mut *mut PastsState,
) -> PastsStatus {
    if out.is_null() {
        return PastsStatus::NullPointer;
    }
    let built = catch_unwind(|| {
        StateSpec::new(lambda, n_c, m).map(|spec| {
            let wigner = PastsWigner::new(&spec);
            Box::new(PastsState { spec, wigner })
        })
    });
    match built {
        Ok(Ok(state)) => {
            // SAFETY: `out` was checked non-null.
            unsafe { *out = Box::into_raw(state) };
            PastsStatus::Ok
        }
        Ok(Err(e)) => PastsStatus::from(&e),
        Err(_) => PastsStatus::InternalError,
    }
}

/// Frees a state handle. A null pointer is accepted and ignored.
#[no_mangle]
pub extern "C" fn pasts_state_free(state: *mut PastsState) {
    if !state.is_null() {
        // SAFETY: the pointer came from `Box::into_raw` in
        // `pasts_state_new` and is freed exactly once by contract.
        drop(unsafe { Box::from_raw(state) });
    }
}

/// Normalization factor `C_{a,m}` of the state.
#[no_mangle]
pub extern "C" fn pasts_normalization(
    state: *const PastsState,
    out: *mut f64,
) -> PastsStatus {
    let Some(state) = (unsafe { state.as_ref() }) else {
        return PastsStatus::NullPointer;
    };
    write_result(out, || Ok(analytics::normalization(&state.spec)))
}

/// Mean photon number of the state.
#[no_mangle]
pub extern "C" fn pasts_mean_photon(
    state: *const PastsState,
    out: *mut f64,
) -> PastsStatus {
    let Some(state) = (unsafe { state.as_ref() }) else {
        return PastsStatus::NullPointer;
    };
    write_result(out, || Ok(analytics::mean_photon(&state.spec)))
}

/// Mandel Q parameter of the state.
#[no_mangle]
pub extern "C" fn pasts_mandel_q(state: *const PastsState, out: *mut f64) -> PastsStatus {
    let Some(state) = (unsafe { state.as_ref() }) else {
        return PastsStatus::NullPointer;
    };
    write_result(out, || {
        analytics::mandel_q(&state.spec).map_err(|e| PastsStatus::from(&e))
    })
}

/// Probability of finding `n` photons in the state.
#[no_mangle]
pub extern "C" fn pasts_pnd(
    state: *const PastsState,
    n: u32,
    out: *mut f64,
) -> PastsStatus {
    let Some(state) = (unsafe { state.as_ref() }) else {
        return PastsStatus::NullPointer;
    };
    write_result(out, || {
        analytics::pnd_pasts(n, &state.spec).map_err(|e| PastsStatus::from(&e))
    })
}

/// Wigner function of the state at the phase-space point `re + i·im`,
/// in the convention where the function integrates to 1/2.
#[no_mangle]
pub extern "C" fn pasts_wigner(
    state: *const PastsState,
    re: f64,
    im: f64,
    out: *mut f64,
) -> PastsStatus {
    let Some(state) = (unsafe { state.as_ref() }) else {
        return PastsStatus::NullPointer;
    };
    write_result(out, || Ok(state.wigner.eval(PhasePoint::new(re, im))))
}

/// Overlap fidelity between the state and its squeezed thermal reference.
#[no_mangle]
pub extern "C" fn pasts_fidelity(state: *const PastsState, out: *mut f64) -> PastsStatus {
    let Some(state) = (unsafe { state.as_ref() }) else {
        return PastsStatus::NullPointer;
    };
    write_result(out, || Ok(gaussianity::fidelity(&state.spec)))
}

/// Ratio of the photon-subtracted to photon-added normalization factors;
/// strictly below one for every `m ≥ 1`.
#[no_mangle]
pub extern "C" fn pasts_fidelity_ratio(
    state: *const PastsState,
    out: *mut f64,
) -> PastsStatus {
    let Some(state) = (unsafe { state.as_ref() }) else {
        return PastsStatus::NullPointer;
    };
    write_result(out, || Ok(gaussianity::fidelity_ratio(&state.spec)))
}

/// Creates an evaluator for the state's Wigner function after contact
/// with a thermal bath of mean occupation `bath_mean` for a dimensionless
/// time `kt`. Free it with `pasts_evolved_free`.
#[no_mangle]
pub extern "C" fn pasts_evolved_new(
    state: *const PastsState,
    bath_mean: f64,
    kt: f64,
    out: *mut *mut PastsEvolved,
) -> PastsStatus {
    let Some(state) = (unsafe { state.as_ref() }) else {
        return PastsStatus::NullPointer;
    };
    if out.is_null() {
        return PastsStatus::NullPointer;
    }
    let built = catch_unwind(AssertUnwindSafe(|| {
        ChannelSpec::new(bath_mean, kt).map(|channel| {
            Box::new(PastsEvolved {
                evaluator: EvolvedWigner::new(&state.spec, &channel),
            })
        })
    }));
    match built {
        Ok(Ok(evolved)) => {
            // SAFETY: `out` was checked non-null.
            unsafe { *out = Box::into_raw(evolved) };
            PastsStatus::Ok
        }
        Ok(Err(e)) => PastsStatus::from(&e),
        Err(_) => PastsStatus::InternalError,
    }
}

/// Evolved Wigner function at the phase-space point `re + i·im`.
#[no_mangle]
pub extern "C" fn pasts_evolved_eval(
    evolved: *const PastsEvolved,
    re: f64,
    im: f64,
    out: *mut f64,
) -> PastsStatus {
    let Some(evolved) = (unsafe { evolved.as_ref() }) else {
        return PastsStatus::NullPointer;
    };
    write_result(out, || Ok(evolved.evaluator.eval(PhasePoint::new(re, im))))
}

/// Frees an evolved-Wigner evaluator. A null pointer is accepted.
#[no_mangle]
pub extern "C" fn pasts_evolved_free(evolved: *mut PastsEvolved) {
    if !evolved.is_null() {
        // SAFETY: the pointer came from `Box::into_raw` in
        // `pasts_evolved_new` and is freed exactly once by contract.
        drop(unsafe { Box::from_raw(evolved) });
    }
}

/// Time `κt_c` at which the origin negativity of any single-photon-added
/// state vanishes in a bath of mean occupation `bath_mean`.
#[no_mangle]
pub extern "C" fn pasts_threshold_added(bath_mean: f64, out: *mut f64) -> PastsStatus {
    write_result(out, || {
        decoherence::threshold_added(bath_mean).map_err(|e| PastsStatus::from(&e))
    })
}

/// Corresponding threshold for the single-photon-subtracted comparison
/// state; returns `PASTS_STATUS_NO_FINITE_THRESHOLD` when no finite
/// positive time exists.
#[no_mangle]
pub extern "C" fn pasts_threshold_subtracted(
    bath_mean: f64,
    n_c: f64,
    lambda: f64,
    out: *mut f64,
) -> PastsStatus {
    write_result(out, || {
        decoherence::threshold_subtracted(bath_mean, n_c, lambda)
            .map_err(|e| PastsStatus::from(&e))
    })
}

/// Static, NUL-terminated name of a status code, for diagnostics.
#[no_mangle]
pub extern "C" fn pasts_status_name(status: PastsStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        PastsStatus::Ok => b"ok\0",
        PastsStatus::NullPointer => b"null pointer\0",
        PastsStatus::InvalidParameter => b"invalid parameter\0",
        PastsStatus::Undefined => b"undefined quantity\0",
        PastsStatus::Truncation => b"truncation too small\0",
        PastsStatus::OutOfTrustedRange => b"outside trusted range\0",
        PastsStatus::NoFiniteThreshold => b"no finite threshold\0",
        PastsStatus::IntegrationFailure => b"integration failure\0",
        PastsStatus::InternalError => b"internal error\0",
    };
    name.as_ptr() as *const c_char
}
