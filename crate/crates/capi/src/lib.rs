//! C ABI for the crystal-automata library.
//!
//! States are exposed as opaque handles, every fallible call returns a
//! status code, and the most recent error message is kept per thread and
//! retrievable with [`ca_last_error_message`].

use crystal_automata::crystal::CarrierSpec;
use crystal_automata::dynamics::{evolve_factorized, evolve_r, AutomatonState};
use crystal_automata::error::Error;
use crystal_automata::statefile::{parse_state, serialize_state};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaStatus {
    /// Success.
    CaOk = 0,
    /// A pointer argument was null.
    CaNullArgument = 1,
    /// Input text could not be parsed.
    CaParseError = 2,
    /// Invalid configuration or element data.
    CaInvalidInput = 3,
    /// The carrier was not large enough for a stable evolution.
    CaMarginTooSmall = 4,
    /// Any other error; see `ca_last_error_message`.
    CaInternalError = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(sanitized).unwrap());
}

fn status_for(e: &Error) -> CaStatus {
    match e {
        Error::ParseError { .. } => CaStatus::CaParseError,
        Error::MarginTooSmall | Error::NotStabilized => CaStatus::CaMarginTooSmall,
        Error::InternalInvariantViolation(_) => CaStatus::CaInternalError,
        _ => CaStatus::CaInvalidInput,
    }
}

fn fail(e: Error) -> CaStatus {
    let status = status_for(&e);
    set_error(&e.to_string());
    status
}

/// Opaque automaton state handle.
pub struct CaState {
    inner: AutomatonState,
}

/// Returns the error message of the most recent failure on this thread.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ca_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses the text state format into a new state handle.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ca_state_parse(text: *const c_char, out: *mut *mut CaState) -> CaStatus {
    if text.is_null() || out.is_null() {
        set_error("null argument");
        return CaStatus::CaNullArgument;
    }
    let text = match CStr::from_ptr(text).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("state text is not valid UTF-8");
            return CaStatus::CaParseError;
        }
    };
    match parse_state(text) {
        Ok(state) => {
            *out = Box::into_raw(Box::new(CaState { inner: state }));
            CaStatus::CaOk
        }
        Err(e) => fail(e),
    }
}

/// Serializes a state into newly allocated text; free it with
/// `ca_string_free`.
///
/// # Safety
/// `state` must come from this library and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ca_state_serialize(
    state: *const CaState,
    out: *mut *mut c_char,
) -> CaStatus {
    if state.is_null() || out.is_null() {
        set_error("null argument");
        return CaStatus::CaNullArgument;
    }
    let text = serialize_state(&(*state).inner);
    *out = CString::new(text).unwrap().into_raw();
    CaStatus::CaOk
}

/// Number of sites in the state.
///
/// # Safety
/// `state` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn ca_state_site_count(state: *const CaState) -> usize {
    if state.is_null() {
        return 0;
    }
    (*state).inner.len()
}

/// Evolves a state for `steps` time steps with the default saturated
/// vacuum carrier, writing a new handle to `out`.  `factorized` selects
/// the factorized operator string instead of the R threading.
///
/// # Safety
/// `state` must come from this library and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ca_state_evolve(
    state: *const CaState,
    steps: u32,
    factorized: bool,
    out: *mut *mut CaState,
) -> CaStatus {
    if state.is_null() || out.is_null() {
        set_error("null argument");
        return CaStatus::CaNullArgument;
    }
    let s = &(*state).inner;
    let spec = match CarrierSpec::vacuum(
        s.kind() == crystal_automata::basic_array::Kind::D,
        s.rank(),
        s.total_capacity(),
    ) {
        Ok(spec) => spec,
        Err(e) => return fail(e),
    };
    let mut current = s.clone();
    for _ in 0..steps {
        let next = if factorized {
            evolve_factorized(&current, &spec)
        } else {
            evolve_r(&current, &spec).map(|(s, _)| s)
        };
        match next {
            Ok(n) => current = n,
            Err(e) => return fail(e),
        }
    }
    *out = Box::into_raw(Box::new(CaState { inner: current }));
    CaStatus::CaOk
}

/// Frees a state handle.  Null is a no-op.
///
/// # Safety
/// `state` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ca_state_free(state: *mut CaState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Frees a string returned by this library.  Null is a no-op.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ca_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The five-integer gamma map; writes `F,G,H,I,J` into `out[0..5]`.
///
/// # Safety
/// `out` must point to at least five writable `int64_t` values.
#[no_mangle]
pub unsafe extern "C" fn ca_gamma(
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    e: i64,
    out: *mut i64,
) -> CaStatus {
    if out.is_null() {
        set_error("null argument");
        return CaStatus::CaNullArgument;
    }
    match crystal_automata::gamma::gamma(a, b, c, d, e) {
        Ok((f, g, h, i, j)) => {
            let out = std::slice::from_raw_parts_mut(out, 5);
            out.copy_from_slice(&[f, g, h, i, j]);
            CaStatus::CaOk
        }
        Err(e) => fail(e),
    }
}

/// Type-A combinatorial R on coordinate buffers of length `n`.
///
/// # Safety
/// All four pointers must reference `n` readable (`x`, `y`) or writable
/// (`x_out`, `y_out`) `int64_t` values.
#[no_mangle]
pub unsafe extern "C" fn ca_r_apply_a(
    x: *const i64,
    y: *const i64,
    n: usize,
    x_out: *mut i64,
    y_out: *mut i64,
) -> CaStatus {
    if x.is_null() || y.is_null() || x_out.is_null() || y_out.is_null() {
        set_error("null argument");
        return CaStatus::CaNullArgument;
    }
    let xs = std::slice::from_raw_parts(x, n).to_vec();
    let ys = std::slice::from_raw_parts(y, n).to_vec();
    let result = (|| {
        let x = crystal_automata::crystal::ElementA::new(xs)?;
        let y = crystal_automata::crystal::ElementA::new(ys)?;
        crystal_automata::rmap_a::apply_r_a(&x, &y)
    })();
    match result {
        Ok((xp, yp)) => {
            std::slice::from_raw_parts_mut(x_out, n).copy_from_slice(xp.coords());
            std::slice::from_raw_parts_mut(y_out, n).copy_from_slice(yp.coords());
            CaStatus::CaOk
        }
        Err(e) => fail(e),
    }
}

/// Type-D combinatorial R on coordinate buffers of length `n` per side.
///
/// # Safety
/// All eight pointers must reference `n` readable (inputs) or writable
/// (outputs) `int64_t` values.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn ca_r_apply_d(
    x_upper: *const i64,
    x_lower: *const i64,
    y_upper: *const i64,
    y_lower: *const i64,
    n: usize,
    x_out_upper: *mut i64,
    x_out_lower: *mut i64,
    y_out_upper: *mut i64,
    y_out_lower: *mut i64,
) -> CaStatus {
    let inputs = [x_upper, x_lower, y_upper, y_lower];
    let outputs = [x_out_upper, x_out_lower, y_out_upper, y_out_lower];
    if inputs.iter().any(|p| p.is_null()) || outputs.iter().any(|p| p.is_null()) {
        set_error("null argument");
        return CaStatus::CaNullArgument;
    }
    let read = |p: *const i64| std::slice::from_raw_parts(p, n).to_vec();
    let result = (|| {
        let x = crystal_automata::crystal::ElementD::new(read(x_upper), read(x_lower))?;
        let y = crystal_automata::crystal::ElementD::new(read(y_upper), read(y_lower))?;
        crystal_automata::rmap_d::apply_r_d(&x, &y)
    })();
    match result {
        Ok((xp, yp)) => {
            std::slice::from_raw_parts_mut(x_out_upper, n).copy_from_slice(xp.upper());
            std::slice::from_raw_parts_mut(x_out_lower, n).copy_from_slice(xp.lower());
            std::slice::from_raw_parts_mut(y_out_upper, n).copy_from_slice(yp.upper());
            std::slice::from_raw_parts_mut(y_out_lower, n).copy_from_slice(yp.lower());
            CaStatus::CaOk
        }
        Err(e) => fail(e),
    }
}

/// Runs a verification suite.  `bounds` uses the `key=value,key=value`
/// grammar; pass an empty string for the defaults.  On success the case
/// and failure counts are written out; a nonzero failure count still
/// returns `CaOk`.
///
/// # Safety
/// `name` and `bounds` must be valid NUL-terminated strings; the count
/// pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn ca_verify_suite(
    name: *const c_char,
    bounds: *const c_char,
    seed: u64,
    cases_out: *mut u64,
    failures_out: *mut u64,
) -> CaStatus {
    if name.is_null() || bounds.is_null() || cases_out.is_null() || failures_out.is_null() {
        set_error("null argument");
        return CaStatus::CaNullArgument;
    }
    let result = (|| {
        let name = CStr::from_ptr(name)
            .to_str()
            .map_err(|_| Error::ConfigError("suite name is not valid UTF-8".into()))?;
        let bounds = CStr::from_ptr(bounds)
            .to_str()
            .map_err(|_| Error::ConfigError("bounds are not valid UTF-8".into()))?;
        let bounds = crystal_automata::verify::Bounds::parse(bounds)?;
        crystal_automata::verify::run_suite(name, &bounds, seed)
    })();
    match result {
        Ok(report) => {
            *cases_out = report.cases;
            *failures_out = report.failures.len() as u64;
            CaStatus::CaOk
        }
        Err(e) => fail(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;
    use std::ptr;

    #[test]
    fn parse_serialize_round_trip() {
        let text = CString::new("A 2 2\n1 : 1 0\n1 : 0 1\n").unwrap();
        let mut handle: *mut CaState = ptr::null_mut();
        unsafe {
            assert_eq!(ca_state_parse(text.as_ptr(), &mut handle), CaStatus::CaOk);
            assert_eq!(ca_state_site_count(handle), 2);
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(ca_state_serialize(handle, &mut out), CaStatus::CaOk);
            assert_eq!(CStr::from_ptr(out).to_str().unwrap(), "A 2 2\n1 : 1 0\n1 : 0 1\n");
            ca_string_free(out);
            ca_state_free(handle);
        }
    }

    #[test]
    fn evolve_matches_box_ball() {
        let text = CString::new("A 2 4\n1 : 1 0\n1 : 0 1\n1 : 1 0\n1 : 0 1\n").unwrap();
        let mut handle: *mut CaState = ptr::null_mut();
        unsafe {
            assert_eq!(ca_state_parse(text.as_ptr(), &mut handle), CaStatus::CaOk);
            for factorized in [false, true] {
                let mut next: *mut CaState = ptr::null_mut();
                assert_eq!(ca_state_evolve(handle, 1, factorized, &mut next), CaStatus::CaOk);
                let mut out: *mut c_char = ptr::null_mut();
                assert_eq!(ca_state_serialize(next, &mut out), CaStatus::CaOk);
                assert_eq!(
                    CStr::from_ptr(out).to_str().unwrap(),
                    "A 2 4\n1 : 0 1\n1 : 1 0\n1 : 0 1\n1 : 1 0\n"
                );
                ca_string_free(out);
                ca_state_free(next);
            }
            ca_state_free(handle);
        }
    }

    #[test]
    fn errors_set_message_and_status() {
        let text = CString::new("A 2 1\n1 : x 0\n").unwrap();
        let mut handle: *mut CaState = ptr::null_mut();
        unsafe {
            assert_eq!(ca_state_parse(text.as_ptr(), &mut handle), CaStatus::CaParseError);
            let msg = CStr::from_ptr(ca_last_error_message()).to_str().unwrap();
            assert!(msg.contains("line 2"), "{msg}");
            assert_eq!(
                ca_state_parse(ptr::null(), &mut handle),
                CaStatus::CaNullArgument
            );
        }
    }

    #[test]
    fn gamma_and_r_buffers() {
        let mut out = [0i64; 5];
        unsafe {
            assert_eq!(ca_gamma(1, 0, 2, 0, 3, out.as_mut_ptr()), CaStatus::CaOk);
            assert_eq!(out, [1, 0, 2, 0, 0]);

            let x = [2i64, 0];
            let y = [0i64, 1];
            let mut xp = [0i64; 2];
            let mut yp = [0i64; 2];
            assert_eq!(
                ca_r_apply_a(x.as_ptr(), y.as_ptr(), 2, xp.as_mut_ptr(), yp.as_mut_ptr()),
                CaStatus::CaOk
            );
            assert_eq!(xp, [1, 0]);
            assert_eq!(yp, [1, 1]);

            let xu = [1i64, 0, 5];
            let z = [0i64, 0, 0];
            let yu = [0i64, 1, 0];
            let mut xou = [0i64; 3];
            let mut xol = [0i64; 3];
            let mut you = [0i64; 3];
            let mut yol = [0i64; 3];
            assert_eq!(
                ca_r_apply_d(
                    xu.as_ptr(),
                    z.as_ptr(),
                    yu.as_ptr(),
                    z.as_ptr(),
                    3,
                    xou.as_mut_ptr(),
                    xol.as_mut_ptr(),
                    you.as_mut_ptr(),
                    yol.as_mut_ptr()
                ),
                CaStatus::CaOk
            );
            assert_eq!(xol, [0, 0, 0]);
            assert_eq!(yol, [0, 0, 0]);
            assert_eq!(xou.iter().sum::<i64>(), 1);
            assert_eq!(you.iter().sum::<i64>(), 6);
        }
    }

    #[test]
    fn verify_suite_through_ffi() {
        let name = CString::new("gamma-identities").unwrap();
        let bounds = CString::new("max=2").unwrap();
        let mut cases = 0u64;
        let mut failures = 0u64;
        unsafe {
            assert_eq!(
                ca_verify_suite(name.as_ptr(), bounds.as_ptr(), 0, &mut cases, &mut failures),
                CaStatus::CaOk
            );
        }
        assert_eq!(cases, 243);
        assert_eq!(failures, 0);

        let bad = CString::new("no-such-suite").unwrap();
        let empty = CString::new("").unwrap();
        unsafe {
            assert_eq!(
                ca_verify_suite(bad.as_ptr(), empty.as_ptr(), 0, &mut cases, &mut failures),
                CaStatus::CaInvalidInput
            );
        }
    }

    #[test]
    fn header_is_generated() {
        let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("include/crystal_automata.h");
        let text = std::fs::read_to_string(header).unwrap();
        assert!(text.contains("ca_state_parse"));
        assert!(text.contains("CRYSTAL_AUTOMATA_H"));
    }
}
