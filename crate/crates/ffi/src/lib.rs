//! C ABI for the monotri classifier.
//!
//! Integers that can exceed 64 bits cross the boundary as NUL-terminated
//! decimal strings. Strings returned by this library are owned by the caller
//! and must be released with `monotri_string_free`. Every fallible call
//! returns a `MonotriStatus`; on failure `monotri_last_error_message` gives a
//! description that stays valid until the next failing call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use monotri::classify::{classify, Classification, GaloisKind, TrinomialFamily};
use monotri::indexcheck::{trinomial_is_monogenic, GeneralTrinomial};
use monotri::report::{render, ClassificationRecord, Format};
use monotri::{Config, Error};
use num_bigint::BigInt;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonotriStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument could not be parsed or violates a precondition.
    InvalidArgument = 2,
    /// The polynomial is reducible over Q.
    Reducible = 3,
    /// A factoring or search budget ran out before a verdict was reached.
    Unknown = 4,
    /// Independent checks disagreed.
    Inconsistent = 5,
    /// The library panicked. This is a bug.
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonotriGalois {
    /// No Galois class (the family is reducible).
    None = 0,
    /// C_p ⋊ C_(p-1).
    Frobenius = 1,
    /// (C_p ⋊ C_((p-1)/2)) × C_2.
    HalfTimesC2 = 2,
    /// (C_p ⋊ C_(p-1)) × C_2.
    FullTimesC2 = 3,
}

/// Tri-state answer for yes/no accessors.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonotriTruth {
    False = 0,
    True = 1,
    /// Not decided, or the handle was null.
    Undetermined = -1,
}

/// Opaque result of `monotri_classify`.
pub struct MonotriClassification {
    inner: Classification,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: MonotriStatus, msg: &str) -> MonotriStatus {
    set_last_error(msg);
    status
}

fn status_of(e: &Error) -> MonotriStatus {
    match e {
        Error::Reducible => MonotriStatus::Reducible,
        Error::Inconsistent(_) => MonotriStatus::Inconsistent,
        e if e.is_unknown() => MonotriStatus::Unknown,
        _ => MonotriStatus::InvalidArgument,
    }
}

fn guarded(f: impl FnOnce() -> MonotriStatus) -> MonotriStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(MonotriStatus::Internal, "internal error"),
    }
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn parse_int(s: *const c_char, name: &str) -> Result<BigInt, MonotriStatus> {
    if s.is_null() {
        return Err(fail(MonotriStatus::NullPointer, &format!("{name} is null")));
    }
    let text = CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(MonotriStatus::InvalidArgument, &format!("{name} is not UTF-8")))?;
    text.trim().parse().map_err(|_| {
        fail(
            MonotriStatus::InvalidArgument,
            &format!("{name} is not a decimal integer: {text:?}"),
        )
    })
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message for the most recent failure on this thread. Never null. Do not
/// free.
#[no_mangle]
pub extern "C" fn monotri_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string. Do not free.
#[no_mangle]
pub extern "C" fn monotri_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a pointer returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn monotri_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Classifies x^(2p) + a x^p + b^p with default settings. On success `*out`
/// receives a handle to release with `monotri_classification_free`. A
/// reducible family still succeeds; its handle reports irreducible = false.
/// A budget failure also succeeds, with monogenicity left undetermined.
///
/// # Safety
/// `a` and `b` must be valid NUL-terminated strings, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn monotri_classify(
    p: u64,
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut MonotriClassification,
) -> MonotriStatus {
    monotri_classify_seeded(p, a, b, Config::default().seed, out)
}

/// `monotri_classify` with an explicit seed for the randomized steps.
///
/// # Safety
/// Same as `monotri_classify`.
#[no_mangle]
pub unsafe extern "C" fn monotri_classify_seeded(
    p: u64,
    a: *const c_char,
    b: *const c_char,
    seed: u64,
    out: *mut *mut MonotriClassification,
) -> MonotriStatus {
    guarded(|| {
        if out.is_null() {
            return fail(MonotriStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let (a, b) = match (parse_int(a, "a"), parse_int(b, "b")) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let mut cfg = Config::default();
        cfg.set_seed(seed);
        let result = TrinomialFamily::new(p, a, b).and_then(|fam| classify(&fam, &cfg));
        match result {
            Ok(c) => {
                *out = Box::into_raw(Box::new(MonotriClassification { inner: c }));
                MonotriStatus::Ok
            }
            Err(e) => fail(status_of(&e), &e.to_string()),
        }
    })
}

/// Releases a classification handle. Null is ignored.
///
/// # Safety
/// `h` must be null or a handle from `monotri_classify` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn monotri_classification_free(h: *mut MonotriClassification) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

unsafe fn handle<'a>(h: *const MonotriClassification) -> Option<&'a Classification> {
    h.as_ref().map(|h| &h.inner)
}

fn truth(v: Option<bool>) -> MonotriTruth {
    match v {
        Some(true) => MonotriTruth::True,
        Some(false) => MonotriTruth::False,
        None => MonotriTruth::Undetermined,
    }
}

/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn monotri_classification_irreducible(h: *const MonotriClassification) -> MonotriTruth {
    truth(handle(h).map(|c| c.irreducible))
}

/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn monotri_classification_monogenic(h: *const MonotriClassification) -> MonotriTruth {
    truth(handle(h).and_then(|c| c.monogenic))
}

/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn monotri_classification_galois(h: *const MonotriClassification) -> MonotriGalois {
    match handle(h).and_then(|c| c.galois).map(|g| g.kind) {
        Some(GaloisKind::Frobenius) => MonotriGalois::Frobenius,
        Some(GaloisKind::HalfTimesC2) => MonotriGalois::HalfTimesC2,
        Some(GaloisKind::FullTimesC2) => MonotriGalois::FullTimesC2,
        None => MonotriGalois::None,
    }
}

/// Order of the Galois group as a decimal string, or null when the family is
/// reducible or `h` is null.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn monotri_classification_galois_order(h: *const MonotriClassification) -> *mut c_char {
    match handle(h).and_then(|c| c.galois) {
        Some(g) => to_c_string(g.order().to_string()),
        None => ptr::null_mut(),
    }
}

/// Discriminant of f as a decimal string, or null if `h` is null.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn monotri_classification_discriminant(h: *const MonotriClassification) -> *mut c_char {
    handle(h).map_or(ptr::null_mut(), |c| to_c_string(c.disc_f.to_string()))
}

/// The classification as one JSON object, or null if `h` is null.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn monotri_classification_to_json(h: *const MonotriClassification) -> *mut c_char {
    handle(h).map_or(ptr::null_mut(), |c| {
        let line = render(&[ClassificationRecord::from(c)], Format::Jsonl);
        to_c_string(line.trim_end().to_string())
    })
}

/// Whether |n| is prime, for a decimal integer n.
///
/// # Safety
/// `n` must be a valid NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn monotri_is_prime(n: *const c_char, out: *mut MonotriTruth) -> MonotriStatus {
    guarded(|| {
        if out.is_null() {
            return fail(MonotriStatus::NullPointer, "out is null");
        }
        match parse_int(n, "n") {
            Ok(n) => {
                *out = truth(Some(monotri::arith::is_prime(&n)));
                MonotriStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// Monogenicity of a general monic trinomial x^n + A x^m + B (0 < m < n).
/// Fails with `Reducible` for a reducible trinomial and `Unknown` when its
/// discriminant could not be factored within budget.
///
/// # Safety
/// `a` and `b` must be valid NUL-terminated strings, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn monotri_trinomial_monogenic(
    n: u32,
    m: u32,
    a: *const c_char,
    b: *const c_char,
    out: *mut MonotriTruth,
) -> MonotriStatus {
    guarded(|| {
        if out.is_null() {
            return fail(MonotriStatus::NullPointer, "out is null");
        }
        *out = MonotriTruth::Undetermined;
        let (a, b) = match (parse_int(a, "A"), parse_int(b, "B")) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let result = GeneralTrinomial::new(n as usize, m as usize, a, b)
            .and_then(|t| trinomial_is_monogenic(&t, &Config::default()));
        match result {
            Ok(report) => {
                *out = truth(Some(report.monogenic));
                MonotriStatus::Ok
            }
            Err(e) => fail(status_of(&e), &e.to_string()),
        }
    })
}
