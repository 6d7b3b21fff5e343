use std::ffi::{CStr, CString};
use std::ptr;

use monotri_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn take_string(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { monotri_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(monotri_last_error_message()) }.to_str().unwrap().to_string()
}

fn classify(p: u64, a: &str, b: &str) -> (MonotriStatus, *mut MonotriClassification) {
    let mut h = ptr::null_mut();
    let status = unsafe { monotri_classify(p, c(a).as_ptr(), c(b).as_ptr(), &mut h) };
    (status, h)
}

#[test]
fn classify_frobenius_family() {
    let (status, h) = classify(5, "3", "1");
    assert_eq!(status, MonotriStatus::Ok);
    unsafe {
        assert_eq!(monotri_classification_irreducible(h), MonotriTruth::True);
        assert_eq!(monotri_classification_monogenic(h), MonotriTruth::True);
        assert_eq!(monotri_classification_galois(h), MonotriGalois::Frobenius);
        assert_eq!(take_string(monotri_classification_galois_order(h)), "20");
        // 5^10 * (9 - 4)^5
        assert_eq!(take_string(monotri_classification_discriminant(h)), (5u64.pow(15)).to_string());
        let json = take_string(monotri_classification_to_json(h));
        assert!(json.starts_with("{\"p\":5,\"a\":3,\"b\":1,"), "{json}");
        assert!(json.contains("\"monogenic\":true"));
        monotri_classification_free(h);
    }
}

#[test]
fn classify_reducible_and_non_monogenic() {
    let (status, h) = classify(3, "2", "1");
    assert_eq!(status, MonotriStatus::Ok);
    unsafe {
        assert_eq!(monotri_classification_irreducible(h), MonotriTruth::False);
        assert_eq!(monotri_classification_galois(h), MonotriGalois::None);
        assert!(monotri_classification_galois_order(h).is_null());
        monotri_classification_free(h);
    }
    let (status, h) = classify(3, "7", "1");
    assert_eq!(status, MonotriStatus::Ok);
    unsafe {
        assert_eq!(monotri_classification_monogenic(h), MonotriTruth::False);
        assert_eq!(monotri_classification_galois(h), MonotriGalois::FullTimesC2);
        monotri_classification_free(h);
    }
}

#[test]
fn classify_large_coefficient() {
    // a^2 + 4 is prime for this a, so the discriminant factors quickly.
    let a = "123456789012345678901234567905";
    let (status, h) = classify(3, a, "-1");
    assert_eq!(status, MonotriStatus::Ok);
    let json = take_string(unsafe { monotri_classification_to_json(h) });
    assert!(json.contains(&format!("\"a\":{a},")));
    assert_ne!(unsafe { monotri_classification_monogenic(h) }, MonotriTruth::Undetermined, "{json}");
    unsafe { monotri_classification_free(h) };
}

#[test]
fn invalid_inputs_report_status_and_message() {
    let (status, h) = classify(4, "1", "1");
    assert_eq!(status, MonotriStatus::InvalidArgument);
    assert!(h.is_null());
    assert!(last_error().contains("p = 4"), "{}", last_error());

    let (status, _) = classify(5, "three", "1");
    assert_eq!(status, MonotriStatus::InvalidArgument);
    assert!(last_error().contains("three"));

    let (status, _) = classify(5, "0", "1");
    assert_eq!(status, MonotriStatus::InvalidArgument);

    let mut h = ptr::null_mut();
    let status = unsafe { monotri_classify(5, ptr::null(), c("1").as_ptr(), &mut h) };
    assert_eq!(status, MonotriStatus::NullPointer);
    let status = unsafe { monotri_classify(5, c("3").as_ptr(), c("1").as_ptr(), ptr::null_mut()) };
    assert_eq!(status, MonotriStatus::NullPointer);
}

#[test]
fn null_handles_are_tolerated() {
    unsafe {
        assert_eq!(monotri_classification_irreducible(ptr::null()), MonotriTruth::Undetermined);
        assert_eq!(monotri_classification_monogenic(ptr::null()), MonotriTruth::Undetermined);
        assert_eq!(monotri_classification_galois(ptr::null()), MonotriGalois::None);
        assert!(monotri_classification_to_json(ptr::null()).is_null());
        monotri_classification_free(ptr::null_mut());
        monotri_string_free(ptr::null_mut());
    }
}

#[test]
fn seeded_classification_matches_default() {
    let mut h1 = ptr::null_mut();
    let mut h2 = ptr::null_mut();
    unsafe {
        assert_eq!(monotri_classify(13, c("3").as_ptr(), c("-1").as_ptr(), &mut h1), MonotriStatus::Ok);
        assert_eq!(monotri_classify_seeded(13, c("3").as_ptr(), c("-1").as_ptr(), 99, &mut h2), MonotriStatus::Ok);
        assert_eq!(
            take_string(monotri_classification_to_json(h1)),
            take_string(monotri_classification_to_json(h2))
        );
        monotri_classification_free(h1);
        monotri_classification_free(h2);
    }
}

#[test]
fn primality() {
    let mut out = MonotriTruth::Undetermined;
    for (n, expected) in [
        ("2", MonotriTruth::True),
        ("1", MonotriTruth::False),
        ("0", MonotriTruth::False),
        ("-7", MonotriTruth::True),
        ("170141183460469231731687303715884105727", MonotriTruth::True),
        ("170141183460469231731687303715884105729", MonotriTruth::False),
    ] {
        assert_eq!(unsafe { monotri_is_prime(c(n).as_ptr(), &mut out) }, MonotriStatus::Ok);
        assert_eq!(out, expected, "{n}");
    }
    assert_eq!(unsafe { monotri_is_prime(c("x").as_ptr(), &mut out) }, MonotriStatus::InvalidArgument);
}

#[test]
fn general_trinomial_monogenicity() {
    let mut out = MonotriTruth::Undetermined;
    let run = |n, m, a: &str, b: &str, out: &mut MonotriTruth| unsafe {
        monotri_trinomial_monogenic(n, m, c(a).as_ptr(), c(b).as_ptr(), out)
    };
    // x^2 + x + 1: discriminant -3, squarefree.
    assert_eq!(run(2, 1, "1", "1", &mut out), MonotriStatus::Ok);
    assert_eq!(out, MonotriTruth::True);
    // x^2 + 0x - 5 is not a trinomial, so use x^2 + 2x - 4 (discriminant 20 = 4 * 5,
    // and Z[(1 + sqrt 5)/2] is larger than Z[sqrt 5]).
    assert_eq!(run(2, 1, "2", "-4", &mut out), MonotriStatus::Ok);
    assert_eq!(out, MonotriTruth::False);
    assert_eq!(run(2, 1, "2", "1", &mut out), MonotriStatus::Reducible);
    assert_eq!(run(2, 2, "1", "1", &mut out), MonotriStatus::InvalidArgument);
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(monotri_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
