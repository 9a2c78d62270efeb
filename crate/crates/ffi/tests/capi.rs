//! Exercises the C entry points the way a foreign caller would: raw
//! pointers, status codes, explicit frees.

use hinted_dict_ffi::*;

fn new_dict(backend: i32) -> *mut HdDict {
    let d = hd_dict_new(backend);
    assert!(!d.is_null(), "backend {backend} should construct");
    d
}

fn entries_of(dict: *const HdDict) -> Vec<(i64, f64)> {
    unsafe {
        let mut size = 0u64;
        assert_eq!(hd_dict_size(dict, &mut size), HdStatus::Ok);
        let mut keys = vec![0i64; size as usize];
        let mut values = vec![0f64; size as usize];
        let mut written = 0u64;
        assert_eq!(
            hd_dict_entries(dict, keys.as_mut_ptr(), values.as_mut_ptr(), size, &mut written),
            HdStatus::Ok
        );
        assert_eq!(written, size);
        keys.into_iter().zip(values).collect()
    }
}

#[test]
fn insert_find_delete_roundtrip_on_every_backend() {
    for backend in 0..=5 {
        unsafe {
            let d = new_dict(backend);
            assert_eq!(hd_dict_insert(d, 5, 2.0), HdStatus::Ok);
            assert_eq!(hd_dict_insert(d, 5, 3.0), HdStatus::Ok);
            assert_eq!(hd_dict_insert(d, 1, 1.0), HdStatus::Ok);

            let mut out = 0.0f64;
            assert_eq!(hd_dict_find(d, 5, &mut out), HdStatus::Ok);
            assert_eq!(out, 5.0, "insert must accumulate");
            assert_eq!(hd_dict_find(d, 9, &mut out), HdStatus::Ok);
            assert_eq!(out, 0.0, "absent keys read zero");

            assert_eq!(entries_of(d), vec![(1, 1.0), (5, 5.0)]);

            assert_eq!(hd_dict_delete(d, 5), HdStatus::Ok);
            assert_eq!(hd_dict_delete(d, 77), HdStatus::Ok, "absent delete is a no-op");
            let mut size = 0u64;
            assert_eq!(hd_dict_size(d, &mut size), HdStatus::Ok);
            assert_eq!(size, 1);
            hd_dict_free(d);
        }
    }
}

#[test]
fn zero_valued_entries_are_stored_but_not_counted() {
    unsafe {
        let d = new_dict(2);
        assert_eq!(hd_dict_insert(d, 4, 0.0), HdStatus::Ok);
        let (mut size, mut count) = (0u64, 0u64);
        assert_eq!(hd_dict_size(d, &mut size), HdStatus::Ok);
        assert_eq!(hd_dict_count(d, &mut count), HdStatus::Ok);
        assert_eq!((size, count), (1, 0));
        hd_dict_free(d);
    }
}

#[test]
fn merge_add_and_mul_and_inner() {
    for backend in 0..=5 {
        unsafe {
            let a = new_dict(backend);
            let b = new_dict(backend);
            hd_dict_insert(a, 0, 1.0);
            hd_dict_insert(a, 2, 2.0);
            hd_dict_insert(b, 2, 3.0);
            hd_dict_insert(b, 7, 4.0);

            let sum = hd_dict_merge_add(a, b);
            assert!(!sum.is_null());
            assert_eq!(entries_of(sum), vec![(0, 1.0), (2, 5.0), (7, 4.0)]);

            let prod = hd_dict_merge_mul(a, b);
            assert!(!prod.is_null());
            assert_eq!(entries_of(prod), vec![(2, 6.0)]);

            let mut dot = 0.0f64;
            assert_eq!(hd_dict_inner_product(a, b, &mut dot), HdStatus::Ok);
            assert_eq!(dot, 6.0);

            hd_dict_free(sum);
            hd_dict_free(prod);
            hd_dict_free(a);
            hd_dict_free(b);
        }
    }
}

#[test]
fn error_paths_report_status_codes() {
    unsafe {
        assert!(hd_dict_new(99).is_null(), "unknown backend code");
        assert_eq!(hd_dict_insert(std::ptr::null_mut(), 1, 1.0), HdStatus::NullPointer);

        let d = new_dict(0);
        // Sentinel keys are contract violations, reported not unwound.
        assert_eq!(hd_dict_insert(d, i64::MAX, 1.0), HdStatus::ContractViolation);
        assert_eq!(hd_dict_insert(d, i64::MIN, 1.0), HdStatus::ContractViolation);

        hd_dict_insert(d, 1, 1.0);
        hd_dict_insert(d, 2, 1.0);
        let mut keys = [0i64; 1];
        let mut values = [0f64; 1];
        let mut written = 0u64;
        assert_eq!(
            hd_dict_entries(d, keys.as_mut_ptr(), values.as_mut_ptr(), 1, &mut written),
            HdStatus::CapacityTooSmall
        );

        let other = new_dict(2);
        assert!(hd_dict_merge_add(d, other).is_null(), "backend mismatch yields null");
        let mut dot = 0.0;
        assert_eq!(hd_dict_inner_product(d, other, &mut dot), HdStatus::BackendMismatch);

        hd_dict_free(other);
        hd_dict_free(d);
        hd_dict_free(std::ptr::null_mut());
    }
}

#[test]
fn clone_is_independent() {
    unsafe {
        let a = new_dict(5);
        hd_dict_insert(a, 1, 1.0);
        let b = hd_dict_clone(a);
        assert!(!b.is_null());
        hd_dict_insert(b, 2, 2.0);
        assert_eq!(entries_of(a), vec![(1, 1.0)]);
        assert_eq!(entries_of(b), vec![(1, 1.0), (2, 2.0)]);
        hd_dict_free(a);
        hd_dict_free(b);
    }
}

#[test]
fn status_names_are_static_strings() {
    let name = hd_status_name(HdStatus::BackendMismatch);
    let text = unsafe { std::ffi::CStr::from_ptr(name) }.to_str().unwrap();
    assert_eq!(text, "backend mismatch");
}

#[test]
fn generated_header_declares_the_surface() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/hinted_dict.h");
    let text = std::fs::read_to_string(header).expect("header generated at build time");
    for symbol in [
        "hd_dict_new",
        "hd_dict_free",
        "hd_dict_insert",
        "hd_dict_find",
        "hd_dict_merge_add",
        "hd_dict_inner_product",
        "typedef struct HdDict HdDict;",
    ] {
        assert!(text.contains(symbol), "header is missing {symbol}");
    }
}
