use std::ffi::{c_char, CStr};
use std::ptr;

use qaa_ffi::*;

fn build_prep(variant: QaaPrepVariant, n: u32) -> *mut QaaCircuit {
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { qaa_prep_build(variant as u32, n, &mut c) }, QaaStatus::Ok);
    assert!(!c.is_null());
    c
}

fn take_string(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { qaa_string_free(s) };
    out
}

#[test]
fn improved_flag_amplitude_through_handle() {
    let c = build_prep(QaaPrepVariant::Improved, 4);
    let mut q = 0usize;
    assert_eq!(unsafe { qaa_circuit_num_qubits(c, &mut q) }, QaaStatus::Ok);
    assert_eq!(q, 4 + 4);

    // Data is the leading register, so x = 9 sits in the top four bits.
    let (mut re, mut im) = (0.0, 0.0);
    let index = 9u64 << (q - 4);
    assert_eq!(unsafe { qaa_circuit_flag_amplitude(c, index, &mut re, &mut im) }, QaaStatus::Ok);
    assert!((re - 9.0 / 32.0).abs() < 1e-12);
    assert!(im.abs() < 1e-12);
    unsafe { qaa_circuit_free(c) };
}

#[test]
fn qasm_and_resources_strings() {
    let c = build_prep(QaaPrepVariant::Basic, 3);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qaa_circuit_to_qasm(c, &mut s) }, QaaStatus::Ok);
    let qasm = take_string(s);
    assert!(qasm.starts_with("OPENQASM 2.0;"));

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qaa_circuit_resources_json(c, &mut s) }, QaaStatus::Ok);
    let json = take_string(s);
    assert!(json.contains("\"total_qubits\":6"), "{json}");
    unsafe { qaa_circuit_free(c) };
}

#[test]
fn reciprocal_values() {
    let mut lambda = 0.0;
    assert_eq!(unsafe { qaa_toeplitz_eigenvalue(2, 2.0, 1, &mut lambda) }, QaaStatus::Ok);
    assert!((lambda - (4.0 - 2f64.sqrt())).abs() < 1e-15);

    let mut product = 0.0;
    assert_eq!(unsafe { qaa_reciprocal_product(2, 2.0, 2, &mut product) }, QaaStatus::Ok);
    assert_eq!(product, 1.0);

    let mut c = ptr::null_mut();
    assert_eq!(unsafe { qaa_reciprocal_build(2, 2.0, &mut c) }, QaaStatus::Ok);
    let mut q = 0usize;
    unsafe { qaa_circuit_num_qubits(c, &mut q) };
    assert!(q <= 20);
    unsafe { qaa_circuit_free(c) };
}

#[test]
fn error_codes() {
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { qaa_prep_build(9, 4, &mut c) }, QaaStatus::InvalidArgument);
    assert_eq!(unsafe { qaa_prep_build(2, 1, &mut c) }, QaaStatus::InvalidArgument);
    assert!(c.is_null());
    assert_eq!(unsafe { qaa_prep_build(2, 4, ptr::null_mut()) }, QaaStatus::NullPointer);
    assert_eq!(unsafe { qaa_reciprocal_build(2, 1.0, &mut c) }, QaaStatus::InvalidArgument);

    let mut q = 0usize;
    assert_eq!(unsafe { qaa_circuit_num_qubits(ptr::null(), &mut q) }, QaaStatus::NullPointer);

    let mut x = 0.0;
    assert_eq!(unsafe { qaa_toeplitz_eigenvalue(2, 2.0, 4, &mut x) }, QaaStatus::InvalidArgument);

    let c = build_prep(QaaPrepVariant::Improved, 3);
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(unsafe { qaa_circuit_flag_amplitude(c, 1 << 40, &mut re, &mut im) }, QaaStatus::InvalidArgument);
    assert_eq!(unsafe { qaa_circuit_flag_amplitude(c, 0, ptr::null_mut(), &mut im) }, QaaStatus::NullPointer);
    unsafe { qaa_circuit_free(c) };

    unsafe {
        qaa_circuit_free(ptr::null_mut());
        qaa_string_free(ptr::null_mut());
    }
}

#[test]
fn status_messages_are_static() {
    for s in [QaaStatus::Ok, QaaStatus::NullPointer, QaaStatus::InvalidArgument, QaaStatus::TooManyQubits, QaaStatus::Internal] {
        let m = unsafe { CStr::from_ptr(qaa_status_message(s)) };
        assert!(!m.to_bytes().is_empty());
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/qaa.h")).unwrap();
    for name in [
        "qaa_status_message",
        "qaa_prep_build",
        "qaa_reciprocal_build",
        "qaa_circuit_free",
        "qaa_circuit_num_qubits",
        "qaa_circuit_flag_amplitude",
        "qaa_circuit_to_qasm",
        "qaa_circuit_resources_json",
        "qaa_string_free",
        "qaa_toeplitz_eigenvalue",
        "qaa_reciprocal_product",
        "typedef struct QaaCircuit QaaCircuit;",
        "QAA_PREP_VARIANT_IMPROVED = 2",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
