//! C ABI over `qaa-core`. Circuits are opaque handles; every call returns a
//! `QaaStatus` and writes results through out-pointers. Strings returned by
//! the library must be released with `qaa_string_free`, circuits with
//! `qaa_circuit_free`.

use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qaa_core::linsys::{build_reciprocal_circuit, reciprocal_product, ReciprocalPlan, ToeplitzSystem};
use qaa_core::sim::{count_resources, export_qasm, Circuit, CostModel, Simulator};
use qaa_core::stateprep::{PrepSpec, PrepVariant};
use qaa_core::QaaError;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QaaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    TooManyQubits = 3,
    Internal = 4,
}

/// Values accepted by `qaa_prep_build`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QaaPrepVariant {
    Basic = 0,
    Alternative = 1,
    Improved = 2,
    Complex = 3,
}

/// Opaque circuit handle.
pub struct QaaCircuit {
    circuit: Circuit,
}

fn status_of(e: &QaaError) -> QaaStatus {
    match e {
        QaaError::TooManyQubits { .. } => QaaStatus::TooManyQubits,
        _ => QaaStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), QaaStatus>) -> QaaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QaaStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => QaaStatus::Internal,
    }
}

fn lift<T>(r: Result<T, QaaError>) -> Result<T, QaaStatus> {
    r.map_err(|e| status_of(&e))
}

unsafe fn handle<'a>(c: *const QaaCircuit) -> Result<&'a QaaCircuit, QaaStatus> {
    c.as_ref().ok_or(QaaStatus::NullPointer)
}

unsafe fn emit<T>(out: *mut T, value: T) -> Result<(), QaaStatus> {
    if out.is_null() {
        return Err(QaaStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

unsafe fn emit_circuit(out: *mut *mut QaaCircuit, circuit: Circuit) -> Result<(), QaaStatus> {
    emit(out, Box::into_raw(Box::new(QaaCircuit { circuit })))
}

unsafe fn emit_string(out: *mut *mut c_char, text: String) -> Result<(), QaaStatus> {
    let s = CString::new(text).map_err(|_| QaaStatus::Internal)?;
    emit(out, s.into_raw())
}

/// Static description of a status code. Never free the result.
#[no_mangle]
pub extern "C" fn qaa_status_message(status: QaaStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        QaaStatus::Ok => b"ok\0",
        QaaStatus::NullPointer => b"null pointer argument\0",
        QaaStatus::InvalidArgument => b"invalid argument\0",
        QaaStatus::TooManyQubits => b"circuit exceeds the simulator qubit limit\0",
        QaaStatus::Internal => b"internal error\0",
    };
    s.as_ptr().cast()
}

/// State-preparation circuit for `n` data bits. `variant` is a
/// `QaaPrepVariant` value.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn qaa_prep_build(variant: u32, n: u32, out: *mut *mut QaaCircuit) -> QaaStatus {
    guard(|| {
        let v = match variant {
            0 => PrepVariant::Basic,
            1 => PrepVariant::Alternative,
            2 => PrepVariant::Improved,
            3 => PrepVariant::Complex,
            _ => return Err(QaaStatus::InvalidArgument),
        };
        let circuit = lift(PrepSpec::new(v, n as usize).and_then(|s| s.build()))?;
        emit_circuit(out, circuit)
    })
}

/// Reciprocal-eigenvalue circuit for the size `2^n - 1` system with
/// diagonal `2y`, using the default factor count.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn qaa_reciprocal_build(n: u32, y: f64, out: *mut *mut QaaCircuit) -> QaaStatus {
    guard(|| {
        let sys = lift(ToeplitzSystem::new(n as usize, y))?;
        let circuit = lift(build_reciprocal_circuit(&sys, &ReciprocalPlan::for_system(&sys)))?;
        emit_circuit(out, circuit)
    })
}

/// # Safety
/// `c` must come from a builder in this library and not be used afterwards.
/// Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qaa_circuit_free(c: *mut QaaCircuit) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `c` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qaa_circuit_num_qubits(c: *const QaaCircuit, out: *mut usize) -> QaaStatus {
    guard(|| emit(out, handle(c)?.circuit.num_qubits()))
}

/// Runs the circuit on basis state `basis_index` (qubit 0 is the most
/// significant bit) and reads the flagged amplitude. The qubit limit comes
/// from `QAA_MAX_QUBITS`.
///
/// # Safety
/// `c` must be a live handle; `out_re` and `out_im` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qaa_circuit_flag_amplitude(
    c: *const QaaCircuit,
    basis_index: u64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> QaaStatus {
    guard(|| {
        let c = handle(c)?;
        if out_re.is_null() || out_im.is_null() {
            return Err(QaaStatus::NullPointer);
        }
        let index = usize::try_from(basis_index).map_err(|_| QaaStatus::InvalidArgument)?;
        let a = lift(Simulator::from_env().flag_amplitude_for_input(&c.circuit, index))?;
        emit(out_re, a.re)?;
        emit(out_im, a.im)
    })
}

/// OpenQASM 2.0 text of the circuit.
///
/// # Safety
/// `c` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qaa_circuit_to_qasm(c: *const QaaCircuit, out: *mut *mut c_char) -> QaaStatus {
    guard(|| emit_string(out, export_qasm(&handle(c)?.circuit)))
}

/// Gate and qubit counts as JSON.
///
/// # Safety
/// `c` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qaa_circuit_resources_json(c: *const QaaCircuit, out: *mut *mut c_char) -> QaaStatus {
    guard(|| {
        let report = count_resources(&handle(c)?.circuit, &CostModel::default());
        let text = serde_json::to_string(&report).map_err(|_| QaaStatus::Internal)?;
        emit_string(out, text)
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn qaa_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Eigenvalue `λ_j = 2y - 2cos(jπ/2^n)` of the size `2^n - 1` system.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qaa_toeplitz_eigenvalue(n: u32, y: f64, j: u64, out: *mut f64) -> QaaStatus {
    guard(|| {
        let sys = lift(ToeplitzSystem::new(n as usize, y))?;
        emit(out, lift(sys.eigenvalue(j as usize))?)
    })
}

/// Truncated series value approximating `2y/λ_j` with the default factor
/// count.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn qaa_reciprocal_product(n: u32, y: f64, j: u64, out: *mut f64) -> QaaStatus {
    guard(|| {
        let sys = lift(ToeplitzSystem::new(n as usize, y))?;
        let plan = ReciprocalPlan::for_system(&sys);
        emit(out, lift(reciprocal_product(&sys, j as usize, &plan))?)
    })
}
