//! Dense statevector simulation of the circuit IR, plus resource counting
//! and OpenQASM export.

mod circuit;
mod gate;
mod layout;
pub mod qasm;
mod resources;
mod state;

pub use circuit::{flag_amplitude, Circuit, FlagPredicate, Simulator};
pub use gate::{controls_for_value, Control, GateKind, GateOp, Matrix2};
pub use layout::{Register, RegisterLayout, RegisterRole};
pub use qasm::{export_qasm, parse_qasm};
pub use resources::{count_resources, CostModel, GateCounts, ResourceReport};
pub use state::{StateVector, DEFAULT_MAX_QUBITS, HARD_MAX_QUBITS};
