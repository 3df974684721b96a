use thiserror::Error;

pub type Result<T, E = QaaError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QaaError {
    #[error("qubit index {qubit} out of range for {num_qubits} qubits")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("qubit {0} appears more than once among target and controls")]
    OverlappingQubits(usize),

    #[error("{requested} qubits exceeds the simulation limit of {limit}")]
    TooManyQubits { requested: usize, limit: usize },

    #[error("input has width {got}, layout expects {expected}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("invalid bitstring {0:?}")]
    InvalidBitstring(String),

    #[error("flag pattern is under-constrained: {free} qubit(s) left free")]
    UnderConstrained { free: usize },

    #[error("register {0:?} is not declared")]
    UnknownRegister(String),

    #[error("register {0:?} is declared twice")]
    DuplicateRegister(String),

    #[error("value {value} does not fit in register {register:?} of width {width}")]
    RegisterOverflow { register: String, value: u64, width: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("incompatible LCU branches: {0}")]
    IncompatibleBranches(String),

    #[error("index {index} outside [{lo}, {hi}]")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },

    #[error("x = {x} outside subdomain [{lo}, {hi})")]
    OutsideSubdomain { x: f64, lo: f64, hi: f64 },

    #[error("function is unbounded or not finite on the domain (at x = {0})")]
    Unbounded(f64),

    #[error("QRAM has no row for subdomain {0}")]
    MissingRow(usize),

    #[error("reciprocal plan was built for (n={plan_n}, y={plan_y}), system is (n={sys_n}, y={sys_y})")]
    PlanMismatch { plan_n: usize, plan_y: f64, sys_n: usize, sys_y: f64 },

    #[error("QASM parse error on line {line}: {msg}")]
    QasmParse { line: usize, msg: String },

    #[error("coefficient table: {0}")]
    Table(String),
}
