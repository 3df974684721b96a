use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gate::{Control, GateKind, GateOp};
use super::layout::RegisterLayout;
use super::state::{StateVector, DEFAULT_MAX_QUBITS, HARD_MAX_QUBITS};
use crate::error::{QaaError, Result};

/// Set of (qubit, required bit) constraints naming the flagged component.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FlagPredicate {
    constraints: Vec<(usize, bool)>,
}

impl FlagPredicate {
    pub fn new(constraints: Vec<(usize, bool)>) -> Result<Self> {
        let mut p = FlagPredicate::default();
        for (q, b) in constraints {
            p.require(q, b)?;
        }
        Ok(p)
    }

    /// Every qubit in `qubits` must read 0.
    pub fn zeros(qubits: &[usize]) -> Self {
        FlagPredicate { constraints: qubits.iter().map(|&q| (q, false)).collect() }
    }

    pub fn require(&mut self, qubit: usize, bit: bool) -> Result<()> {
        if self.constraints.iter().any(|&(q, _)| q == qubit) {
            return Err(QaaError::OverlappingQubits(qubit));
        }
        self.constraints.push((qubit, bit));
        Ok(())
    }

    pub fn constraints(&self) -> &[(usize, bool)] {
        &self.constraints
    }

    pub fn contains(&self, qubit: usize) -> bool {
        self.constraints.iter().any(|&(q, _)| q == qubit)
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// Constraints on every qubit not named by this predicate, read off
    /// the basis state `index` of a `num_qubits`-wide system.
    pub fn residual_from_basis(&self, num_qubits: usize, index: usize) -> FlagPredicate {
        let constraints = (0..num_qubits)
            .filter(|q| !self.contains(*q))
            .map(|q| (q, (index >> (num_qubits - 1 - q)) & 1 == 1))
            .collect();
        FlagPredicate { constraints }
    }
}

/// Ordered gate list over a register layout, plus the flag that marks
/// where the computed amplitude lives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub layout: RegisterLayout,
    pub ops: Vec<GateOp>,
    pub flag: FlagPredicate,
}

impl Circuit {
    pub fn new(layout: RegisterLayout) -> Self {
        Circuit { layout, ops: Vec::new(), flag: FlagPredicate::default() }
    }

    pub fn num_qubits(&self) -> usize {
        self.layout.total_width()
    }

    pub fn push(&mut self, op: GateOp) -> Result<()> {
        op.validate(self.num_qubits())?;
        self.ops.push(op);
        Ok(())
    }

    pub fn gate(&mut self, kind: GateKind, target: usize) -> Result<()> {
        self.push(GateOp::new(kind, target))
    }

    pub fn controlled(&mut self, kind: GateKind, target: usize, controls: Vec<Control>) -> Result<()> {
        self.push(GateOp::controlled(kind, target, controls))
    }

    pub fn extend<I: IntoIterator<Item = GateOp>>(&mut self, ops: I) -> Result<()> {
        for op in ops {
            self.push(op)?;
        }
        Ok(())
    }

    pub fn set_flag(&mut self, flag: FlagPredicate) -> Result<()> {
        let n = self.num_qubits();
        if let Some(&(q, _)) = flag.constraints().iter().find(|(q, _)| *q >= n) {
            return Err(QaaError::QubitOutOfRange { qubit: q, num_qubits: n });
        }
        self.flag = flag;
        Ok(())
    }

    /// Copies `other`'s gates into this circuit, relabelling qubit `q` of
    /// `other` as `map[q]` and adding `extra` controls to every gate.
    pub fn append_mapped(&mut self, other: &Circuit, map: &[usize], extra: &[Control]) -> Result<()> {
        if map.len() != other.num_qubits() {
            return Err(QaaError::WidthMismatch { expected: other.num_qubits(), got: map.len() });
        }
        for op in &other.ops {
            let mapped = GateOp {
                kind: op.kind,
                target: map[op.target],
                controls: op
                    .controls
                    .iter()
                    .map(|c| Control { qubit: map[c.qubit], polarity: c.polarity })
                    .collect(),
            };
            self.push(mapped.with_controls(extra))?;
        }
        Ok(())
    }

    pub fn run(&self, input: usize) -> Result<StateVector> {
        Simulator::default().run(self, input)
    }

    pub fn run_bitstring(&self, bits: &str) -> Result<StateVector> {
        let index = self.layout.parse_bitstring(bits)?;
        self.run(index)
    }

    /// Runs on basis `input` and reads the amplitude on the flag with every
    /// other qubit held at its input value.
    pub fn flag_amplitude_for_input(&self, input: usize) -> Result<Complex64> {
        Simulator::default().flag_amplitude_for_input(self, input)
    }
}

/// Executes circuits with a configurable width cap.
#[derive(Debug, Clone, Copy)]
pub struct Simulator {
    max_qubits: usize,
}

impl Default for Simulator {
    fn default() -> Self {
        Simulator { max_qubits: DEFAULT_MAX_QUBITS }
    }
}

impl Simulator {
    pub fn with_max_qubits(max_qubits: usize) -> Self {
        Simulator { max_qubits: max_qubits.min(HARD_MAX_QUBITS) }
    }

    /// Reads `QAA_MAX_QUBITS`; unparsable values fall back to the default.
    pub fn from_env() -> Self {
        std::env::var("QAA_MAX_QUBITS")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .map(Simulator::with_max_qubits)
            .unwrap_or_default()
    }

    pub fn max_qubits(&self) -> usize {
        self.max_qubits
    }

    pub fn run(&self, circuit: &Circuit, input: usize) -> Result<StateVector> {
        let mut state = StateVector::basis(circuit.num_qubits(), input, self.max_qubits)?;
        for op in &circuit.ops {
            state.apply(op)?;
        }
        Ok(state)
    }

    pub fn flag_amplitude_for_input(&self, circuit: &Circuit, input: usize) -> Result<Complex64> {
        let state = self.run(circuit, input)?;
        let residual = circuit.flag.residual_from_basis(circuit.num_qubits(), input);
        flag_amplitude(&state, &circuit.flag, &residual)
    }
}

/// Reads the single amplitude picked out by `flag` together with `residual`.
pub fn flag_amplitude(
    state: &StateVector,
    flag: &FlagPredicate,
    residual: &FlagPredicate,
) -> Result<Complex64> {
    let n = state.num_qubits();
    let mut seen = vec![false; n];
    let mut index = 0usize;
    for &(q, bit) in flag.constraints().iter().chain(residual.constraints()) {
        if q >= n {
            return Err(QaaError::QubitOutOfRange { qubit: q, num_qubits: n });
        }
        if seen[q] {
            return Err(QaaError::OverlappingQubits(q));
        }
        seen[q] = true;
        if bit {
            index |= state.bit_of(q);
        }
    }
    let free = seen.iter().filter(|s| !**s).count();
    if free > 0 {
        return Err(QaaError::UnderConstrained { free });
    }
    Ok(state.amplitude(index))
}
