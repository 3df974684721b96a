use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QaaError, Result};

/// 2x2 unitary in row-major order.
pub type Matrix2 = [[Complex64; 2]; 2];

/// Single-qubit gate kinds understood by the simulator.
///
/// Rotations follow `R(φ) = exp(-i φ P / 2)`, so `Ry(2θ)|0⟩ = cosθ|0⟩ + sinθ|1⟩`
/// and `Rx(2θ)|0⟩ = cosθ|0⟩ - i sinθ|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GateKind {
    H,
    X,
    Z,
    Ry(f64),
    Rx(f64),
}

impl GateKind {
    pub fn matrix(&self) -> Matrix2 {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        match *self {
            GateKind::H => {
                let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                [[s, s], [s, -s]]
            }
            GateKind::X => [[zero, one], [one, zero]],
            GateKind::Z => [[one, zero], [zero, -one]],
            GateKind::Ry(phi) => {
                let (s, c) = (phi / 2.0).sin_cos();
                [
                    [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
                    [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
                ]
            }
            GateKind::Rx(phi) => {
                let (s, c) = (phi / 2.0).sin_cos();
                [
                    [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
                    [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
                ]
            }
        }
    }

    pub fn is_rotation(&self) -> bool {
        matches!(self, GateKind::Ry(_) | GateKind::Rx(_))
    }

    pub fn inverse(&self) -> GateKind {
        match *self {
            GateKind::Ry(phi) => GateKind::Ry(-phi),
            GateKind::Rx(phi) => GateKind::Rx(-phi),
            other => other,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Z => "z",
            GateKind::Ry(_) => "ry",
            GateKind::Rx(_) => "rx",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Control {
    pub qubit: usize,
    /// Required value of the control qubit for the gate to fire.
    pub polarity: bool,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Control { qubit, polarity: true }
    }

    pub fn off(qubit: usize) -> Self {
        Control { qubit, polarity: false }
    }
}

/// Controls requiring `qubits` (MSB first) to hold `value`.
pub fn controls_for_value(qubits: &[usize], value: usize) -> Vec<Control> {
    let w = qubits.len();
    qubits
        .iter()
        .enumerate()
        .map(|(i, &q)| Control { qubit: q, polarity: (value >> (w - 1 - i)) & 1 == 1 })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateOp {
    pub kind: GateKind,
    pub target: usize,
    pub controls: Vec<Control>,
}

impl GateOp {
    pub fn new(kind: GateKind, target: usize) -> Self {
        GateOp { kind, target, controls: Vec::new() }
    }

    pub fn controlled(kind: GateKind, target: usize, controls: Vec<Control>) -> Self {
        GateOp { kind, target, controls }
    }

    pub fn with_controls(mut self, extra: &[Control]) -> Self {
        self.controls.extend_from_slice(extra);
        self
    }

    pub fn inverse(&self) -> GateOp {
        GateOp { kind: self.kind.inverse(), target: self.target, controls: self.controls.clone() }
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.target).chain(self.controls.iter().map(|c| c.qubit))
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let mut seen = Vec::with_capacity(self.controls.len() + 1);
        for q in self.qubits() {
            if q >= num_qubits {
                return Err(QaaError::QubitOutOfRange { qubit: q, num_qubits });
            }
            if seen.contains(&q) {
                return Err(QaaError::OverlappingQubits(q));
            }
            seen.push(q);
        }
        Ok(())
    }
}
