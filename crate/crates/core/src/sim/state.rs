use num_complex::Complex64;

use super::gate::GateOp;
use crate::error::{QaaError, Result};

/// Width cap used unless a caller asks for more.
pub const DEFAULT_MAX_QUBITS: usize = 24;
/// No override may go beyond this.
pub const HARD_MAX_QUBITS: usize = 28;

/// Dense amplitude vector over `num_qubits` qubits.
///
/// Qubit 0 is the most significant bit of the basis index, so the basis
/// label reads left to right in layout order.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn basis(num_qubits: usize, index: usize, max_qubits: usize) -> Result<Self> {
        let limit = max_qubits.min(HARD_MAX_QUBITS);
        if num_qubits == 0 {
            return Err(QaaError::InvalidParameter("a state needs at least one qubit".into()));
        }
        if num_qubits > limit {
            return Err(QaaError::TooManyQubits { requested: num_qubits, limit });
        }
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(QaaError::IndexOutOfRange { index, lo: 0, hi: dim - 1 });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { num_qubits, amplitudes })
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(QaaError::InvalidParameter(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        Ok(StateVector { num_qubits: len.trailing_zeros() as usize, amplitudes })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    #[inline]
    pub(crate) fn bit_of(&self, qubit: usize) -> usize {
        1usize << (self.num_qubits - 1 - qubit)
    }

    pub fn apply(&mut self, op: &GateOp) -> Result<()> {
        op.validate(self.num_qubits)?;
        let m = op.kind.matrix();
        let tbit = self.bit_of(op.target);
        let mut cmask = 0usize;
        let mut cval = 0usize;
        for c in &op.controls {
            let b = self.bit_of(c.qubit);
            cmask |= b;
            if c.polarity {
                cval |= b;
            }
        }
        let low = tbit - 1;
        let half = self.amplitudes.len() / 2;
        for k in 0..half {
            // insert a zero at the target bit position
            let i0 = ((k & !low) << 1) | (k & low);
            if i0 & cmask != cval {
                continue;
            }
            let i1 = i0 | tbit;
            let a0 = self.amplitudes[i0];
            let a1 = self.amplitudes[i1];
            self.amplitudes[i0] = m[0][0] * a0 + m[0][1] * a1;
            self.amplitudes[i1] = m[1][0] * a0 + m[1][1] * a1;
        }
        Ok(())
    }

    /// Maximum componentwise distance to another state of the same width.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        assert_eq!(self.num_qubits, other.num_qubits);
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}
