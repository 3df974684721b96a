use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{QaaError, Result};

/// What a register is for. Everything that is not `Data` or `Input`
/// counts as an extra qubit in resource reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegisterRole {
    Data,
    Input,
    Control,
    Work,
    Parameter,
    Ancilla,
}

impl RegisterRole {
    pub fn is_extra(&self) -> bool {
        !matches!(self, RegisterRole::Data | RegisterRole::Input)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            RegisterRole::Data => "data",
            RegisterRole::Input => "input",
            RegisterRole::Control => "control",
            RegisterRole::Work => "work",
            RegisterRole::Parameter => "parameter",
            RegisterRole::Ancilla => "ancilla",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "data" => RegisterRole::Data,
            "input" => RegisterRole::Input,
            "control" => RegisterRole::Control,
            "work" => RegisterRole::Work,
            "parameter" => RegisterRole::Parameter,
            "ancilla" => RegisterRole::Ancilla,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Register {
    pub name: String,
    pub width: usize,
    pub role: RegisterRole,
    pub offset: usize,
}

impl Register {
    pub fn qubits(&self) -> Range<usize> {
        self.offset..self.offset + self.width
    }
}

/// Named qubit ranges laid out back to back. Within a register the first
/// qubit is the most significant bit.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RegisterLayout {
    registers: Vec<Register>,
}

impl RegisterLayout {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a register and returns its qubit indices.
    pub fn add(&mut self, name: &str, width: usize, role: RegisterRole) -> Result<Vec<usize>> {
        if width == 0 {
            return Err(QaaError::InvalidParameter(format!("register {name:?} has width 0")));
        }
        if self.registers.iter().any(|r| r.name == name) {
            return Err(QaaError::DuplicateRegister(name.to_string()));
        }
        let offset = self.total_width();
        self.registers.push(Register { name: name.to_string(), width, role, offset });
        Ok((offset..offset + width).collect())
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn total_width(&self) -> usize {
        self.registers.iter().map(|r| r.width).sum()
    }

    pub fn extra_width(&self) -> usize {
        self.registers.iter().filter(|r| r.role.is_extra()).map(|r| r.width).sum()
    }

    pub fn get(&self, name: &str) -> Result<&Register> {
        self.registers
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| QaaError::UnknownRegister(name.to_string()))
    }

    pub fn qubits(&self, name: &str) -> Result<Vec<usize>> {
        Ok(self.get(name)?.qubits().collect())
    }

    /// Basis index for the given register values; unnamed registers are 0.
    pub fn basis_index(&self, values: &[(&str, u64)]) -> Result<usize> {
        let total = self.total_width();
        let mut index = 0usize;
        for &(name, value) in values {
            let reg = self.get(name)?;
            if reg.width < 64 && value >> reg.width != 0 {
                return Err(QaaError::RegisterOverflow {
                    register: name.to_string(),
                    value,
                    width: reg.width,
                });
            }
            for (i, q) in reg.qubits().enumerate() {
                if (value >> (reg.width - 1 - i)) & 1 == 1 {
                    index |= 1 << (total - 1 - q);
                }
            }
        }
        Ok(index)
    }

    /// Parses a '0'/'1' string covering every qubit in layout order.
    pub fn parse_bitstring(&self, bits: &str) -> Result<usize> {
        let total = self.total_width();
        if bits.len() != total {
            return Err(QaaError::WidthMismatch { expected: total, got: bits.len() });
        }
        let mut index = 0usize;
        for ch in bits.chars() {
            index <<= 1;
            match ch {
                '0' => {}
                '1' => index |= 1,
                _ => return Err(QaaError::InvalidBitstring(bits.to_string())),
            }
        }
        Ok(index)
    }
}
