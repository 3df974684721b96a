use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::PiecewisePolynomial;
use crate::error::{QaaError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub function: String,
    pub degree: usize,
    pub pieces: usize,
    pub n_bits: usize,
}

/// Classical stand-in for quantum random-access memory: subdomain index to
/// coefficient row. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct QramStub {
    table: BTreeMap<usize, Vec<i64>>,
    provenance: Provenance,
}

impl QramStub {
    pub fn from_polynomial(function: &str, poly: &PiecewisePolynomial) -> Self {
        let table = poly.rows().iter().cloned().enumerate().collect();
        QramStub {
            table,
            provenance: Provenance {
                function: function.to_string(),
                degree: poly.degree(),
                pieces: poly.pieces(),
                n_bits: poly.n_bits(),
            },
        }
    }

    /// Table with only the given rows; lookups of other indices fail.
    pub fn from_rows(provenance: Provenance, rows: BTreeMap<usize, Vec<i64>>) -> Self {
        QramStub { table: rows, provenance }
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn row(&self, j: usize) -> Result<&[i64]> {
        self.table.get(&j).map(Vec::as_slice).ok_or(QaaError::MissingRow(j))
    }

    pub fn n_bits(&self) -> usize {
        self.provenance.n_bits
    }

    pub fn is_complete(&self) -> bool {
        (0..self.provenance.pieces).all(|j| self.table.contains_key(&j))
    }
}
