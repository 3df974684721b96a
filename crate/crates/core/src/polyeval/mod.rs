//! Piecewise polynomial evaluation on an amplitude.
//!
//! Subdomain `j` covers `[b_j, b_{j+1})` and its polynomial is written in
//! the local variable `u = (x - b_j)/(b_{j+1} - b_j) ∈ [0, 1)`. Coefficients
//! are sign-magnitude fixed point: an integer `q` with `|q| < 2^n` stands
//! for `q / 2^n`.

mod circuit;
mod fit;
mod qram;

pub use circuit::{build_eval_circuit, power_gadget, qram_load_fragment, EvalCircuit};
pub use fit::{fit, named_function, FitOptions, FitReport};
pub use qram::{Provenance, QramStub};

use serde::{Deserialize, Serialize};

use crate::error::{QaaError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePolynomial {
    breakpoints: Vec<f64>,
    degree: usize,
    n_bits: usize,
    coeffs: Vec<Vec<i64>>,
    output_scale: f64,
}

impl PiecewisePolynomial {
    pub fn new(breakpoints: Vec<f64>, degree: usize, n_bits: usize, coeffs: Vec<Vec<i64>>) -> Result<Self> {
        Self::with_scale(breakpoints, degree, n_bits, coeffs, 1.0)
    }

    /// `output_scale` converts polynomial values back to function units.
    pub fn with_scale(
        breakpoints: Vec<f64>,
        degree: usize,
        n_bits: usize,
        coeffs: Vec<Vec<i64>>,
        output_scale: f64,
    ) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(QaaError::InvalidParameter("need at least two breakpoints".into()));
        }
        if breakpoints.iter().any(|b| !b.is_finite()) || breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(QaaError::InvalidParameter("breakpoints must be finite and strictly increasing".into()));
        }
        if !(2..=30).contains(&n_bits) {
            return Err(QaaError::InvalidParameter(format!("n_bits = {n_bits} outside 2..=30")));
        }
        if coeffs.len() != breakpoints.len() - 1 {
            return Err(QaaError::InvalidParameter(format!(
                "{} coefficient rows for {} subdomains",
                coeffs.len(),
                breakpoints.len() - 1
            )));
        }
        let limit = 1i64 << n_bits;
        for row in &coeffs {
            if row.len() != degree + 1 {
                return Err(QaaError::InvalidParameter(format!(
                    "row of length {} for degree {degree}",
                    row.len()
                )));
            }
            if let Some(q) = row.iter().find(|q| q.abs() >= limit) {
                return Err(QaaError::InvalidParameter(format!("coefficient {q} does not fit in {n_bits} bits")));
            }
        }
        if !(output_scale.is_finite() && output_scale > 0.0) {
            return Err(QaaError::InvalidParameter(format!("output scale {output_scale} must be positive")));
        }
        Ok(PiecewisePolynomial { breakpoints, degree, n_bits, coeffs, output_scale })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn pieces(&self) -> usize {
        self.coeffs.len()
    }

    pub fn output_scale(&self) -> f64 {
        self.output_scale
    }

    /// Scaled integer coefficients of subdomain `j`, constant term first.
    pub fn row(&self, j: usize) -> &[i64] {
        &self.coeffs[j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.coeffs
    }

    pub fn coefficient(&self, j: usize, i: usize) -> f64 {
        self.coeffs[j][i] as f64 / (1u64 << self.n_bits) as f64
    }

    /// Index `j` with `x ∈ [b_j, b_{j+1})`.
    pub fn subdomain(&self, x: f64) -> Result<usize> {
        let b = &self.breakpoints;
        if !(x >= b[0] && x < b[b.len() - 1]) {
            return Err(QaaError::OutsideSubdomain { x, lo: b[0], hi: b[b.len() - 1] });
        }
        Ok(b.partition_point(|&bj| bj <= x) - 1)
    }

    /// Local variable of `x` in subdomain `j`.
    pub fn local(&self, j: usize, x: f64) -> Result<f64> {
        let (lo, hi) = (self.breakpoints[j], self.breakpoints[j + 1]);
        if !(x >= lo && x < hi) {
            return Err(QaaError::OutsideSubdomain { x, lo, hi });
        }
        Ok((x - lo) / (hi - lo))
    }

    /// Horner evaluation of piece `j` at local variable `u`.
    pub fn eval_piece(&self, j: usize, u: f64) -> f64 {
        (0..=self.degree).rev().fold(0.0, |acc, i| acc * u + self.coefficient(j, i))
    }

    /// Polynomial value at `x` (before output scaling).
    pub fn eval_classical(&self, x: f64) -> Result<f64> {
        let j = self.subdomain(x)?;
        Ok(self.eval_piece(j, self.local(j, x)?))
    }

    /// Value at `x` in function units.
    pub fn eval_function_units(&self, x: f64) -> Result<f64> {
        Ok(self.eval_classical(x)? * self.output_scale)
    }
}

/// On-disk coefficient table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub function: String,
    pub domain: [f64; 2],
    pub degree: usize,
    pub n_bits: usize,
    pub breakpoints: Vec<f64>,
    /// Scaled integers, one row per subdomain.
    pub coeffs: Vec<Vec<i64>>,
    #[serde(default = "unit_scale")]
    pub output_scale: f64,
    #[serde(default)]
    pub fit_report: Option<FitReport>,
}

fn unit_scale() -> f64 {
    1.0
}

impl CoefficientTable {
    pub fn new(function: &str, poly: &PiecewisePolynomial, report: Option<FitReport>) -> Self {
        let b = poly.breakpoints();
        CoefficientTable {
            function: function.to_string(),
            domain: [b[0], b[b.len() - 1]],
            degree: poly.degree(),
            n_bits: poly.n_bits(),
            breakpoints: b.to_vec(),
            coeffs: poly.rows().to_vec(),
            output_scale: poly.output_scale(),
            fit_report: report,
        }
    }

    pub fn polynomial(&self) -> Result<PiecewisePolynomial> {
        let b = &self.breakpoints;
        if b.first() != Some(&self.domain[0]) || b.last() != Some(&self.domain[1]) {
            return Err(QaaError::Table("domain does not match the outer breakpoints".into()));
        }
        PiecewisePolynomial::with_scale(
            self.breakpoints.clone(),
            self.degree,
            self.n_bits,
            self.coeffs.clone(),
            self.output_scale,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| QaaError::Table(e.to_string()))
    }
}
