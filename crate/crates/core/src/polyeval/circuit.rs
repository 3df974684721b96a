use super::{PiecewisePolynomial, QramStub};
use crate::error::{QaaError, Result};
use crate::sim::{controls_for_value, Circuit, FlagPredicate, GateKind, RegisterLayout, RegisterRole};
use crate::stateprep::{ceil_log2, improved_select, Bit};

/// Evaluation circuit for one input `x`, with `amplitude · scale = p(u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalCircuit {
    pub circuit: Circuit,
    pub subdomain: usize,
    pub u: f64,
    pub scale: f64,
}

impl EvalCircuit {
    pub fn flag_amplitude(&self) -> Result<f64> {
        Ok(self.circuit.flag_amplitude_for_input(0)?.re)
    }

    /// Simulated polynomial value in polynomial units.
    pub fn value(&self) -> Result<f64> {
        Ok(self.flag_amplitude()? * self.scale)
    }
}

fn control_width(degree: usize) -> usize {
    ceil_log2(degree + 1)
}

fn parameter_width(n_bits: usize) -> usize {
    ceil_log2(n_bits) + 2
}

fn checked_row(qram: &QramStub, j: usize, degree: usize) -> Result<&[i64]> {
    let row = qram.row(j)?;
    let limit = 1i64 << qram.n_bits();
    if row.len() != degree + 1 {
        return Err(QaaError::InvalidParameter(format!(
            "row {j} has {} coefficients for degree {degree}",
            row.len()
        )));
    }
    if let Some(q) = row.iter().find(|q| q.abs() >= limit) {
        return Err(QaaError::InvalidParameter(format!("coefficient {q} does not fit in {} bits", qram.n_bits())));
    }
    Ok(row)
}

/// Loads row `j` onto a Parameter register: with `Control = |i⟩` the
/// all-zero Parameter state carries `q_i / 2^{n+1}`. Registers: `control`
/// (omitted for degree 0) and `parameter` = lcu, `⌈log₂ n⌉` selector
/// qubits, work.
pub fn qram_load_fragment(qram: &QramStub, j: usize) -> Result<Circuit> {
    let degree = qram.provenance().degree;
    let n = qram.n_bits();
    let row = checked_row(qram, j, degree)?;
    let m = control_width(degree);

    let mut layout = RegisterLayout::new();
    let control = if m > 0 { layout.add("control", m, RegisterRole::Control)? } else { Vec::new() };
    let param = layout.add("parameter", parameter_width(n), RegisterRole::Parameter)?;
    let (lcu, selector, work) = (param[0], &param[1..param.len() - 1], param[param.len() - 1]);
    let mut c = Circuit::new(layout);

    c.gate(GateKind::H, lcu)?;
    for &q in selector {
        c.gate(GateKind::H, q)?;
    }
    for (i, &q) in row.iter().enumerate() {
        let bits: Vec<Bit> = (1..=n).map(|k| Bit::Const((q.unsigned_abs() >> (n - k)) & 1 == 1)).collect();
        improved_select(&mut c, &bits, lcu, selector, work, &controls_for_value(&control, i), GateKind::Ry)?;
    }
    for &q in selector {
        c.gate(GateKind::H, q)?;
    }
    c.gate(GateKind::H, lcu)?;
    for (i, &q) in row.iter().enumerate() {
        if q < 0 {
            c.controlled(GateKind::Z, work, controls_for_value(&control, i))?;
        }
    }
    c.gate(GateKind::X, work)?;
    c.set_flag(FlagPredicate::zeros(&param))?;
    Ok(c)
}

fn append_powers(c: &mut Circuit, control: &[usize], data: &[usize], u: f64) -> Result<()> {
    let angle = 2.0 * u.acos();
    for i in 1..=data.len() {
        for &q in &data[..i] {
            c.controlled(GateKind::Ry(angle), q, controls_for_value(control, i))?;
        }
    }
    Ok(())
}

/// With `Control = |i⟩`, the all-zero `data` state carries `u^i`.
pub fn power_gadget(degree: usize, u: f64) -> Result<Circuit> {
    if degree == 0 {
        return Err(QaaError::InvalidParameter("power gadget needs degree >= 1".into()));
    }
    if !(0.0..=1.0).contains(&u) {
        return Err(QaaError::InvalidParameter(format!("u = {u} outside [0, 1]")));
    }
    let mut layout = RegisterLayout::new();
    let control = layout.add("control", control_width(degree), RegisterRole::Control)?;
    let data = layout.add("data", degree, RegisterRole::Work)?;
    let mut c = Circuit::new(layout);
    append_powers(&mut c, &control, &data, u)?;
    c.set_flag(FlagPredicate::zeros(&data))?;
    Ok(c)
}

/// Four-step evaluation of piece `j` at `x`: uniform Control, coefficient
/// load, powers of `u` on Data, uniform Control again. The all-zero flag
/// carries `p(u) / 2^{m+1}` with `m` the Control width.
pub fn build_eval_circuit(poly: &PiecewisePolynomial, qram: &QramStub, j: usize, x: f64) -> Result<EvalCircuit> {
    let prov = qram.provenance();
    if prov.degree != poly.degree() || prov.n_bits != poly.n_bits() {
        return Err(QaaError::InvalidParameter(format!(
            "table (degree {}, {} bits) does not match polynomial (degree {}, {} bits)",
            prov.degree,
            prov.n_bits,
            poly.degree(),
            poly.n_bits()
        )));
    }
    if j >= poly.pieces() {
        return Err(QaaError::IndexOutOfRange { index: j, lo: 0, hi: poly.pieces() - 1 });
    }
    let u = poly.local(j, x)?;
    let d = poly.degree();
    let m = control_width(d);
    let fragment = qram_load_fragment(qram, j)?;

    let mut layout = RegisterLayout::new();
    let control = if m > 0 { layout.add("control", m, RegisterRole::Control)? } else { Vec::new() };
    let param = layout.add("parameter", parameter_width(poly.n_bits()), RegisterRole::Parameter)?;
    let data = if d > 0 { layout.add("data", d, RegisterRole::Work)? } else { Vec::new() };
    let mut c = Circuit::new(layout);

    for &q in &control {
        c.gate(GateKind::H, q)?;
    }
    let map: Vec<usize> = control.iter().chain(&param).copied().collect();
    c.append_mapped(&fragment, &map, &[])?;
    append_powers(&mut c, &control, &data, u)?;
    for &q in &control {
        c.gate(GateKind::H, q)?;
    }
    c.set_flag(FlagPredicate::zeros(&(0..c.num_qubits()).collect::<Vec<_>>()))?;
    Ok(EvalCircuit { circuit: c, subdomain: j, u, scale: 2f64.powi(m as i32 + 1) })
}
