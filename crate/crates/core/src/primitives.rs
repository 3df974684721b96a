//! Multiplication and addition on amplitudes.
//!
//! A single `Ry(2θ)` on a fresh qubit leaves `cosθ` on `|0⟩`. Putting such
//! factors on separate qubits multiplies them on the all-zero component;
//! sandwiching controlled branches between a preparer `A` and `A†` on a
//! combiner register adds them (`W = A† U A`).

use std::f64::consts::PI;

use crate::error::{QaaError, Result};
use crate::sim::{controls_for_value, Circuit, Control, FlagPredicate, GateKind, GateOp, RegisterLayout, RegisterRole};

/// Angle of one `cosθ` factor, `θ ∈ [0, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleFactor(f64);

impl AngleFactor {
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(QaaError::InvalidParameter(format!("angle {theta} outside [0, π]")));
        }
        Ok(AngleFactor(theta))
    }

    pub fn theta(&self) -> f64 {
        self.0
    }

    pub fn cos(&self) -> f64 {
        self.0.cos()
    }
}

/// `k` work qubits each rotated by `Ry(2θ_t)`, then a marker qubit flipped
/// when all work qubits read 0. Flag: work = 0^k, marker = 1; amplitude
/// `Π cos θ_t`.
pub fn multiply_block(thetas: &[AngleFactor]) -> Result<Circuit> {
    if thetas.is_empty() {
        return Err(QaaError::InvalidParameter("multiply_block needs at least one factor".into()));
    }
    let mut layout = RegisterLayout::new();
    let work = layout.add("work", thetas.len(), RegisterRole::Work)?;
    let mark = layout.add("mark", 1, RegisterRole::Ancilla)?[0];
    let mut c = Circuit::new(layout);
    for (q, t) in work.iter().zip(thetas) {
        c.gate(GateKind::Ry(2.0 * t.theta()), *q)?;
    }
    c.controlled(GateKind::X, mark, work.iter().map(|&q| Control::off(q)).collect())?;
    let mut flag = FlagPredicate::zeros(&work);
    flag.require(mark, true)?;
    c.set_flag(flag)?;
    Ok(c)
}

/// `H · [|0⟩⟨0| ⊗ Ry(2θ₁) + |1⟩⟨1| ⊗ Ry(2θ₂)] · H` on (combiner, target).
///
/// The four output amplitudes are `(cosθ₁+cosθ₂)/2` on `|00⟩`,
/// `(sinθ₁+sinθ₂)/2` on `|01⟩`, `(cosθ₁−cosθ₂)/2` on `|10⟩` and
/// `(sinθ₁−sinθ₂)/2` on `|11⟩`. The flag is `|00⟩`.
pub fn add_block(theta1: AngleFactor, theta2: AngleFactor) -> Result<Circuit> {
    let mut layout = RegisterLayout::new();
    let comb = layout.add("combiner", 1, RegisterRole::Control)?[0];
    let target = layout.add("target", 1, RegisterRole::Work)?[0];
    let mut c = Circuit::new(layout);
    c.gate(GateKind::H, comb)?;
    c.controlled(GateKind::Ry(2.0 * theta1.theta()), target, vec![Control::off(comb)])?;
    c.controlled(GateKind::Ry(2.0 * theta2.theta()), target, vec![Control::on(comb)])?;
    c.gate(GateKind::H, comb)?;
    c.set_flag(FlagPredicate::zeros(&[comb, target]))?;
    Ok(c)
}

/// Gates taking `|0…0⟩` on `qubits` to `Σ_b √(w_b / Σw) |b⟩` (MSB-first
/// binary tree of controlled `Ry`). `weights` is padded with zeros up to
/// `2^qubits.len()`.
pub fn prepare_weights(qubits: &[usize], weights: &[f64]) -> Result<Vec<GateOp>> {
    let w = qubits.len();
    let dim = 1usize << w;
    if weights.len() > dim {
        return Err(QaaError::InvalidParameter(format!(
            "{} weights do not fit on {w} qubits",
            weights.len()
        )));
    }
    if weights.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(QaaError::InvalidParameter("weights must be finite and nonnegative".into()));
    }
    let mut padded = weights.to_vec();
    padded.resize(dim, 0.0);
    if padded.iter().sum::<f64>() <= 0.0 {
        return Err(QaaError::InvalidParameter("weights sum to zero".into()));
    }
    let mut ops = Vec::new();
    for level in 0..w {
        let span = dim >> level;
        for prefix in 0..(1usize << level) {
            let block = &padded[prefix * span..(prefix + 1) * span];
            let left: f64 = block[..span / 2].iter().sum();
            let right: f64 = block[span / 2..].iter().sum();
            if right == 0.0 {
                continue;
            }
            let angle = 2.0 * right.sqrt().atan2(left.sqrt());
            let controls = controls_for_value(&qubits[..level], prefix);
            ops.push(GateOp::controlled(GateKind::Ry(angle), qubits[level], controls));
        }
    }
    Ok(ops)
}

pub fn inverse_ops(ops: &[GateOp]) -> Vec<GateOp> {
    ops.iter().rev().map(GateOp::inverse).collect()
}

/// One addend of [`lcu_combine`].
#[derive(Debug, Clone)]
pub struct LcuBranch {
    pub weight: f64,
    pub fragment: Circuit,
    /// Contribute `-a` instead of `a`.
    pub negate: bool,
}

impl LcuBranch {
    pub fn new(weight: f64, fragment: Circuit) -> Self {
        LcuBranch { weight, fragment, negate: false }
    }

    pub fn negated(mut self) -> Self {
        self.negate = true;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LcuNormalization {
    /// Hadamard preparer over all `branches = 2^m` combiner states; unused
    /// states act as identity branches. Flag = `Σ_i a_i / 2^m`.
    Uniform { branches: usize },
    /// Exact weighted preparer. Flag = `Σ_i p_i a_i / p`.
    Weighted { total_weight: f64 },
}

#[derive(Debug, Clone)]
pub struct LcuCircuit {
    pub circuit: Circuit,
    pub normalization: LcuNormalization,
}

/// Weighted sum of fragment flag amplitudes on the combiner's `|0^m⟩`.
///
/// Every fragment must share one layout and flag; they act on a common
/// system register placed after an `m`-qubit combiner register.
pub fn lcu_combine(branches: &[LcuBranch], m: usize) -> Result<LcuCircuit> {
    let first = branches
        .first()
        .ok_or_else(|| QaaError::InvalidParameter("lcu_combine needs at least one branch".into()))?;
    if m == 0 || m > 16 {
        return Err(QaaError::InvalidParameter(format!("combiner width {m} outside 1..=16")));
    }
    if branches.len() > 1 << m {
        return Err(QaaError::InvalidParameter(format!(
            "{} branches do not fit on {m} combiner qubits",
            branches.len()
        )));
    }
    for b in branches {
        if !(b.weight > 0.0) || !b.weight.is_finite() {
            return Err(QaaError::InvalidParameter(format!("branch weight {} is not positive", b.weight)));
        }
        if b.fragment.layout != first.fragment.layout || b.fragment.flag != first.fragment.flag {
            return Err(QaaError::IncompatibleBranches(
                "fragments must share layout and flag".into(),
            ));
        }
    }

    let mut layout = RegisterLayout::new();
    let comb = layout.add("combiner", m, RegisterRole::Control)?;
    let mut map = Vec::new();
    for r in first.fragment.layout.registers() {
        if r.name == "combiner" {
            return Err(QaaError::IncompatibleBranches("fragment already uses the name \"combiner\"".into()));
        }
        map.extend(layout.add(&r.name, r.width, r.role)?);
    }
    let mut c = Circuit::new(layout);

    let uniform = branches.iter().all(|b| (b.weight - first.weight).abs() <= 1e-12 * first.weight);
    let (prepare, normalization) = if uniform {
        let ops = comb.iter().map(|&q| GateOp::new(GateKind::H, q)).collect();
        (ops, LcuNormalization::Uniform { branches: 1 << m })
    } else {
        let weights: Vec<f64> = branches.iter().map(|b| b.weight).collect();
        let total = weights.iter().sum();
        (prepare_weights(&comb, &weights)?, LcuNormalization::Weighted { total_weight: total })
    };

    c.extend(prepare.clone())?;
    for (i, b) in branches.iter().enumerate() {
        let select = controls_for_value(&comb, i);
        c.append_mapped(&b.fragment, &map, &select)?;
        if b.negate {
            // phase -1 on combiner state |i⟩
            let (head, rest) = select.split_first().expect("m >= 1");
            let z = GateOp::controlled(GateKind::Z, head.qubit, rest.to_vec());
            if head.polarity {
                c.push(z)?;
            } else {
                c.gate(GateKind::X, head.qubit)?;
                c.push(z)?;
                c.gate(GateKind::X, head.qubit)?;
            }
        }
    }
    c.extend(inverse_ops(&prepare))?;

    let mut flag = FlagPredicate::zeros(&comb);
    for &(q, bit) in first.fragment.flag.constraints() {
        flag.require(map[q], bit)?;
    }
    c.set_flag(flag)?;
    Ok(LcuCircuit { circuit: c, normalization })
}

/// Appends `Ry(j · unit)` on `target`, where `j` is the value held in
/// `data` (MSB first): one rotation `Ry(unit · 2^{w-1-i})` per data qubit
/// `i`, each controlled by that qubit and by `extra`.
pub fn append_binary_controlled_ry(
    circuit: &mut Circuit,
    data: &[usize],
    target: usize,
    unit: f64,
    extra: &[Control],
) -> Result<()> {
    let w = data.len();
    for (i, &q) in data.iter().enumerate() {
        let angle = unit * (1u64 << (w - 1 - i)) as f64;
        // Ry(4πr) is the identity
        let turns = angle / (4.0 * PI);
        if (turns - turns.round()).abs() < 1e-12 {
            continue;
        }
        let mut controls = vec![Control::on(q)];
        controls.extend_from_slice(extra);
        circuit.controlled(GateKind::Ry(angle), target, controls)?;
    }
    Ok(())
}

/// Rotation cascade realising `Ry(jπ/2^{n-1})` on a target qubit for data
/// register value `j`: `n` singly-controlled rotations `Ry(π/2^{k-1})`,
/// `k = 1..n` from the most significant data bit down. Flag: target = 0,
/// amplitude `cos(jπ/2^n)`.
pub fn binary_controlled_ry(n: usize) -> Result<Circuit> {
    if n == 0 || n > 62 {
        return Err(QaaError::InvalidParameter(format!("cascade width {n} outside 1..=62")));
    }
    let mut layout = RegisterLayout::new();
    let data = layout.add("data", n, RegisterRole::Data)?;
    let target = layout.add("target", 1, RegisterRole::Work)?[0];
    let mut c = Circuit::new(layout);
    append_binary_controlled_ry(&mut c, &data, target, PI / (1u64 << (n - 1)) as f64, &[])?;
    c.set_flag(FlagPredicate::zeros(&[target]))?;
    Ok(c)
}
