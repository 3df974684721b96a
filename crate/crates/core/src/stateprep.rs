//! Black-box state preparation: put `x/2^n` (scaled) on the amplitude of a
//! flagged component while the Data register keeps holding `|x⟩`.
//!
//! Data bit `x_{n-i}` (weight `1/2^i`) lives on Data qubit `i-1`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QaaError, Result};
use crate::sim::{controls_for_value, Circuit, Control, FlagPredicate, GateKind, RegisterLayout, RegisterRole};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrepVariant {
    Basic,
    Alternative,
    Improved,
    Complex,
}

impl PrepVariant {
    pub const ALL: [PrepVariant; 4] =
        [PrepVariant::Basic, PrepVariant::Alternative, PrepVariant::Improved, PrepVariant::Complex];

    pub fn as_str(&self) -> &'static str {
        match self {
            PrepVariant::Basic => "basic",
            PrepVariant::Alternative => "alternative",
            PrepVariant::Improved => "improved",
            PrepVariant::Complex => "complex",
        }
    }
}

impl fmt::Display for PrepVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PrepVariant {
    type Err = QaaError;

    fn from_str(s: &str) -> Result<Self> {
        PrepVariant::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| QaaError::InvalidParameter(format!("unknown variant {s:?}")))
    }
}

/// `⌈log₂ n⌉` for `n >= 1`.
pub fn ceil_log2(n: usize) -> usize {
    assert!(n >= 1);
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

/// Data bit as seen by a selector: a qubit, or a value fixed at build time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Bit {
    Qubit(usize),
    Const(bool),
}

impl Bit {
    /// Control list for a gate conditioned on this bit, or `None` when the
    /// bit is a constant 0 and the gate must be dropped.
    fn gate_controls(&self, mut base: Vec<Control>) -> Option<Vec<Control>> {
        match *self {
            Bit::Qubit(q) => {
                base.push(Control::on(q));
                Some(base)
            }
            Bit::Const(true) => Some(base),
            Bit::Const(false) => None,
        }
    }
}

/// Rotation family used by the selectors: `Ry` for real loads, `Rx` for
/// the imaginary half of a complex load.
pub(crate) type Rotation = fn(f64) -> GateKind;

/// Branch `t` of `control` rotates `work` by `2·asin(terms[t].1)` when
/// `terms[t].0` is set.
pub(crate) fn basic_select(
    c: &mut Circuit,
    terms: &[(Bit, f64)],
    control: &[usize],
    work: usize,
    extra: &[Control],
    rot: Rotation,
) -> Result<()> {
    debug_assert!(terms.len() <= 1 << control.len());
    for (t, &(bit, s)) in terms.iter().enumerate() {
        let mut base = controls_for_value(control, t);
        base.extend_from_slice(extra);
        if let Some(ctrls) = bit.gate_controls(base) {
            c.controlled(rot(2.0 * s.asin()), work, ctrls)?;
        }
    }
    Ok(())
}

/// Group `i` (1-based) is the set of control states whose top `i` bits read
/// `1…10`; it holds `2^{w-i}` of the `2^w` states. One rotation by `π` per
/// group, conditioned on that group's bit.
pub(crate) fn alternative_select(
    c: &mut Circuit,
    bits: &[Bit],
    control: &[usize],
    work: usize,
    extra: &[Control],
    rot: Rotation,
) -> Result<()> {
    debug_assert!(bits.len() <= control.len());
    for (g, bit) in bits.iter().enumerate() {
        let mut base: Vec<Control> = control[..g].iter().map(|&q| Control::on(q)).collect();
        base.push(Control::off(control[g]));
        base.extend_from_slice(extra);
        if let Some(ctrls) = bit.gate_controls(base) {
            c.controlled(rot(PI), work, ctrls)?;
        }
    }
    Ok(())
}

/// Both halves of the improved load: the high `m` bits by prefix groups
/// when `lcu` reads 0, the rest by `asin(2^{m-k})` branches when it reads 1.
pub(crate) fn improved_select(
    c: &mut Circuit,
    bits: &[Bit],
    lcu: usize,
    control: &[usize],
    work: usize,
    extra: &[Control],
    rot: Rotation,
) -> Result<()> {
    let n = bits.len();
    let m = control.len();
    let mut part1_extra = vec![Control::off(lcu)];
    part1_extra.extend_from_slice(extra);
    alternative_select(c, &bits[..m], control, work, &part1_extra, rot)?;

    let terms: Vec<(Bit, f64)> =
        (m + 1..=n).map(|k| (bits[k - 1], 2f64.powi(m as i32 - k as i32))).collect();
    let mut part2_extra = vec![Control::on(lcu)];
    part2_extra.extend_from_slice(extra);
    basic_select(c, &terms, control, work, &part2_extra, rot)
}

fn ry(a: f64) -> GateKind {
    GateKind::Ry(a)
}

fn rx(a: f64) -> GateKind {
    GateKind::Rx(a)
}

fn hadamards(c: &mut Circuit, qubits: &[usize]) -> Result<()> {
    for &q in qubits {
        c.gate(GateKind::H, q)?;
    }
    Ok(())
}

/// Parameters of one state-preparation circuit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrepSpec {
    pub n: usize,
    pub variant: PrepVariant,
    /// Control register width.
    pub m: usize,
}

impl PrepSpec {
    pub fn new(variant: PrepVariant, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(QaaError::InvalidParameter(format!("n = {n}: at least 2 data bits required")));
        }
        if n > 62 {
            return Err(QaaError::InvalidParameter(format!("n = {n} exceeds 62 data bits")));
        }
        let m = match variant {
            PrepVariant::Alternative => n,
            _ => ceil_log2(n),
        };
        Ok(PrepSpec { n, variant, m })
    }

    pub fn build(&self) -> Result<Circuit> {
        match self.variant {
            PrepVariant::Basic => build_basic(self.n),
            PrepVariant::Alternative => build_alternative(self.n),
            PrepVariant::Improved => build_improved(self.n),
            PrepVariant::Complex => build_complex(self.n),
        }
    }

    /// Expected flag amplitude for Data value `x` (and imaginary part `b`
    /// for the complex variant).
    pub fn closed_form(&self, x: u64, b: u64) -> Complex64 {
        let scale = 2f64.powi(self.n as i32);
        match self.variant {
            PrepVariant::Basic => Complex64::new(x as f64 / scale / 2f64.powi(self.m as i32), 0.0),
            PrepVariant::Alternative => Complex64::new(x as f64 / scale, 0.0),
            PrepVariant::Improved => Complex64::new(x as f64 / (2.0 * scale), 0.0),
            PrepVariant::Complex => Complex64::new(x as f64, b as f64) / (4.0 * scale),
        }
    }

    pub fn extra_qubits(&self) -> usize {
        match self.variant {
            PrepVariant::Basic => self.m + 1,
            PrepVariant::Alternative => self.n + 1,
            PrepVariant::Improved => self.m + 2,
            PrepVariant::Complex => self.m + 3,
        }
    }

    /// Basis index loading `x` (and `b` into the imaginary register).
    pub fn input_index(&self, circuit: &Circuit, x: u64, b: u64) -> Result<usize> {
        match self.variant {
            PrepVariant::Complex => circuit.layout.basis_index(&[("data", x), ("data_im", b)]),
            _ => circuit.layout.basis_index(&[("data", x)]),
        }
    }
}

fn data_bits(data: &[usize]) -> Vec<Bit> {
    data.iter().map(|&q| Bit::Qubit(q)).collect()
}

/// `m = ⌈log₂ n⌉` controls in uniform superposition; branch `i-1` turns
/// `Work` by `2·asin(1/2^i)` when `x_{n-i}` is set. Flag: control = 0^m,
/// work = 1, amplitude `(1/2^m)(x/2^n)`.
pub fn build_basic(n: usize) -> Result<Circuit> {
    let spec = PrepSpec::new(PrepVariant::Basic, n)?;
    let mut layout = RegisterLayout::new();
    let data = layout.add("data", n, RegisterRole::Data)?;
    let control = layout.add("control", spec.m, RegisterRole::Control)?;
    let work = layout.add("work", 1, RegisterRole::Work)?[0];
    let mut c = Circuit::new(layout);

    hadamards(&mut c, &control)?;
    let terms: Vec<(Bit, f64)> =
        data.iter().enumerate().map(|(i, &q)| (Bit::Qubit(q), 2f64.powi(-(i as i32 + 1)))).collect();
    basic_select(&mut c, &terms, &control, work, &[], ry)?;
    hadamards(&mut c, &control)?;

    let mut flag = FlagPredicate::zeros(&control);
    flag.require(work, true)?;
    c.set_flag(flag)?;
    Ok(c)
}

/// `n` controls in uniform superposition, split into prefix groups of
/// `2^{n-i}` states for bit `x_{n-i}`; each group flips `Work` when its bit
/// is set. Flag: control = 0^n, work = 1, amplitude `x/2^n`.
pub fn build_alternative(n: usize) -> Result<Circuit> {
    let spec = PrepSpec::new(PrepVariant::Alternative, n)?;
    let mut layout = RegisterLayout::new();
    let data = layout.add("data", n, RegisterRole::Data)?;
    let control = layout.add("control", spec.m, RegisterRole::Control)?;
    let work = layout.add("work", 1, RegisterRole::Work)?[0];
    let mut c = Circuit::new(layout);

    hadamards(&mut c, &control)?;
    alternative_select(&mut c, &data_bits(&data), &control, work, &[], ry)?;
    hadamards(&mut c, &control)?;

    let mut flag = FlagPredicate::zeros(&control);
    flag.require(work, true)?;
    c.set_flag(flag)?;
    Ok(c)
}

/// Two-part load combined by one LCU qubit: the `m` high bits through
/// prefix groups (part I), the remaining `n - m` bits through
/// `asin(2^{m-k})` branches (part II), sharing the `m` control qubits.
/// Flag: lcu = 0, control = 0^m, work = 1, amplitude `x/2^{n+1}`.
pub fn build_improved(n: usize) -> Result<Circuit> {
    let spec = PrepSpec::new(PrepVariant::Improved, n)?;
    let mut layout = RegisterLayout::new();
    let data = layout.add("data", n, RegisterRole::Data)?;
    let lcu = layout.add("lcu", 1, RegisterRole::Control)?[0];
    let control = layout.add("control", spec.m, RegisterRole::Control)?;
    let work = layout.add("work", 1, RegisterRole::Work)?[0];
    let mut c = Circuit::new(layout);

    c.gate(GateKind::H, lcu)?;
    hadamards(&mut c, &control)?;
    improved_select(&mut c, &data_bits(&data), lcu, &control, work, &[], ry)?;
    hadamards(&mut c, &control)?;
    c.gate(GateKind::H, lcu)?;

    let mut flag = FlagPredicate::zeros(&[lcu]);
    for &q in &control {
        flag.require(q, false)?;
    }
    flag.require(work, true)?;
    c.set_flag(flag)?;
    Ok(c)
}

/// Complex load `(a + ib)/2^{n+2}` from two Data registers: an extra
/// `phase` qubit picks between an `Ry` load of `data` and an `Rx` load of
/// `data_im`. `Rx` leaves `-i` on `Work = 1`, which a `Z` on `Work`
/// (conditioned on the imaginary branch) turns into `+i`.
pub fn build_complex(n: usize) -> Result<Circuit> {
    let spec = PrepSpec::new(PrepVariant::Complex, n)?;
    let mut layout = RegisterLayout::new();
    let re = layout.add("data", n, RegisterRole::Data)?;
    let im = layout.add("data_im", n, RegisterRole::Data)?;
    let phase = layout.add("phase", 1, RegisterRole::Control)?[0];
    let lcu = layout.add("lcu", 1, RegisterRole::Control)?[0];
    let control = layout.add("control", spec.m, RegisterRole::Control)?;
    let work = layout.add("work", 1, RegisterRole::Work)?[0];
    let mut c = Circuit::new(layout);

    c.gate(GateKind::H, phase)?;
    c.gate(GateKind::H, lcu)?;
    hadamards(&mut c, &control)?;
    improved_select(&mut c, &data_bits(&re), lcu, &control, work, &[Control::off(phase)], ry)?;
    improved_select(&mut c, &data_bits(&im), lcu, &control, work, &[Control::on(phase)], rx)?;
    c.controlled(GateKind::Z, work, vec![Control::on(phase)])?;
    hadamards(&mut c, &control)?;
    c.gate(GateKind::H, lcu)?;
    c.gate(GateKind::H, phase)?;

    let mut flag = FlagPredicate::zeros(&[phase, lcu]);
    for &q in &control {
        flag.require(q, false)?;
    }
    flag.require(work, true)?;
    c.set_flag(flag)?;
    Ok(c)
}

/// Flag amplitude of `spec`'s circuit on input `x` (and `b`).
pub fn simulate(spec: &PrepSpec, circuit: &Circuit, x: u64, b: u64) -> Result<Complex64> {
    let input = spec.input_index(circuit, x, b)?;
    circuit.flag_amplitude_for_input(input)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amp(variant: PrepVariant, n: usize, x: u64, b: u64) -> Complex64 {
        let spec = PrepSpec::new(variant, n).unwrap();
        let c = spec.build().unwrap();
        simulate(&spec, &c, x, b).unwrap()
    }

    #[test]
    fn basic_examples() {
        assert_eq!(amp(PrepVariant::Basic, 3, 0, 0).re.abs(), 0.0);
        assert!((amp(PrepVariant::Basic, 3, 5, 0).re - 0.15625).abs() < 1e-12);
        assert!((amp(PrepVariant::Basic, 4, 15, 0).re - 0.234375).abs() < 1e-12);
    }

    #[test]
    fn alternative_examples() {
        assert!(amp(PrepVariant::Alternative, 3, 0, 0).norm() < 1e-15);
        assert!((amp(PrepVariant::Alternative, 3, 5, 0).re - 0.625).abs() < 1e-12);
        assert!((amp(PrepVariant::Alternative, 2, 3, 0).re - 0.75).abs() < 1e-12);
    }

    #[test]
    fn improved_examples() {
        assert!(amp(PrepVariant::Improved, 4, 0, 0).norm() < 1e-15);
        assert!((amp(PrepVariant::Improved, 4, 9, 0).re - 0.28125).abs() < 1e-12);
        assert!((amp(PrepVariant::Improved, 4, 15, 0).re - 0.46875).abs() < 1e-12);
    }

    #[test]
    fn complex_examples() {
        assert!(amp(PrepVariant::Complex, 3, 0, 0).norm() < 1e-15);
        let a = amp(PrepVariant::Complex, 3, 4, 0);
        assert!((a - Complex64::new(0.125, 0.0)).norm() < 1e-12);
        let a = amp(PrepVariant::Complex, 3, 3, 5);
        assert!((a.norm() - 34f64.sqrt() / 32.0).abs() < 1e-12);
        assert!((a.arg() - 5f64.atan2(3.0)).abs() < 1e-12);
    }

    #[test]
    fn rejects_small_n() {
        for v in PrepVariant::ALL {
            assert!(PrepSpec::new(v, 1).is_err());
        }
    }

    #[test]
    fn ceil_log2_values() {
        let got: Vec<usize> = (1..=9).map(ceil_log2).collect();
        assert_eq!(got, vec![0, 1, 2, 2, 3, 3, 3, 3, 4]);
    }

    #[test]
    fn variant_parse() {
        assert_eq!("improved".parse::<PrepVariant>().unwrap(), PrepVariant::Improved);
        assert!("fancy".parse::<PrepVariant>().is_err());
    }
}
