//! OpenQASM 2.0 export and a reader for the subset the exporter emits.
//!
//! Gates with two or more controls are lowered with an AND ladder of
//! `ccx` gates into a trailing ancilla register, following the default
//! [`CostModel`](super::resources::CostModel). Zero-polarity controls are
//! wrapped in `x` gates. Register roles and the flag pattern travel as
//! `// qaa-...` comment directives so an import reproduces the circuit's
//! flag; other OpenQASM readers ignore them.

use std::fmt::Write as _;

use super::circuit::{Circuit, FlagPredicate};
use super::gate::{Control, GateKind, GateOp};
use super::layout::{RegisterLayout, RegisterRole};
use super::resources::CostModel;
use crate::error::{QaaError, Result};

struct Namer<'a> {
    layout: &'a RegisterLayout,
    anc: String,
}

impl Namer<'_> {
    fn qubit(&self, q: usize) -> String {
        for r in self.layout.registers() {
            if r.qubits().contains(&q) {
                return format!("{}[{}]", r.name, q - r.offset);
            }
        }
        unreachable!("qubit {q} validated against layout")
    }

    fn anc(&self, i: usize) -> String {
        format!("{}[{}]", self.anc, i)
    }
}

fn angle(a: f64) -> String {
    format!("{a:.17e}")
}

fn single(kind: GateKind) -> String {
    match kind {
        GateKind::Ry(a) | GateKind::Rx(a) => format!("{}({})", kind.name(), angle(a)),
        _ => kind.name().to_string(),
    }
}

fn singly_controlled(kind: GateKind) -> String {
    match kind {
        GateKind::Ry(a) => format!("cry({})", angle(a)),
        GateKind::Rx(a) => format!("crx({})", angle(a)),
        GateKind::H => "ch".into(),
        GateKind::X => "cx".into(),
        GateKind::Z => "cz".into(),
    }
}

/// Emits `ccx` gates leaving the AND of `inputs` in the returned operand.
fn ladder(out: &mut String, namer: &Namer, inputs: &[String], uncompute: bool) -> String {
    debug_assert!(inputs.len() >= 2);
    let mut steps = vec![format!("ccx {},{},{};", inputs[0], inputs[1], namer.anc(0))];
    for i in 2..inputs.len() {
        steps.push(format!("ccx {},{},{};", inputs[i], namer.anc(i - 2), namer.anc(i - 1)));
    }
    if uncompute {
        steps.reverse();
    }
    for s in steps {
        out.push_str(&s);
        out.push('\n');
    }
    namer.anc(inputs.len() - 2)
}

fn emit_op(out: &mut String, namer: &Namer, op: &GateOp) {
    let flips: Vec<String> =
        op.controls.iter().filter(|c| !c.polarity).map(|c| namer.qubit(c.qubit)).collect();
    for f in &flips {
        let _ = writeln!(out, "x {f};");
    }
    let target = namer.qubit(op.target);
    let ctrls: Vec<String> = op.controls.iter().map(|c| namer.qubit(c.qubit)).collect();
    match (op.kind, ctrls.len()) {
        (kind, 0) => {
            let _ = writeln!(out, "{} {};", single(kind), target);
        }
        (kind, 1) => {
            let _ = writeln!(out, "{} {},{};", singly_controlled(kind), ctrls[0], target);
        }
        (GateKind::X, 2) => {
            let _ = writeln!(out, "ccx {},{},{};", ctrls[0], ctrls[1], target);
        }
        (GateKind::X, c) => {
            let and = ladder(out, namer, &ctrls[..c - 1], false);
            let _ = writeln!(out, "ccx {},{},{};", and, ctrls[c - 1], target);
            ladder(out, namer, &ctrls[..c - 1], true);
        }
        (kind, _) => {
            let and = ladder(out, namer, &ctrls, false);
            let _ = writeln!(out, "{} {},{};", singly_controlled(kind), and, target);
            ladder(out, namer, &ctrls, true);
        }
    }
    for f in &flips {
        let _ = writeln!(out, "x {f};");
    }
}

fn ancilla_name(layout: &RegisterLayout) -> String {
    let mut name = String::from("anc");
    while layout.registers().iter().any(|r| r.name == name) {
        name.push('_');
    }
    name
}

/// Number of ancilla qubits the export appends.
pub fn export_ancillas(circuit: &Circuit) -> usize {
    let model = CostModel::default();
    circuit.ops.iter().map(|op| model.ancillas(op)).max().unwrap_or(0)
}

pub fn export_qasm(circuit: &Circuit) -> String {
    let layout = &circuit.layout;
    let namer = Namer { layout, anc: ancilla_name(layout) };
    let anc_width = export_ancillas(circuit);

    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    for r in layout.registers() {
        let _ = writeln!(out, "// qaa-register {} {}", r.name, r.role.as_str());
        let _ = writeln!(out, "qreg {}[{}];", r.name, r.width);
    }
    if anc_width > 0 {
        let _ = writeln!(out, "// qaa-register {} ancilla", namer.anc);
        let _ = writeln!(out, "qreg {}[{}];", namer.anc, anc_width);
    }
    let mut flag: Vec<String> = circuit
        .flag
        .constraints()
        .iter()
        .map(|&(q, b)| format!("{}={}", namer.qubit(q), b as u8))
        .collect();
    flag.extend((0..anc_width).map(|i| format!("{}=0", namer.anc(i))));
    if !flag.is_empty() {
        let _ = writeln!(out, "// qaa-flag {}", flag.join(" "));
    }
    for op in &circuit.ops {
        emit_op(&mut out, &namer, op);
    }
    out
}

// ---------------------------------------------------------------------------
// reader

struct Expr<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Expr<'_> {
    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.s.get(self.pos).copied()
    }

    fn sum(&mut self) -> Option<f64> {
        let mut v = self.product()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let r = self.product()?;
            v = if c == b'+' { v + r } else { v - r };
        }
        Some(v)
    }

    fn product(&mut self) -> Option<f64> {
        let mut v = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let r = self.unary()?;
            v = if c == b'*' { v * r } else { v / r };
        }
        Some(v)
    }

    fn unary(&mut self) -> Option<f64> {
        match self.peek()? {
            b'-' => {
                self.pos += 1;
                Some(-self.unary()?)
            }
            b'+' => {
                self.pos += 1;
                self.unary()
            }
            b'(' => {
                self.pos += 1;
                let v = self.sum()?;
                (self.peek()? == b')').then(|| self.pos += 1)?;
                Some(v)
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Option<f64> {
        let start = self.pos;
        if self.s[start..].starts_with(b"pi") {
            self.pos += 2;
            return Some(std::f64::consts::PI);
        }
        while self.pos < self.s.len() {
            let c = self.s[self.pos];
            let exp_sign = (c == b'-' || c == b'+')
                && self.pos > start
                && matches!(self.s[self.pos - 1], b'e' | b'E');
            if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exp_sign {
                self.pos += 1;
            } else {
                break;
            }
        }
        std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
    }
}

fn eval_angle(text: &str) -> Option<f64> {
    let mut e = Expr { s: text.as_bytes(), pos: 0 };
    let v = e.sum()?;
    (e.peek().is_none()).then_some(v)
}

struct Reader {
    layout: RegisterLayout,
    roles: Vec<(String, RegisterRole)>,
    flag: Vec<(String, bool)>,
    ops: Vec<GateOp>,
}

fn perr(line: usize, msg: impl Into<String>) -> QaaError {
    QaaError::QasmParse { line, msg: msg.into() }
}

impl Reader {
    fn operand(&self, line: usize, text: &str) -> Result<usize> {
        let text = text.trim();
        let (name, rest) = text.split_once('[').ok_or_else(|| perr(line, format!("bad operand {text:?}")))?;
        let idx: usize = rest
            .strip_suffix(']')
            .and_then(|i| i.trim().parse().ok())
            .ok_or_else(|| perr(line, format!("bad index in {text:?}")))?;
        let reg = self.layout.get(name.trim()).map_err(|e| perr(line, e.to_string()))?;
        if idx >= reg.width {
            return Err(perr(line, format!("{text} out of range")));
        }
        Ok(reg.offset + idx)
    }

    fn directive(&mut self, line: usize, body: &str) -> Result<()> {
        let mut words = body.split_whitespace();
        match words.next() {
            Some("qaa-register") => {
                let name = words.next().ok_or_else(|| perr(line, "register directive without name"))?;
                let role = words
                    .next()
                    .and_then(RegisterRole::parse)
                    .ok_or_else(|| perr(line, "register directive without role"))?;
                self.roles.push((name.to_string(), role));
            }
            Some("qaa-flag") => {
                for w in words {
                    let (q, b) = w.split_once('=').ok_or_else(|| perr(line, format!("bad flag term {w:?}")))?;
                    let bit = match b {
                        "0" => false,
                        "1" => true,
                        _ => return Err(perr(line, format!("bad flag bit {b:?}"))),
                    };
                    self.flag.push((q.to_string(), bit));
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn statement(&mut self, line: usize, stmt: &str) -> Result<()> {
        let stmt = stmt.trim();
        if stmt.is_empty() || stmt.starts_with("OPENQASM") || stmt.starts_with("include") {
            return Ok(());
        }
        let (head, args) = match stmt.find('(') {
            Some(p) if stmt[..p].chars().all(|c| c.is_ascii_alphanumeric() || c == '_') => {
                let mut depth = 0i32;
                let close = stmt[p..]
                    .char_indices()
                    .find_map(|(i, c)| {
                        match c {
                            '(' => depth += 1,
                            ')' => depth -= 1,
                            _ => {}
                        }
                        (depth == 0).then_some(p + i)
                    })
                    .ok_or_else(|| perr(line, "unclosed parameter list"))?;
                (&stmt[..close + 1], &stmt[close + 1..])
            }
            _ => stmt.split_once(char::is_whitespace).ok_or_else(|| perr(line, format!("bad statement {stmt:?}")))?,
        };
        let (name, param) = match head.split_once('(') {
            Some((n, p)) => {
                let p = p.strip_suffix(')').unwrap_or(p);
                let v = eval_angle(p).ok_or_else(|| perr(line, format!("bad angle {p:?}")))?;
                (n.trim(), Some(v))
            }
            None => (head.trim(), None),
        };
        match name {
            "qreg" => {
                let (reg, width) = args
                    .trim()
                    .split_once('[')
                    .and_then(|(r, w)| Some((r.trim(), w.strip_suffix(']')?.trim().parse::<usize>().ok()?)))
                    .ok_or_else(|| perr(line, format!("bad qreg {args:?}")))?;
                let role = self
                    .roles
                    .iter()
                    .find(|(n, _)| n == reg)
                    .map(|(_, r)| *r)
                    .unwrap_or(RegisterRole::Ancilla);
                self.layout.add(reg, width, role).map_err(|e| perr(line, e.to_string()))?;
                return Ok(());
            }
            "creg" | "barrier" => return Ok(()),
            _ => {}
        }
        let qubits = args
            .split(',')
            .map(|a| self.operand(line, a))
            .collect::<Result<Vec<_>>>()?;
        let need_param = |p: Option<f64>| p.ok_or_else(|| perr(line, format!("{name} needs an angle")));
        let (kind, n_ctrl) = match name {
            "h" => (GateKind::H, 0),
            "x" => (GateKind::X, 0),
            "z" => (GateKind::Z, 0),
            "ry" => (GateKind::Ry(need_param(param)?), 0),
            "rx" => (GateKind::Rx(need_param(param)?), 0),
            "ch" => (GateKind::H, 1),
            "cx" => (GateKind::X, 1),
            "cz" => (GateKind::Z, 1),
            "cry" => (GateKind::Ry(need_param(param)?), 1),
            "crx" => (GateKind::Rx(need_param(param)?), 1),
            "ccx" => (GateKind::X, 2),
            other => return Err(perr(line, format!("unsupported gate {other:?}"))),
        };
        if qubits.len() != n_ctrl + 1 {
            return Err(perr(line, format!("{name} takes {} operands, got {}", n_ctrl + 1, qubits.len())));
        }
        let op = GateOp::controlled(
            kind,
            qubits[n_ctrl],
            qubits[..n_ctrl].iter().map(|&q| Control::on(q)).collect(),
        );
        op.validate(self.layout.total_width()).map_err(|e| perr(line, e.to_string()))?;
        self.ops.push(op);
        Ok(())
    }
}

/// Reads OpenQASM 2.0 text in the subset written by [`export_qasm`].
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let mut r = Reader { layout: RegisterLayout::new(), roles: Vec::new(), flag: Vec::new(), ops: Vec::new() };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let (code, comment) = match raw.find("//") {
            Some(p) => (&raw[..p], Some(&raw[p + 2..])),
            None => (raw, None),
        };
        if let Some(c) = comment {
            r.directive(line, c.trim())?;
        }
        for stmt in code.split(';') {
            r.statement(line, stmt)?;
        }
    }
    let mut flag = FlagPredicate::default();
    for (operand, bit) in &r.flag {
        let q = r.operand(0, operand)?;
        flag.require(q, *bit)?;
    }
    let mut circuit = Circuit::new(r.layout);
    circuit.ops = r.ops;
    circuit.set_flag(flag)?;
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_hadamard() {
        let mut l = RegisterLayout::new();
        l.add("q", 1, RegisterRole::Work).unwrap();
        let mut c = Circuit::new(l);
        c.gate(GateKind::H, 0).unwrap();
        let text = export_qasm(&c);
        assert_eq!(text.lines().filter(|l| l.starts_with("h ")).count(), 1);
        assert!(text.contains("h q[0];"));
        assert!(text.starts_with("OPENQASM 2.0;"));
    }

    #[test]
    fn angle_expressions() {
        assert_eq!(eval_angle("pi/2"), Some(std::f64::consts::FRAC_PI_2));
        assert_eq!(eval_angle("-(1.5e-1 + 2*pi)"), Some(-(0.15 + 2.0 * std::f64::consts::PI)));
        assert_eq!(eval_angle("1.04719755119659763e0"), Some(1.0471975511965976));
        assert_eq!(eval_angle("3e-7"), Some(3e-7));
        assert_eq!(eval_angle("pi pi"), None);
    }

    #[test]
    fn three_controlled_ry_lowering() {
        let mut l = RegisterLayout::new();
        l.add("c", 3, RegisterRole::Control).unwrap();
        l.add("t", 1, RegisterRole::Work).unwrap();
        let mut c = Circuit::new(l);
        c.controlled(GateKind::Ry(0.7), 3, vec![Control::on(0), Control::on(1), Control::on(2)]).unwrap();
        let text = export_qasm(&c);
        assert_eq!(text.lines().filter(|l| l.starts_with("ccx ")).count(), 4);
        assert_eq!(text.lines().filter(|l| l.starts_with("cry(")).count(), 1);
        assert!(text.contains("qreg anc[2];"));
    }

    #[test]
    fn rejects_unknown_gate() {
        let text = "OPENQASM 2.0;\nqreg q[1];\nu3(0,0,0) q[0];\n";
        assert!(matches!(parse_qasm(text), Err(QaaError::QasmParse { line: 3, .. })));
    }
}
