use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use qaa_core::sim::qasm::export_ancillas;
use qaa_core::sim::{
    export_qasm, parse_qasm, Circuit, Control, FlagPredicate, GateKind, GateOp, RegisterLayout, RegisterRole,
    Simulator, StateVector,
};
use qaa_core::QaaError;

const WIDTH: usize = 5;

fn kind() -> impl Strategy<Value = GateKind> {
    prop_oneof![
        Just(GateKind::H),
        Just(GateKind::X),
        Just(GateKind::Z),
        (-2.0 * PI..2.0 * PI).prop_map(GateKind::Ry),
        (-2.0 * PI..2.0 * PI).prop_map(GateKind::Rx),
    ]
}

/// Gate on `WIDTH` qubits with up to three distinct controls of either
/// polarity.
fn gate() -> impl Strategy<Value = GateOp> {
    (kind(), Just((0..WIDTH).collect::<Vec<_>>()).prop_shuffle(), 0..=3usize, prop::collection::vec(any::<bool>(), 3))
        .prop_map(|(k, order, nc, pol)| {
            let controls = (0..nc).map(|i| Control { qubit: order[i + 1], polarity: pol[i] }).collect();
            GateOp::controlled(k, order[0], controls)
        })
}

fn circuit(ops: Vec<GateOp>) -> Circuit {
    let mut layout = RegisterLayout::new();
    layout.add("data", 2, RegisterRole::Data).unwrap();
    let w = layout.add("work", WIDTH - 2, RegisterRole::Work).unwrap();
    let mut c = Circuit::new(layout);
    c.extend(ops).unwrap();
    c.set_flag(FlagPredicate::zeros(&w)).unwrap();
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gates_preserve_norm(ops in prop::collection::vec(gate(), 1..40), input in 0usize..1 << WIDTH) {
        let s = circuit(ops).run(input).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_undoes_circuit(ops in prop::collection::vec(gate(), 1..30), input in 0usize..1 << WIDTH) {
        let mut all = ops.clone();
        all.extend(ops.iter().rev().map(GateOp::inverse));
        let s = circuit(all).run(input).unwrap();
        prop_assert!((s.amplitude(input) - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn qasm_round_trip_preserves_flag(ops in prop::collection::vec(gate(), 1..30), data in 0usize..4) {
        let c = circuit(ops);
        let parsed = parse_qasm(&export_qasm(&c)).unwrap();
        let anc = export_ancillas(&c);
        let input = data << (WIDTH - 2);
        let a = c.flag_amplitude_for_input(input).unwrap();
        let b = parsed.flag_amplitude_for_input(input << anc).unwrap();
        prop_assert!((a - b).norm() < 1e-9, "{} vs {}", a, b);
    }

    /// The exported AND-ladder decomposition matches the native gate on
    /// every basis state with clean ancillas, and leaves them clean.
    #[test]
    fn decomposed_multi_control_matches_native(k in kind(), nc in 2..=4usize, pol in prop::collection::vec(any::<bool>(), 4)) {
        let mut layout = RegisterLayout::new();
        let q = layout.add("q", nc + 1, RegisterRole::Work).unwrap();
        let mut c = Circuit::new(layout);
        let controls = (0..nc).map(|i| Control { qubit: q[i + 1], polarity: pol[i] }).collect();
        c.push(GateOp::controlled(k, q[0], controls)).unwrap();
        let parsed = parse_qasm(&export_qasm(&c)).unwrap();
        let anc = export_ancillas(&c);
        for input in 0..1usize << (nc + 1) {
            let native = c.run(input).unwrap();
            let lowered = parsed.run(input << anc).unwrap();
            for (i, a) in native.amplitudes().iter().enumerate() {
                prop_assert!((lowered.amplitude(i << anc) - a).norm() < 1e-12);
            }
            let leaked: f64 = lowered.amplitudes().iter().enumerate()
                .filter(|(i, _)| i & ((1 << anc) - 1) != 0)
                .map(|(_, a)| a.norm_sqr()).sum();
            prop_assert!(leaked < 1e-20);
        }
    }

    #[test]
    fn gate_matrices_are_unitary(k in kind()) {
        let m = k.matrix();
        for r in 0..2 {
            for col in 0..2 {
                let dot: Complex64 = (0..2).map(|i| m[i][r].conj() * m[i][col]).sum();
                let want = if r == col { 1.0 } else { 0.0 };
                prop_assert!((dot - want).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn qubit_cap_is_enforced() {
    let sim = Simulator::with_max_qubits(40);
    assert_eq!(sim.max_qubits(), 28);
    assert!(matches!(StateVector::basis(30, 0, 40), Err(QaaError::TooManyQubits { .. })));

    let mut layout = RegisterLayout::new();
    layout.add("wide", 6, RegisterRole::Work).unwrap();
    let c = Circuit::new(layout);
    let small = Simulator::with_max_qubits(4);
    assert!(matches!(small.run(&c, 0), Err(QaaError::TooManyQubits { requested: 6, limit: 4 })));
}
