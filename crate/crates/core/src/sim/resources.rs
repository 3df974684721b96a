use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::circuit::Circuit;
use super::gate::{GateKind, GateOp};

/// Decomposition cost of multi-controlled gates.
///
/// A gate with `c >= 2` controls is rewritten as a ladder of Toffolis that
/// computes the AND of its controls into `c - 1` ancillas, one singly
/// controlled gate, and the mirror ladder: `2(c - 1)` Toffolis. An X with
/// `c >= 3` controls keeps its last AND inside a final Toffoli, so it costs
/// `2(c - 2) + 1`. A doubly-controlled X is a native Toffoli.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    /// Toffolis charged per AND step of the ladder (compute + uncompute).
    pub toffolis_per_and: usize,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel { toffolis_per_and: 2 }
    }
}

impl CostModel {
    pub fn toffolis(&self, op: &GateOp) -> usize {
        let c = op.controls.len();
        match (op.kind, c) {
            (_, 0 | 1) => 0,
            (GateKind::X, 2) => 1,
            (GateKind::X, c) => self.toffolis_per_and * (c - 2) + 1,
            (_, c) => self.toffolis_per_and * (c - 1),
        }
    }

    /// Ancillas needed to decompose `op`.
    pub fn ancillas(&self, op: &GateOp) -> usize {
        let c = op.controls.len();
        match (op.kind, c) {
            (_, 0 | 1) => 0,
            (GateKind::X, c) => c - 2,
            (_, c) => c - 1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    #[serde(rename = "1q")]
    pub one_qubit: usize,
    /// Singly-controlled gates.
    #[serde(rename = "2q")]
    pub two_qubit: usize,
    /// Native doubly-controlled X.
    pub toffoli: usize,
    /// Rotations (Ry/Rx) with k >= 2 controls, keyed by k.
    pub mc_rotation: BTreeMap<usize, usize>,
    /// Other gates with k >= 2 controls (X with k >= 3, Z, H), keyed by k.
    pub mc_other: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub total_qubits: usize,
    pub extra_qubits: usize,
    pub counts: GateCounts,
    /// Native Toffolis plus those produced by decomposing every
    /// multi-controlled gate under the cost model.
    pub toffoli_equivalent: usize,
    /// Singly-controlled gates remaining after decomposition.
    pub controlled_after_decomposition: usize,
    /// Ancillas the decomposition needs (shared across gates).
    pub decomposition_ancillas: usize,
}

impl ResourceReport {
    pub fn multi_controlled_rotations(&self) -> usize {
        self.counts.mc_rotation.values().sum()
    }
}

pub fn count_resources(circuit: &Circuit, model: &CostModel) -> ResourceReport {
    let mut counts = GateCounts::default();
    let mut toffoli_equivalent = 0;
    let mut controlled = 0;
    let mut ancillas = 0;
    for op in &circuit.ops {
        let k = op.controls.len();
        match (op.kind, k) {
            (_, 0) => counts.one_qubit += 1,
            (_, 1) => {
                counts.two_qubit += 1;
                controlled += 1;
            }
            (GateKind::X, 2) => counts.toffoli += 1,
            (kind, k) => {
                let bucket = if kind.is_rotation() { &mut counts.mc_rotation } else { &mut counts.mc_other };
                *bucket.entry(k).or_insert(0) += 1;
                if !matches!(kind, GateKind::X) {
                    controlled += 1;
                }
            }
        }
        toffoli_equivalent += model.toffolis(op);
        ancillas = ancillas.max(model.ancillas(op));
    }
    ResourceReport {
        total_qubits: circuit.layout.total_width(),
        extra_qubits: circuit.layout.extra_width(),
        counts,
        toffoli_equivalent,
        controlled_after_decomposition: controlled,
        decomposition_ancillas: ancillas,
    }
}
