use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Circuit, GateKind, McxMode, Role};

/// Gate and depth statistics of one circuit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub qubits: usize,
    pub depth: usize,
    pub total_gates: usize,
    /// Gate counts keyed by kind name (`U`, `CX`, `MCX`, ...).
    pub per_kind: BTreeMap<String, usize>,
    /// `u_cx`, `u_cx_mcx`, or `logical` for untranspiled circuits.
    pub basis: String,
    pub mcx_mode: McxMode,
}

impl ResourceReport {
    pub fn count(&self, kind: &str) -> usize {
        self.per_kind.get(kind).copied().unwrap_or(0)
    }
}

/// ASAP depth: a gate is placed one layer above the latest gate it shares a
/// qubit with.
pub fn depth(c: &Circuit) -> usize {
    let mut level = vec![0usize; c.width()];
    let mut max = 0;
    for g in c.gates() {
        let l = g.qubits().map(|q| level[q]).max().unwrap_or(0) + 1;
        for q in g.qubits() {
            level[q] = l;
        }
        max = max.max(l);
    }
    max
}

pub fn count_resources(c: &Circuit) -> ResourceReport {
    let mut per_kind = BTreeMap::new();
    for g in c.gates() {
        *per_kind.entry(g.kind.name().to_string()).or_insert(0) += 1;
    }
    let lowered = c
        .gates()
        .iter()
        .all(|g| matches!(g.kind, GateKind::U { .. } | GateKind::ControlledX) && g.negated.is_empty());
    let lowered_mcx = c.gates().iter().all(|g| {
        matches!(
            g.kind,
            GateKind::U { .. } | GateKind::ControlledX | GateKind::MultiControlledX | GateKind::MultiControlledZ
        ) && g.negated.is_empty()
    });
    let basis = if lowered {
        "u_cx"
    } else if lowered_mcx {
        "u_cx_mcx"
    } else {
        "logical"
    };
    ResourceReport {
        qubits: c.width(),
        depth: depth(c),
        total_gates: c.len(),
        per_kind,
        basis: basis.to_string(),
        mcx_mode: if c.layout().reg(Role::Ancilla).len > c.layout().base_ancillas() {
            McxMode::WithAncilla
        } else {
            McxMode::NoAncilla
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateApp;

    #[test]
    fn empty_circuit_has_zero_depth() {
        let r = count_resources(&Circuit::with_width(3));
        assert_eq!((r.depth, r.total_gates), (0, 0));
        assert!(r.per_kind.is_empty());
    }

    #[test]
    fn disjoint_gates_share_a_layer() {
        let mut c = Circuit::with_width(2);
        c.push(GateApp::x(0));
        c.push(GateApp::x(1));
        assert_eq!(depth(&c), 1);
    }

    #[test]
    fn chains_and_controls() {
        let mut c = Circuit::with_width(4);
        for _ in 0..5 {
            c.push(GateApp::h(0));
            c.push(GateApp::h(1));
        }
        assert_eq!(depth(&c), 5);
        // controls count as conflicts
        c.push(GateApp::cx(0, 2));
        c.push(GateApp::x(0));
        assert_eq!(depth(&c), 7);
        let r = count_resources(&c);
        assert_eq!(r.total_gates, r.per_kind.values().sum::<usize>());
        assert_eq!(r.count("H"), 10);
        assert_eq!(r.basis, "logical");
    }
}
