//! Symbol comparison and QFT-adder popcount into the distance register.

use std::f64::consts::PI;

use crate::circuit::{Circuit, GateApp, QubitRange, RegisterLayout, Role, COMPARE_ANCILLAS};
use crate::shifter::build_controlled_shift;

/// Mismatch bit per symbol position. Uses the scratch pair when the layout
/// carries one, otherwise XORs in place into Y.
pub fn build_compare(layout: &RegisterLayout) -> Circuit {
    if layout.base_ancillas() >= COMPARE_ANCILLAS {
        compare_with_scratch(layout)
    } else {
        compare_in_place(layout)
    }
}

/// Per symbol: XOR X's code into Y's slot, OR the two XOR bits into the
/// mismatch qubit, then restore Y.
fn compare_in_place(layout: &RegisterLayout) -> Circuit {
    let x = layout.reg(Role::DataX);
    let y = layout.reg(Role::DataY);
    let mis = layout.reg(Role::Mismatch);
    let mut c = Circuit::new(layout.clone());
    for j in 0..mis.len {
        let (x0, x1) = (x.qubit(2 * j), x.qubit(2 * j + 1));
        let (y0, y1) = (y.qubit(2 * j), y.qubit(2 * j + 1));
        let m = mis.qubit(j);
        c.push(GateApp::cx(x0, y0));
        c.push(GateApp::cx(x1, y1));
        c.push(GateApp::ccx(y0, y1, m).with_negated(&[y0, y1]));
        c.push(GateApp::x(m));
        c.push(GateApp::cx(x1, y1));
        c.push(GateApp::cx(x0, y0));
    }
    c
}

/// Per symbol: XOR both codes into the shared scratch pair, OR the pair into
/// the mismatch qubit, then clear the scratch.
fn compare_with_scratch(layout: &RegisterLayout) -> Circuit {
    let x = layout.reg(Role::DataX);
    let y = layout.reg(Role::DataY);
    let mis = layout.reg(Role::Mismatch);
    let anc = layout.reg(Role::Ancilla);
    let (a0, a1) = (anc.qubit(0), anc.qubit(1));
    let mut c = Circuit::new(layout.clone());
    for j in 0..mis.len {
        let xor = [
            GateApp::cx(x.qubit(2 * j), a0),
            GateApp::cx(y.qubit(2 * j), a0),
            GateApp::cx(x.qubit(2 * j + 1), a1),
            GateApp::cx(y.qubit(2 * j + 1), a1),
        ];
        let m = mis.qubit(j);
        c.extend(xor.iter().cloned());
        c.push(GateApp::ccx(a0, a1, m).with_negated(&[a0, a1]));
        c.push(GateApp::x(m));
        c.extend(xor.into_iter().rev());
    }
    c
}

/// QFT without the final bit reversal: afterwards qubit `j` carries phase
/// `2π·v / 2^(j+1)` for register value `v`.
pub fn qft(layout: &RegisterLayout, reg: QubitRange) -> Circuit {
    let mut c = Circuit::new(layout.clone());
    for j in (0..reg.len).rev() {
        c.push(GateApp::h(reg.qubit(j)));
        for m in (0..j).rev() {
            c.push(GateApp::cphase(
                PI / (1u64 << (j - m)) as f64,
                reg.qubit(m),
                reg.qubit(j),
            ));
        }
    }
    c
}

/// Distance register ← popcount(mismatch) mod 2^d.
pub fn build_qft_adder(layout: &RegisterLayout) -> Circuit {
    let dist = layout.reg(Role::Distance);
    let mis = layout.reg(Role::Mismatch);
    let forward = qft(layout, dist);
    let mut c = forward.clone();
    for m in mis.qubits() {
        for l in 0..dist.len {
            c.push(GateApp::cphase(PI / (1u64 << l) as f64, m, dist.qubit(l)));
        }
    }
    c.append(&forward.inverse()).expect("same layout");
    c
}

/// Controlled shift, compare, and adder.
pub fn build_qshift_core(layout: &RegisterLayout) -> Circuit {
    let mut c = build_controlled_shift(layout);
    c.append(&build_compare(layout)).expect("same layout");
    c.append(&build_qft_adder(layout)).expect("same layout");
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{count_resources, transpile, Basis, McxMode};

    #[test]
    fn compare_gates_per_symbol() {
        assert_eq!(build_compare(&RegisterLayout::pairwise(5)).len(), 30);
        assert_eq!(build_compare(&RegisterLayout::multi(5, 2)).len(), 50);
    }

    #[test]
    fn compare_serializes_on_the_scratch_pair() {
        for n in [4, 8] {
            let r = count_resources(&build_compare(&RegisterLayout::multi(n, 4)));
            assert_eq!(r.depth, 5 * n);
            let r = count_resources(&build_compare(&RegisterLayout::pairwise(n)));
            assert_eq!(r.depth, 3);
        }
    }

    #[test]
    fn adder_transpiled_size() {
        let l = RegisterLayout::pairwise(4);
        let t = transpile(&build_qft_adder(&l), Basis::UCx, McxMode::NoAncilla);
        assert_eq!(count_resources(&t).total_gates, 96);
    }

    #[test]
    fn core_is_concatenation() {
        let l = RegisterLayout::multi(4, 4);
        let core = build_qshift_core(&l);
        let parts = build_controlled_shift(&l).len() + build_compare(&l).len() + build_qft_adder(&l).len();
        assert_eq!(core.len(), parts);
    }
}
