//! Controlled cyclic shift of one data register.
//!
//! Rotation convention: shifting by `k` moves the symbol at position `p` to
//! position `(p + k) mod N`. With sign `b = 0` dataY is rotated; with
//! `b = 1` the registers are exchanged around the barrel shifter so that
//! dataX is rotated instead.

use crate::circuit::{Circuit, GateApp, QubitRange, RegisterLayout, Role};

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Qubit transpositions rotating the `2N`-qubit register `target` by
/// `2^t mod N` symbols.
///
/// Each bit plane is split into `gcd(N, r)` cycles, and each cycle of length
/// `L` is rotated by a chain of `L - 1` adjacent transpositions.
pub fn stage_swaps(t: usize, target: QubitRange) -> Vec<(usize, usize)> {
    assert!(target.len % 2 == 0, "data register must hold whole symbols");
    let n = target.len / 2;
    if n == 0 {
        return Vec::new();
    }
    let r = if t >= usize::BITS as usize {
        0
    } else {
        (1usize << t) % n
    };
    if r == 0 {
        return Vec::new();
    }
    let g = gcd(n, r);
    let cycle_len = n / g;
    let mut swaps = Vec::with_capacity(2 * (n - g));
    for plane in 0..2 {
        for start in 0..g {
            let pos = |m: usize| target.qubit(2 * ((start + m * r) % n) + plane);
            for m in (0..cycle_len - 1).rev() {
                swaps.push((pos(m), pos(m + 1)));
            }
        }
    }
    swaps
}

/// Uncontrolled stage `t` as a circuit of SWAP gates.
pub fn stage_swap_network(layout: &RegisterLayout, t: usize, target: QubitRange) -> Circuit {
    let mut c = Circuit::new(layout.clone());
    c.extend(stage_swaps(t, target).into_iter().map(|(a, b)| GateApp::swap(a, b)));
    c
}

/// Barrel shifter driven by the shift register, bracketed by sign-controlled
/// register exchanges.
pub fn build_controlled_shift(layout: &RegisterLayout) -> Circuit {
    let x = layout.reg(Role::DataX);
    let y = layout.reg(Role::DataY);
    let shift = layout.reg(Role::Shift);
    let sign = layout.get(Role::Sign);
    let mut c = Circuit::new(layout.clone());
    let exchange = |c: &mut Circuit| {
        if let Some(b) = sign {
            for (qx, qy) in x.qubits().zip(y.qubits()) {
                c.push(GateApp::cswap(b.start, qx, qy));
            }
        }
    };
    exchange(&mut c);
    for t in 0..shift.len {
        let ctrl = shift.qubit(t);
        c.extend(stage_swaps(t, y).into_iter().map(|(a, b)| GateApp::cswap(ctrl, a, b)));
    }
    exchange(&mut c);
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Applies a transposition list to a symbol vector (classically).
    fn permute(symbols: &[u8], swaps: &[(usize, usize)]) -> Vec<u8> {
        let mut bits: Vec<u8> = symbols.iter().flat_map(|s| [s & 1, s >> 1]).collect();
        for &(a, b) in swaps {
            bits.swap(a, b);
        }
        bits.chunks(2).map(|c| c[0] | c[1] << 1).collect()
    }

    fn rotated(symbols: &[u8], k: usize) -> Vec<u8> {
        let n = symbols.len();
        (0..n).map(|p| symbols[(p + n - k % n) % n]).collect()
    }

    #[test]
    fn smallest_stage_rotates_by_one_symbol() {
        let swaps = stage_swaps(0, QubitRange::new(0, 4));
        assert_eq!(swaps.len(), 2);
        assert_eq!(permute(&[1, 2], &swaps), vec![2, 1]);
    }

    #[test]
    fn each_stage_rotates_by_power_of_two() {
        for n in 1..=16usize {
            let data: Vec<u8> = (0..n).map(|i| (i * 7 % 4) as u8).collect();
            let reg = QubitRange::new(0, 2 * n);
            for t in 0..5 {
                let got = permute(&data, &stage_swaps(t, reg));
                assert_eq!(got, rotated(&data, (1 << t) % n), "n={n} t={t}");
            }
        }
    }

    #[test]
    fn stage_has_order_n_over_gcd() {
        let n = 8;
        let reg = QubitRange::new(0, 2 * n);
        let data: Vec<u8> = vec![0, 1, 2, 3, 3, 2, 1, 0];
        for t in 0..3 {
            let order = n >> t;
            let mut cur = data.clone();
            for step in 1..=order {
                cur = permute(&cur, &stage_swaps(t, reg));
                assert_eq!(cur == data, step == order);
            }
        }
    }

    #[test]
    fn swap_count_is_n_minus_gcd_per_plane() {
        let reg = QubitRange::new(0, 16);
        assert_eq!(stage_swaps(0, reg).len(), 14);
        assert_eq!(stage_swaps(1, reg).len(), 12);
        assert_eq!(stage_swaps(2, reg).len(), 8);
    }

    #[test]
    fn controlled_shift_gate_budget() {
        for n in [2usize, 3, 4, 5, 8, 16] {
            let l = RegisterLayout::pairwise(n);
            let c = build_controlled_shift(&l);
            let s = l.reg(Role::Shift).len;
            let stage_total = c.len() - 2 * 2 * n;
            assert!(stage_total <= 2 * (2 * n) * s, "n={n}");
            assert!(c.len() <= 2 * 2 * (2 * n) * s.max(1), "n={n}");
            assert!(c
                .gates()
                .iter()
                .all(|g| g.kind == crate::circuit::GateKind::ControlledSwap));
        }
    }
}
