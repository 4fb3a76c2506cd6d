//! Test oracles that share no code with the simulators.
#![allow(dead_code)]

use num_complex::Complex64;
use proptest::prelude::*;
use qshift_core::circuit::{Circuit, GateApp, GateKind};

pub type Matrix = Vec<Vec<Complex64>>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Textbook 2x2 matrix of a gate kind, written out independently of
/// `GateKind::target_matrix`.
fn local(kind: &GateKind) -> [[Complex64; 2]; 2] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match *kind {
        GateKind::PauliX | GateKind::ControlledX | GateKind::Toffoli | GateKind::MultiControlledX => {
            [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]
        }
        GateKind::Hadamard => [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]],
        GateKind::Phase(a) | GateKind::ControlledPhase(a) => {
            [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(a.cos(), a.sin())]]
        }
        GateKind::MultiControlledZ => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
        GateKind::U { theta, phi, lambda } => {
            let (ct, st) = ((theta / 2.0).cos(), (theta / 2.0).sin());
            [
                [c(ct, 0.0), -Complex64::from_polar(st, lambda)],
                [Complex64::from_polar(st, phi), Complex64::from_polar(ct, phi + lambda)],
            ]
        }
        GateKind::Swap | GateKind::ControlledSwap => unreachable!(),
    }
}

fn controls_ok(g: &GateApp, col: usize) -> bool {
    g.controls
        .iter()
        .all(|&q| ((col >> q) & 1 == 1) != g.negated.contains(&q))
}

/// Full `2^n x 2^n` unitary of one gate, built column by column.
pub fn gate_matrix(g: &GateApp, n: usize) -> Matrix {
    let dim = 1usize << n;
    let mut m = vec![vec![c(0.0, 0.0); dim]; dim];
    for col in 0..dim {
        if !controls_ok(g, col) {
            m[col][col] = c(1.0, 0.0);
            continue;
        }
        match g.kind {
            GateKind::Swap | GateKind::ControlledSwap => {
                let (a, b) = (g.targets[0], g.targets[1]);
                let (ba, bb) = ((col >> a) & 1, (col >> b) & 1);
                let row = (col & !(1 << a) & !(1 << b)) | (bb << a) | (ba << b);
                m[row][col] = c(1.0, 0.0);
            }
            ref kind => {
                let t = g.targets[0];
                let u = local(kind);
                let bit = (col >> t) & 1;
                for out in 0..2 {
                    let row = (col & !(1 << t)) | (out << t);
                    m[row][col] += u[out][bit];
                }
            }
        }
    }
    m
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == c(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn identity(dim: usize) -> Matrix {
    (0..dim)
        .map(|i| (0..dim).map(|j| c(f64::from(u8::from(i == j)), 0.0)).collect())
        .collect()
}

/// Unitary of a whole circuit.
pub fn circuit_matrix(circ: &Circuit) -> Matrix {
    let n = circ.width();
    circ.gates()
        .iter()
        .fold(identity(1 << n), |acc, g| matmul(&gate_matrix(g, n), &acc))
}

/// Matrix-vector product.
pub fn apply_matrix(m: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Maximum entry distance between `a` and `b` after removing a global phase
/// fixed by the largest entry of `a`.
pub fn max_diff_up_to_phase(a: &Matrix, b: &Matrix) -> f64 {
    let (mut bi, mut bj, mut best) = (0, 0, 0.0);
    for (i, row) in a.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if x.norm() > best {
                (bi, bj, best) = (i, j, x.norm());
            }
        }
    }
    let phase = b[bi][bj] / a[bi][bj];
    let phase = phase / phase.norm();
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x * phase - y).norm())
        .fold(0.0, f64::max)
}

/// Basis-state evaluation for circuits made of permutation gates only.
/// Returns `None` if the circuit contains a gate that is not a permutation.
pub fn eval_basis(circ: &Circuit, mut x: u128) -> Option<u128> {
    for g in circ.gates() {
        let fire = g
            .controls
            .iter()
            .all(|&q| ((x >> q) & 1 == 1) != g.negated.contains(&q));
        match g.kind {
            GateKind::PauliX | GateKind::ControlledX | GateKind::Toffoli | GateKind::MultiControlledX => {
                if fire {
                    x ^= 1 << g.targets[0];
                }
            }
            GateKind::Swap | GateKind::ControlledSwap => {
                let (a, b) = (g.targets[0], g.targets[1]);
                if fire && ((x >> a) & 1) != ((x >> b) & 1) {
                    x ^= (1 << a) | (1 << b);
                }
            }
            _ => return None,
        }
    }
    Some(x)
}

/// Register value from a qubit range within a basis index.
pub fn read(x: u128, start: usize, len: usize) -> u128 {
    (x >> start) & ((1u128 << len) - 1)
}

pub fn write(x: u128, start: usize, len: usize, v: u128) -> u128 {
    let mask = ((1u128 << len) - 1) << start;
    (x & !mask) | ((v << start) & mask)
}

/// Random gate on `n` qubits covering every gate kind.
pub fn arb_gate(n: usize) -> impl Strategy<Value = GateApp> {
    let angle = -6.3f64..6.3;
    (
        0usize..11,
        proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 3.min(n)..=5.min(n)),
        proptest::collection::vec(angle, 3),
        any::<u8>(),
    )
        .prop_map(move |(kind, mut qs, a, negmask)| {
            // shuffle deterministically from negmask so targets vary
            let len = qs.len();
            qs.rotate_left(negmask as usize % len);
            let t = qs[0];
            let g = match kind {
                0 => GateApp::x(t),
                1 => GateApp::h(t),
                2 => GateApp::u(a[0], a[1], a[2], t),
                3 => GateApp::phase(a[0], t),
                4 => GateApp::cx(qs[1], t),
                5 => GateApp::ccx(qs[1], qs[2], t),
                6 => GateApp::mcx(&qs[1..], t),
                7 => GateApp::swap(t, qs[1]),
                8 => GateApp::cswap(qs[2], t, qs[1]),
                9 => GateApp::cphase(a[0], qs[1], t),
                _ => GateApp::mcz(&qs[1..], t),
            };
            let negated: Vec<usize> = g
                .controls
                .iter()
                .enumerate()
                .filter(|(i, _)| (negmask >> i) & 1 == 1)
                .map(|(_, &q)| q)
                .collect();
            g.with_negated(&negated)
        })
}

pub fn arb_circuit(n: usize, max_gates: usize) -> impl Strategy<Value = Circuit> {
    proptest::collection::vec(arb_gate(n), 0..=max_gates).prop_map(move |gates| {
        let mut circ = Circuit::with_width(n);
        circ.extend(gates);
        circ
    })
}

/// Random normalized state of `n` qubits from a seed.
pub fn random_state(n: usize, seed: u64) -> Vec<Complex64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let v: Vec<Complex64> = (0..1 << n)
        .map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / norm).collect()
}
