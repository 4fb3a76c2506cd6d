use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{extract_bits, BackendKind, QuantumState};
use crate::circuit::{GateApp, GateKind, Mat2};
use crate::error::SimError;

/// Largest state-vector width allowed by [`StateVector::new`] (2 GiB).
pub const DEFAULT_SV_CAP: usize = 27;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense `2^n` amplitude vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(n: usize) -> Result<Self, SimError> {
        Self::with_cap(n, DEFAULT_SV_CAP)
    }

    pub fn with_cap(n: usize, cap: usize) -> Result<Self, SimError> {
        if n > cap || n >= usize::BITS as usize - 5 {
            return Err(SimError::Capacity { qubits: n, cap });
        }
        let mut amps = vec![ZERO; 1usize << n];
        amps[0] = ONE;
        Ok(StateVector { n, amps })
    }

    /// Wraps an amplitude vector whose length is a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Self {
        assert!(amps.len().is_power_of_two());
        StateVector {
            n: amps.len().trailing_zeros() as usize,
            amps,
        }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// `(index, re, im)` for every amplitude; only for `n <= 20`.
    pub fn dump(&self) -> Option<Vec<(usize, f64, f64)>> {
        (self.n <= 20).then(|| self.amps.iter().enumerate().map(|(i, a)| (i, a.re, a.im)).collect())
    }

    /// Calls `f(i)` for every index whose `fixed` bits equal `value`.
    fn for_each_index(&self, fixed: &[usize], value: usize, mut f: impl FnMut(usize)) {
        let mut sorted = fixed.to_vec();
        sorted.sort_unstable();
        let free = self.n - sorted.len();
        for k in 0..(1usize << free) {
            let mut i = k;
            for &b in &sorted {
                let low = i & ((1 << b) - 1);
                i = ((i >> b) << (b + 1)) | low;
            }
            f(i | value);
        }
    }

    fn apply_matrix(&mut self, controls: &[(usize, bool)], t: usize, m: Mat2) {
        let mut fixed: Vec<usize> = controls.iter().map(|c| c.0).collect();
        fixed.push(t);
        let value = controls.iter().filter(|c| c.1).fold(0usize, |acc, c| acc | 1 << c.0);
        let tb = 1usize << t;
        let diagonal = m[0][1] == ZERO && m[1][0] == ZERO;
        let antidiagonal = m[0][0] == ZERO && m[1][1] == ZERO;
        let mut amps = std::mem::take(&mut self.amps);
        if diagonal && m[0][0] == ONE {
            let d = m[1][1];
            self.for_each_index(&fixed, value, |i| amps[i | tb] *= d);
        } else if antidiagonal && m[0][1] == ONE && m[1][0] == ONE {
            self.for_each_index(&fixed, value, |i| amps.swap(i, i | tb));
        } else {
            self.for_each_index(&fixed, value, |i| {
                let (a, b) = (amps[i], amps[i | tb]);
                amps[i] = m[0][0] * a + m[0][1] * b;
                amps[i | tb] = m[1][0] * a + m[1][1] * b;
            });
        }
        self.amps = amps;
    }

    fn apply_swap(&mut self, controls: &[(usize, bool)], a: usize, b: usize) {
        let mut fixed: Vec<usize> = controls.iter().map(|c| c.0).collect();
        fixed.extend([a, b]);
        let value = controls.iter().filter(|c| c.1).fold(0usize, |acc, c| acc | 1 << c.0);
        let (ab, bb) = (1usize << a, 1usize << b);
        let mut amps = std::mem::take(&mut self.amps);
        self.for_each_index(&fixed, value, |i| amps.swap(i | ab, i | bb));
        self.amps = amps;
    }
}

impl QuantumState for StateVector {
    fn backend(&self) -> BackendKind {
        BackendKind::Sv
    }

    fn num_qubits(&self) -> usize {
        self.n
    }

    fn apply(&mut self, gate: &GateApp) {
        let controls = gate.control_values();
        match gate.kind {
            GateKind::Swap | GateKind::ControlledSwap => self.apply_swap(&controls, gate.targets[0], gate.targets[1]),
            kind => self.apply_matrix(&controls, gate.targets[0], kind.target_matrix().unwrap()),
        }
    }

    fn amplitude(&self, index: u128) -> Complex64 {
        self.amps.get(index as usize).copied().unwrap_or(ZERO)
    }

    fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn marginal(&self, qubits: &[usize]) -> BTreeMap<u128, f64> {
        let mut out = BTreeMap::new();
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                *out.entry(extract_bits(i as u128, qubits)).or_insert(0.0) += p;
            }
        }
        out
    }

    fn probability(&self, assignment: &[(usize, bool)]) -> f64 {
        let mask = assignment.iter().fold(0usize, |acc, a| acc | 1 << a.0);
        let value = assignment.iter().filter(|a| a.1).fold(0usize, |acc, a| acc | 1 << a.0);
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == value)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }
}
