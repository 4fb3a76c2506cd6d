//! Simulation backends behind one interface.
//!
//! Basis-state indices are `u128` with qubit 0 as the least-significant bit.
//! Outcome values built from a qubit list use the list order, first qubit as
//! bit 0.

pub mod dd;
pub mod sv;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use dd::{DdState, DdStats};
pub use sv::{StateVector, DEFAULT_SV_CAP};

use crate::circuit::{Circuit, GateApp};
use crate::error::SimError;

/// Outcome value → number of shots.
pub type Counts = BTreeMap<u128, usize>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Sv,
    Dd,
}

impl BackendKind {
    pub fn name(&self) -> &'static str {
        match self {
            BackendKind::Sv => "sv",
            BackendKind::Dd => "dd",
        }
    }
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BackendKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sv" => Ok(BackendKind::Sv),
            "dd" => Ok(BackendKind::Dd),
            other => Err(format!("unknown backend `{other}` (expected sv or dd)")),
        }
    }
}

pub trait QuantumState {
    fn backend(&self) -> BackendKind;

    fn num_qubits(&self) -> usize;

    fn apply(&mut self, gate: &GateApp);

    fn amplitude(&self, index: u128) -> Complex64;

    fn norm_sqr(&self) -> f64;

    /// Probability of every nonzero outcome of `qubits`.
    fn marginal(&self, qubits: &[usize]) -> BTreeMap<u128, f64>;

    /// Probability that each listed qubit has the given value.
    fn probability(&self, assignment: &[(usize, bool)]) -> f64;

    /// `shots` seeded samples of the outcome of `qubits`.
    fn sample(&self, qubits: &[usize], shots: usize, seed: u64) -> Counts {
        sample_from(&self.marginal(qubits), shots, seed)
    }

    /// Backend statistics, if the backend keeps any.
    fn dd_stats(&self) -> Option<DdStats> {
        None
    }
}

/// Seeded categorical sampling from an outcome distribution.
pub fn sample_from(dist: &BTreeMap<u128, f64>, shots: usize, seed: u64) -> Counts {
    let mut counts = Counts::new();
    if shots == 0 || dist.is_empty() {
        return counts;
    }
    let keys: Vec<u128> = dist.keys().copied().collect();
    let weights = WeightedIndex::new(dist.values().map(|p| p.max(0.0))).expect("distribution has positive mass");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..shots {
        *counts.entry(keys[weights.sample(&mut rng)]).or_insert(0) += 1;
    }
    counts
}

/// Fresh |0…0⟩ state on the chosen backend.
pub fn new_state(kind: BackendKind, n: usize) -> Result<Box<dyn QuantumState>, SimError> {
    Ok(match kind {
        BackendKind::Sv => Box::new(StateVector::new(n)?),
        BackendKind::Dd => Box::new(DdState::new(n)),
    })
}

/// Applies every gate of `c`, checking `deadline` between gates.
pub fn run_circuit(state: &mut dyn QuantumState, c: &Circuit, deadline: Option<Instant>) -> Result<(), SimError> {
    if c.width() != state.num_qubits() {
        return Err(SimError::WidthMismatch {
            circuit: c.width(),
            state: state.num_qubits(),
        });
    }
    for g in c.gates() {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(SimError::Timeout);
        }
        state.apply(g);
    }
    Ok(())
}

/// Outcome value of `qubits` within basis index `index`.
pub fn extract_bits(index: u128, qubits: &[usize]) -> u128 {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &q)| acc | ((index >> q) & 1) << i)
}

/// `value` printed most-significant bit first, `width` characters.
pub fn bitstring(value: u128, width: usize) -> String {
    (0..width)
        .rev()
        .map(|b| if (value >> b) & 1 == 1 { '1' } else { '0' })
        .collect()
}
