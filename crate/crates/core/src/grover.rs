//! Threshold oracle, diffuser, iteration assembly and search drivers.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateApp, RegisterLayout, Role};
use crate::classical::candidate_distance;
use crate::distance::build_qshift_core;
use crate::encoder::{build_qrom, load_sequence, SequenceSet};
use crate::error::GroverError;
use crate::sim::{bitstring, new_state, run_circuit, BackendKind, QuantumState};

pub const SEARCH_SCHEMA: &str = "qshift.search.v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    /// Two fixed sequences; the search runs over shift and sign.
    Pairwise,
    /// `M` candidates; the search runs over `(i, j, k, sign)`.
    Multi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IterationPolicy {
    Fixed(usize),
    Bbht { seed: u64, max_rounds: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub mode: SearchMode,
    pub n: usize,
    pub m: usize,
    pub tau: usize,
    pub policy: IterationPolicy,
}

impl SearchSpec {
    pub fn pairwise(n: usize, tau: usize, policy: IterationPolicy) -> Self {
        SearchSpec {
            mode: SearchMode::Pairwise,
            n,
            m: 2,
            tau,
            policy,
        }
    }

    pub fn multi(n: usize, m: usize, tau: usize, policy: IterationPolicy) -> Self {
        SearchSpec {
            mode: SearchMode::Multi,
            n,
            m,
            tau,
            policy,
        }
    }

    pub fn validate(&self) -> Result<(), GroverError> {
        let bad = |msg: String| Err(GroverError::InvalidSpec(msg));
        if self.n == 0 {
            return bad("sequence length must be positive".into());
        }
        if self.tau == 0 || self.tau > self.n {
            return bad(format!("threshold {} outside 1..={}", self.tau, self.n));
        }
        match self.mode {
            SearchMode::Pairwise if self.m != 2 => bad("pairwise mode compares exactly 2 sequences".into()),
            SearchMode::Multi if self.m < 2 || !self.m.is_power_of_two() => {
                bad(format!("multi mode needs M >= 2 and a power of two, got {}", self.m))
            }
            _ => Ok(()),
        }
    }

    pub fn layout(&self) -> RegisterLayout {
        match self.mode {
            SearchMode::Pairwise => RegisterLayout::pairwise(self.n),
            SearchMode::Multi => RegisterLayout::multi(self.n, self.m),
        }
    }

    fn check_set(&self, set: &SequenceSet) -> Result<(), GroverError> {
        self.validate()?;
        if set.seq_len() != self.n || set.len() != self.m {
            return Err(GroverError::InvalidSpec(format!(
                "spec expects {} sequences of length {}, got {} of length {}",
                self.m,
                self.n,
                set.len(),
                set.seq_len()
            )));
        }
        Ok(())
    }
}

/// Decoded search-register value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SearchPoint {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub sign: bool,
}

/// Bit layout of search-register values: addrI, addrJ, shift, sign from the
/// least-significant end.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchEncoding {
    pub addr_bits: usize,
    pub shift_bits: usize,
    pub pairwise: bool,
}

impl SearchEncoding {
    pub fn of(layout: &RegisterLayout) -> Self {
        SearchEncoding {
            addr_bits: layout.reg(Role::AddrI).len,
            shift_bits: layout.reg(Role::Shift).len,
            pairwise: layout.get(Role::AddrI).is_none(),
        }
    }

    pub fn width(&self) -> usize {
        2 * self.addr_bits + self.shift_bits + 1
    }

    pub fn space(&self) -> u128 {
        1u128 << self.width()
    }

    pub fn decode(&self, v: u128) -> SearchPoint {
        let a = self.addr_bits;
        let mask = |bits: usize| (1u128 << bits) - 1;
        let (i, j) = if self.pairwise {
            (0, 1)
        } else {
            ((v & mask(a)) as usize, ((v >> a) & mask(a)) as usize)
        };
        SearchPoint {
            i,
            j,
            k: ((v >> (2 * a)) & mask(self.shift_bits)) as usize,
            sign: (v >> (2 * a + self.shift_bits)) & 1 == 1,
        }
    }

    pub fn encode(&self, p: SearchPoint) -> u128 {
        let a = self.addr_bits;
        let addr = if self.pairwise {
            0
        } else {
            p.i as u128 | (p.j as u128) << a
        };
        addr | (p.k as u128) << (2 * a) | (u128::from(p.sign)) << (2 * a + self.shift_bits)
    }
}

/// Phase flip on the phase qubit (held in |−⟩) for distance values `1..=tau`.
pub fn build_oracle(layout: &RegisterLayout, tau: usize) -> Result<Circuit, GroverError> {
    let dist = layout.reg(Role::Distance);
    let phase = layout
        .get(Role::Phase)
        .ok_or_else(|| GroverError::InvalidSpec("layout has no phase qubit".into()))?;
    if dist.len < usize::BITS as usize && tau >= (1usize << dist.len) {
        return Err(GroverError::InvalidSpec(format!(
            "threshold {tau} does not fit a {}-qubit distance register",
            dist.len
        )));
    }
    let controls: Vec<usize> = dist.qubits().collect();
    let mut c = Circuit::new(layout.clone());
    for v in 1..=tau {
        let negated: Vec<usize> = (0..dist.len)
            .filter(|b| (v >> b) & 1 == 0)
            .map(|b| dist.qubit(b))
            .collect();
        c.push(GateApp::mcx(&controls, phase.start).with_negated(&negated));
    }
    Ok(c)
}

/// Inversion about the mean over `qubits`.
pub fn build_diffuser(layout: &RegisterLayout, qubits: &[usize]) -> Circuit {
    let mut c = Circuit::new(layout.clone());
    if qubits.is_empty() {
        return c;
    }
    c.extend(qubits.iter().map(|&q| GateApp::h(q)));
    c.extend(qubits.iter().map(|&q| GateApp::x(q)));
    let (&last, rest) = qubits.split_last().unwrap();
    if rest.is_empty() {
        c.push(GateApp::phase(std::f64::consts::PI, last));
    } else {
        c.push(GateApp::mcz(rest, last));
    }
    c.extend(qubits.iter().map(|&q| GateApp::x(q)));
    c.extend(qubits.iter().map(|&q| GateApp::h(q)));
    c
}

/// Address-controlled loads of X (by addrI) and Y (by addrJ).
pub fn build_loads(layout: &RegisterLayout, set: &SequenceSet) -> Result<Circuit, GroverError> {
    let qrom = |addr, data| build_qrom(layout, set, layout.reg(addr), layout.reg(data));
    let mut c = qrom(Role::AddrI, Role::DataX).map_err(circuit_err)?;
    c.append(&qrom(Role::AddrJ, Role::DataY).map_err(circuit_err)?)
        .map_err(circuit_err)?;
    Ok(c)
}

fn circuit_err(e: crate::error::CircuitError) -> GroverError {
    GroverError::InvalidSpec(e.to_string())
}

/// Loads, core, oracle, core⁻¹, loads⁻¹, diffuser. Pairwise iterations skip
/// the loads; the driver loads both sequences once instead.
pub fn build_iteration(spec: &SearchSpec, set: &SequenceSet) -> Result<Circuit, GroverError> {
    spec.check_set(set)?;
    let layout = spec.layout();
    let core = build_qshift_core(&layout);
    let oracle = build_oracle(&layout, spec.tau)?;
    let diffuser = build_diffuser(&layout, &layout.search_qubits());
    let mut c = Circuit::new(layout.clone());
    let loads = match spec.mode {
        SearchMode::Multi => Some(build_loads(&layout, set)?),
        SearchMode::Pairwise => None,
    };
    let parts: Vec<Circuit> = [
        loads.clone(),
        Some(core.clone()),
        Some(oracle),
        Some(core.inverse()),
        loads.map(|l| l.inverse()),
        Some(diffuser),
    ]
    .into_iter()
    .flatten()
    .collect();
    for p in &parts {
        c.append(p).map_err(circuit_err)?;
    }
    Ok(c)
}

/// Full search circuit: preparation, `iterations` Grover iterations, and
/// clean-up of the phase qubit (and of the data, in pairwise mode).
pub fn build_grover_circuit(spec: &SearchSpec, set: &SequenceSet, iterations: usize) -> Result<Circuit, GroverError> {
    let iteration = build_iteration(spec, set)?;
    let layout = spec.layout();
    let phase = layout.reg(Role::Phase).start;
    let mut data = Circuit::new(layout.clone());
    if spec.mode == SearchMode::Pairwise {
        let x = load_sequence(&layout, &set.sequences()[0], layout.reg(Role::DataX)).map_err(circuit_err)?;
        let y = load_sequence(&layout, &set.sequences()[1], layout.reg(Role::DataY)).map_err(circuit_err)?;
        data.append(&x).map_err(circuit_err)?;
        data.append(&y).map_err(circuit_err)?;
    }
    let mut c = data.clone();
    c.push(GateApp::x(phase));
    c.push(GateApp::h(phase));
    for q in layout.search_qubits() {
        c.push(GateApp::h(q));
    }
    for _ in 0..iterations {
        c.append(&iteration).map_err(circuit_err)?;
    }
    c.push(GateApp::h(phase));
    c.push(GateApp::x(phase));
    c.append(&data.inverse()).map_err(circuit_err)?;
    Ok(c)
}

/// Classical distance of a search point.
pub fn point_distance(set: &SequenceSet, p: SearchPoint) -> usize {
    let s = set.sequences();
    candidate_distance(&s[p.i], &s[p.j], p.k, p.sign)
}

/// Search-register values whose distance lies in `1..=tau`.
pub fn solution_values(spec: &SearchSpec, set: &SequenceSet) -> BTreeSet<u128> {
    let enc = SearchEncoding::of(&spec.layout());
    (0..enc.space())
        .filter(|&v| (1..=spec.tau).contains(&point_distance(set, enc.decode(v))))
        .collect()
}

/// Iterations maximizing the success probability when `solutions` of
/// `space` values are marked: `floor(π / (4θ))` with `sin²θ = solutions / space`.
pub fn optimal_iterations(solutions: u128, space: u128) -> usize {
    if solutions == 0 || solutions >= space {
        return 0;
    }
    let theta = (solutions as f64 / space as f64).sqrt().asin();
    (std::f64::consts::PI / (4.0 * theta)).floor() as usize
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    /// Search-register value, most-significant bit first.
    pub bits: String,
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub sign: u8,
    pub count: usize,
    pub distance: usize,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub schema: String,
    pub mode: SearchMode,
    pub n: usize,
    pub m: usize,
    pub tau: usize,
    pub backend: BackendKind,
    pub shots: usize,
    /// Grover iterations per shot (fixed policy) or summed over all rounds
    /// (BBHT).
    pub iterations: usize,
    /// Iteration count of each BBHT round.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rounds: Option<Vec<usize>>,
    pub outcomes: Vec<Outcome>,
}

impl SearchResult {
    pub fn verified(&self) -> impl Iterator<Item = &Outcome> {
        self.outcomes.iter().filter(|o| o.verified)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub backend: BackendKind,
    pub shots: usize,
    pub seed: u64,
    pub deadline: Option<Instant>,
}

fn outcomes(spec: &SearchSpec, set: &SequenceSet, counts: &BTreeMap<u128, usize>) -> Vec<Outcome> {
    let enc = SearchEncoding::of(&spec.layout());
    let mut out: Vec<Outcome> = counts
        .iter()
        .map(|(&v, &count)| {
            let p = enc.decode(v);
            let d = point_distance(set, p);
            Outcome {
                bits: bitstring(v, enc.width()),
                i: p.i,
                j: p.j,
                k: p.k,
                sign: u8::from(p.sign),
                count,
                distance: d,
                verified: (1..=spec.tau).contains(&d),
            }
        })
        .collect();
    out.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.bits.cmp(&b.bits)));
    out
}

/// Simulates the search circuit with `iterations` and returns the final state.
pub fn simulate_search(
    spec: &SearchSpec,
    set: &SequenceSet,
    iterations: usize,
    backend: BackendKind,
    deadline: Option<Instant>,
) -> Result<Box<dyn QuantumState>, GroverError> {
    let c = build_grover_circuit(spec, set, iterations)?;
    let mut state = new_state(backend, c.width())?;
    run_circuit(state.as_mut(), &c, deadline)?;
    Ok(state)
}

/// Runs the search under the spec's iteration policy.
pub fn run_grover(spec: &SearchSpec, set: &SequenceSet, opts: RunOptions) -> Result<SearchResult, GroverError> {
    spec.check_set(set)?;
    let r = match spec.policy {
        IterationPolicy::Fixed(r) => r,
        IterationPolicy::Bbht { seed, max_rounds } => {
            return bbht_search(spec, set, opts.backend, seed, max_rounds, opts.deadline)
        }
    };
    let state = simulate_search(spec, set, r, opts.backend, opts.deadline)?;
    let qubits = spec.layout().search_qubits();
    let counts = state.sample(&qubits, opts.shots, opts.seed);
    Ok(SearchResult {
        schema: SEARCH_SCHEMA.into(),
        mode: spec.mode,
        n: spec.n,
        m: spec.m,
        tau: spec.tau,
        backend: opts.backend,
        shots: opts.shots,
        iterations: r,
        rounds: None,
        outcomes: outcomes(spec, set, &counts),
    })
}

/// Randomized schedule for an unknown number of solutions: in round `t`, run
/// `j ~ U[0, ceil(m))` iterations and measure once; on failure grow
/// `m ← min(6m/5, sqrt(space))`.
pub fn bbht_search(
    spec: &SearchSpec,
    set: &SequenceSet,
    backend: BackendKind,
    seed: u64,
    max_rounds: usize,
    deadline: Option<Instant>,
) -> Result<SearchResult, GroverError> {
    spec.check_set(set)?;
    let layout = spec.layout();
    let enc = SearchEncoding::of(&layout);
    let qubits = layout.search_qubits();
    let cap = (enc.space() as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = 1.0f64;
    let mut rounds = Vec::new();
    let mut states: HashMap<usize, Box<dyn QuantumState>> = HashMap::new();
    for _ in 0..max_rounds {
        let j = rng.gen_range(0..m.ceil() as usize);
        rounds.push(j);
        let state = match states.entry(j) {
            Entry::Occupied(e) => e.into_mut(),
            Entry::Vacant(e) => e.insert(simulate_search(spec, set, j, backend, deadline)?),
        };
        let counts = state.sample(&qubits, 1, rng.gen());
        let found = outcomes(spec, set, &counts);
        if found.iter().any(|o| o.verified) {
            return Ok(SearchResult {
                schema: SEARCH_SCHEMA.into(),
                mode: spec.mode,
                n: spec.n,
                m: spec.m,
                tau: spec.tau,
                backend,
                shots: rounds.len(),
                iterations: rounds.iter().sum(),
                rounds: Some(rounds),
                outcomes: found,
            });
        }
        m = (m * 6.0 / 5.0).min(cap);
    }
    Err(GroverError::Exhausted { rounds: max_rounds })
}

/// Probability mass on the solution values of the search register.
pub fn marked_mass(state: &dyn QuantumState, spec: &SearchSpec, set: &SequenceSet) -> f64 {
    let sols = solution_values(spec, set);
    state
        .marginal(&spec.layout().search_qubits())
        .into_iter()
        .filter(|(v, _)| sols.contains(v))
        .map(|(_, p)| p)
        .sum()
}

/// Probability that every non-search qubit reads 0.
pub fn clean_probability(state: &dyn QuantumState, layout: &RegisterLayout) -> f64 {
    let zeros: Vec<(usize, bool)> = layout.non_search_qubits().into_iter().map(|q| (q, false)).collect();
    state.probability(&zeros)
}
