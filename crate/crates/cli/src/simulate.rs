//! Running serialized circuits.

use std::collections::BTreeMap;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use qshift_core::circuit::{parse_circuit, Circuit, QubitRange, Role};
use qshift_core::sim::{bitstring, extract_bits, new_state, run_circuit, BackendKind, DdStats};
use serde::{Deserialize, Serialize};

use crate::{deadline, emit, SimulateArgs};

pub const SCHEMA: &str = "qshift.simulate.v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimOutcome {
    /// Measured qubits, last one first.
    pub bits: String,
    pub count: usize,
    /// Value of every fully measured register.
    pub registers: BTreeMap<String, u128>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub schema: String,
    pub backend: BackendKind,
    pub qubits: usize,
    pub gates: usize,
    pub shots: usize,
    pub seed: u64,
    pub measured: Vec<String>,
    pub outcomes: Vec<SimOutcome>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dd_stats: Option<DdStats>,
}

fn role_by_name(name: &str) -> Option<Role> {
    Role::ALL.into_iter().find(|r| r.name() == name)
}

/// Registers to measure, in order.
pub fn measured_registers(c: &Circuit, spec: &str) -> Result<Vec<(String, QubitRange)>> {
    let l = c.layout();
    let all = || {
        let regs: Vec<_> = l
            .registers()
            .iter()
            .filter(|(_, r)| !r.is_empty())
            .map(|(role, r)| (role.name().to_string(), *r))
            .collect();
        if regs.is_empty() {
            vec![("all".to_string(), QubitRange::new(0, c.width()))]
        } else {
            regs
        }
    };
    Ok(match spec {
        "all" => all(),
        "search" => {
            let regs: Vec<_> = l
                .search_registers()
                .into_iter()
                .filter(|(_, r)| !r.is_empty())
                .map(|(role, r)| (role.name().to_string(), r))
                .collect();
            if regs.is_empty() {
                all()
            } else {
                regs
            }
        }
        list => list
            .split(',')
            .map(|name| {
                let name = name.trim();
                let role = role_by_name(name).with_context(|| format!("unknown register `{name}`"))?;
                let r = l
                    .get(role)
                    .with_context(|| format!("circuit has no `{name}` register"))?;
                Ok((name.to_string(), r))
            })
            .collect::<Result<_>>()?,
    })
}

pub fn simulate(
    c: &Circuit,
    backend: BackendKind,
    shots: usize,
    seed: u64,
    measure: &str,
    limit: Option<Instant>,
) -> Result<SimReport> {
    let regs = measured_registers(c, measure)?;
    let qubits: Vec<usize> = regs.iter().flat_map(|(_, r)| r.qubits()).collect();
    let mut state = new_state(backend, c.width())?;
    run_circuit(state.as_mut(), c, limit)?;
    let counts = state.sample(&qubits, shots, seed);
    let mut outcomes: Vec<SimOutcome> = counts
        .into_iter()
        .map(|(v, count)| {
            let mut registers = BTreeMap::new();
            let mut offset = 0;
            for (name, r) in &regs {
                let bits: Vec<usize> = (offset..offset + r.len).collect();
                registers.insert(name.clone(), extract_bits(v, &bits));
                offset += r.len;
            }
            SimOutcome {
                bits: bitstring(v, qubits.len()),
                count,
                registers,
            }
        })
        .collect();
    outcomes.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.bits.cmp(&b.bits)));
    Ok(SimReport {
        schema: SCHEMA.into(),
        backend,
        qubits: c.width(),
        gates: c.len(),
        shots,
        seed,
        measured: regs.into_iter().map(|(n, _)| n).collect(),
        outcomes,
        dd_stats: state.dd_stats(),
    })
}

pub fn cmd(a: &SimulateArgs) -> Result<()> {
    let text = std::fs::read_to_string(&a.circuit).with_context(|| format!("reading {}", a.circuit.display()))?;
    let c = parse_circuit(&text).with_context(|| format!("parsing {}", a.circuit.display()))?;
    if a.shots == 0 {
        bail!("--shots must be positive");
    }
    let report = simulate(&c, a.backend, a.shots, a.seed, &a.measure, deadline(a.timeout))?;
    emit(a.out.as_deref(), &(serde_json::to_string_pretty(&report)? + "\n"))
}
