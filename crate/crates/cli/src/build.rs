//! Circuit construction and resource reports.

use anyhow::{Context, Result};
use clap::ValueEnum;
use qshift_core::circuit::{
    count_resources, transpile, write_circuit, Basis, Circuit, GateApp, McxMode, ResourceReport, Role,
};
use qshift_core::distance::{build_compare, build_qft_adder, build_qshift_core};
use qshift_core::encoder::{build_qrom, load_sequence};
use qshift_core::grover::{
    build_diffuser, build_grover_circuit, build_iteration, build_loads, IterationPolicy, SearchMode, SearchSpec,
};
use qshift_core::shifter::build_controlled_shift;
use qshift_core::SequenceSet;
use serde::{Deserialize, Serialize};

use crate::{emit, BuildArgs};

pub const SCHEMA: &str = "qshift.resources.v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// `iters` bare Grover iterations, as counted per iteration.
    Iteration,
    /// Complete search: preparation, iterations, clean-up.
    Grover,
    /// Data loading, uniform shift (and address) registers with sign 0, and
    /// one distance core.
    Core,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreBreakdown {
    pub total: ResourceReport,
    pub shift: ResourceReport,
    pub compare: ResourceReport,
    pub adder: ResourceReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Breakdown {
    /// Address-controlled load of one data register (plain load in pairwise
    /// mode).
    pub encoding_multiple: ResourceReport,
    #[serde(rename = "qshift-sa")]
    pub qshift_sa: CoreBreakdown,
    pub diffuser: ResourceReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub mode: SearchMode,
    pub n: usize,
    pub m: usize,
    pub tau: usize,
    pub kind: Kind,
    pub iterations: usize,
    pub basis: String,
    pub mcx_mode: McxMode,
    pub total: ResourceReport,
    pub breakdown: Breakdown,
}

pub struct Built {
    pub circuit: Circuit,
    pub report: Report,
}

pub fn spec_for(mode: SearchMode, set: &SequenceSet, tau: usize, iters: usize) -> SearchSpec {
    let policy = IterationPolicy::Fixed(iters);
    match mode {
        SearchMode::Pairwise => SearchSpec::pairwise(set.seq_len(), tau, policy),
        SearchMode::Multi => SearchSpec::multi(set.seq_len(), set.len(), tau, policy),
    }
}

fn core_circuit(spec: &SearchSpec, set: &SequenceSet) -> Result<Circuit> {
    let l = spec.layout();
    let mut c = Circuit::new(l.clone());
    let sign = l.reg(Role::Sign).start;
    c.extend(l.search_qubits().into_iter().filter(|&q| q != sign).map(GateApp::h));
    match spec.mode {
        SearchMode::Multi => c.append(&build_loads(&l, set)?)?,
        SearchMode::Pairwise => {
            for (seq, role) in set.sequences().iter().zip([Role::DataX, Role::DataY]) {
                c.append(&load_sequence(&l, seq, l.reg(role))?)?;
            }
        }
    }
    c.append(&build_qshift_core(&l))?;
    Ok(c)
}

pub fn build(
    mode: SearchMode,
    set: &SequenceSet,
    tau: usize,
    iters: usize,
    kind: Kind,
    basis: Option<Basis>,
    mcx: McxMode,
) -> Result<Built> {
    let spec = spec_for(mode, set, tau, iters);
    spec.validate()?;
    let l = spec.layout();
    let lower = |c: &Circuit| match basis {
        Some(b) => transpile(c, b, mcx),
        None => c.clone(),
    };
    let logical = match kind {
        Kind::Iteration => {
            let one = build_iteration(&spec, set)?;
            let mut c = Circuit::new(l.clone());
            for _ in 0..iters {
                c.append(&one)?;
            }
            c
        }
        Kind::Grover => build_grover_circuit(&spec, set, iters)?,
        Kind::Core => core_circuit(&spec, set)?,
    };
    let circuit = lower(&logical);
    let count = |c: &Circuit| count_resources(&lower(c));
    let encoding = match mode {
        SearchMode::Multi => build_qrom(&l, set, l.reg(Role::AddrI), l.reg(Role::DataX))?,
        SearchMode::Pairwise => load_sequence(&l, &set.sequences()[0], l.reg(Role::DataX))?,
    };
    let breakdown = Breakdown {
        encoding_multiple: count(&encoding),
        qshift_sa: CoreBreakdown {
            total: count(&build_qshift_core(&l)),
            shift: count(&build_controlled_shift(&l)),
            compare: count(&build_compare(&l)),
            adder: count(&build_qft_adder(&l)),
        },
        diffuser: count(&build_diffuser(&l, &l.search_qubits())),
    };
    let report = Report {
        schema: SCHEMA.into(),
        mode,
        n: spec.n,
        m: spec.m,
        tau,
        kind,
        iterations: iters,
        basis: basis.map_or("logical", |b| b.name()).into(),
        mcx_mode: mcx,
        total: count_resources(&circuit),
        breakdown,
    };
    Ok(Built { circuit, report })
}

pub fn cmd(a: &BuildArgs) -> Result<()> {
    let (mode, set) = a.input.resolve(a.seed)?;
    let built = build(mode, &set, a.tau, a.iters, a.kind, a.basis.0, a.mcx)?;
    if let Some(p) = &a.out {
        std::fs::write(p, write_circuit(&built.circuit)).with_context(|| format!("writing {}", p.display()))?;
    }
    let json = serde_json::to_string_pretty(&built.report)? + "\n";
    emit(a.report.as_deref(), &json)
}
