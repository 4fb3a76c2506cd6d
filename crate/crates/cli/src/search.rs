//! Grover search runs.

use anyhow::Result;
use qshift_core::grover::{
    optimal_iterations, run_grover, solution_values, IterationPolicy, RunOptions, SearchEncoding, SearchMode,
    SearchResult, SearchSpec, SEARCH_SCHEMA,
};
use qshift_core::sim::BackendKind;
use qshift_core::{GroverError, SequenceSet};
use serde::{Deserialize, Serialize};

use crate::{deadline, emit, GroverArgs};

/// Written instead of a result when BBHT runs out of rounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exhausted {
    pub schema: String,
    pub status: String,
    pub mode: SearchMode,
    pub n: usize,
    pub m: usize,
    pub tau: usize,
    pub backend: BackendKind,
    pub rounds: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Response {
    Found(SearchResult),
    Exhausted(Exhausted),
}

/// Iterations for a fixed run when none are requested: the optimum for the
/// classically counted solutions.
pub fn default_iterations(spec: &SearchSpec, set: &SequenceSet) -> usize {
    let solutions = solution_values(spec, set).len() as u128;
    optimal_iterations(solutions, SearchEncoding::of(&spec.layout()).space())
}

pub fn run(spec: &SearchSpec, set: &SequenceSet, opts: RunOptions) -> Result<Response> {
    match run_grover(spec, set, opts) {
        Ok(r) => Ok(Response::Found(r)),
        Err(GroverError::Exhausted { rounds }) => Ok(Response::Exhausted(Exhausted {
            schema: SEARCH_SCHEMA.into(),
            status: "exhausted".into(),
            mode: spec.mode,
            n: spec.n,
            m: spec.m,
            tau: spec.tau,
            backend: opts.backend,
            rounds,
        })),
        Err(e) => Err(e.into()),
    }
}

pub fn cmd(a: &GroverArgs) -> Result<()> {
    let (mode, set) = a.input.resolve(a.seed)?;
    let base = crate::build::spec_for(mode, &set, a.tau, 0);
    base.validate()?;
    let policy = if a.bbht {
        IterationPolicy::Bbht {
            seed: a.seed,
            max_rounds: a.max_rounds,
        }
    } else {
        IterationPolicy::Fixed(a.iters.unwrap_or_else(|| default_iterations(&base, &set)))
    };
    let spec = SearchSpec { policy, ..base };
    let opts = RunOptions {
        backend: a.backend,
        shots: a.shots,
        seed: a.seed,
        deadline: deadline(a.timeout),
    };
    let resp = run(&spec, &set, opts)?;
    emit(a.out.as_deref(), &(serde_json::to_string_pretty(&resp)? + "\n"))
}
