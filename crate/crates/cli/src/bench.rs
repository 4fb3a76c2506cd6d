//! Timing sweeps. Circuit generation and transpilation happen before the
//! clock starts; only state allocation and gate application are timed.

use std::time::{Duration, Instant};

use anyhow::{Context, Result};
use qshift_core::circuit::{transpile, McxMode};
use qshift_core::grover::{build_grover_circuit, SearchMode};
use qshift_core::sim::{new_state, run_circuit, BackendKind, DEFAULT_SV_CAP};
use qshift_core::{SequenceSet, SimError};
use serde::{Deserialize, Serialize};

use crate::build::spec_for;
use crate::{emit, BasisChoice, BenchArgs};

pub const SCHEMA: &str = "qshift.bench.v1";

fn default_timeout() -> f64 {
    3600.0
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    /// Per-cell limit in seconds unless a cell overrides it.
    #[serde(default = "default_timeout")]
    pub timeout: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub iterations: usize,
    #[serde(default = "one")]
    pub tau: usize,
    #[serde(default, rename = "cell")]
    pub cells: Vec<CellSpec>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub n: usize,
    pub m: usize,
    /// `sv`, `dd`, or `mps` (reported as unsupported).
    pub backend: String,
    pub timeout: Option<f64>,
    pub iterations: Option<usize>,
    pub mode: Option<SearchMode>,
    /// `logical` (default), `u_cx`, or `u_cx_mcx`.
    pub basis: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub n: usize,
    pub m: usize,
    pub qubits: usize,
    pub backend: String,
    pub iterations: usize,
    /// Seconds, `>limit`, `CAPACITY`, or `UNSUPPORTED`.
    pub wall_seconds: String,
    pub peak_nodes: Option<usize>,
}

pub struct CellRun {
    pub row: Row,
    /// Wall time spent in the timed section.
    pub elapsed: Duration,
}

pub fn parse_config(text: &str) -> Result<BenchConfig> {
    Ok(toml::from_str(text)?)
}

pub fn run_cell(cfg: &BenchConfig, cell: &CellSpec) -> Result<CellRun> {
    let mode = cell.mode.unwrap_or(SearchMode::Multi);
    let iterations = cell.iterations.unwrap_or(cfg.iterations);
    let limit = cell.timeout.unwrap_or(cfg.timeout);
    let set = SequenceSet::random(cell.n, cell.m, cfg.seed)?;
    let spec = spec_for(mode, &set, cfg.tau.min(cell.n), iterations);
    spec.validate()?;
    let BasisChoice(basis) = cell
        .basis
        .as_deref()
        .unwrap_or("logical")
        .parse()
        .map_err(anyhow::Error::msg)?;
    let qubits = spec.layout().width();
    let mut row = Row {
        n: cell.n,
        m: cell.m,
        qubits,
        backend: cell.backend.clone(),
        iterations,
        wall_seconds: String::new(),
        peak_nodes: None,
    };
    let backend = match cell.backend.as_str() {
        "mps" => {
            row.wall_seconds = "UNSUPPORTED".into();
            return Ok(CellRun {
                row,
                elapsed: Duration::ZERO,
            });
        }
        other => other.parse::<BackendKind>().map_err(anyhow::Error::msg)?,
    };
    if backend == BackendKind::Sv && qubits > DEFAULT_SV_CAP {
        row.wall_seconds = "CAPACITY".into();
        return Ok(CellRun {
            row,
            elapsed: Duration::ZERO,
        });
    }
    let logical = build_grover_circuit(&spec, &set, iterations)?;
    let circuit = match basis {
        Some(b) => transpile(&logical, b, McxMode::NoAncilla),
        None => logical,
    };

    let start = Instant::now();
    let deadline = start + Duration::from_secs_f64(limit);
    let outcome = new_state(backend, circuit.width()).and_then(|mut s| {
        run_circuit(s.as_mut(), &circuit, Some(deadline))?;
        Ok(s)
    });
    let elapsed = start.elapsed();

    match outcome {
        Ok(state) => {
            row.wall_seconds = format!("{:.3}", elapsed.as_secs_f64());
            row.peak_nodes = state.dd_stats().map(|s| s.peak_nodes);
        }
        Err(SimError::Timeout) => row.wall_seconds = format!(">{limit}"),
        Err(SimError::Capacity { .. }) => row.wall_seconds = "CAPACITY".into(),
        Err(e) => return Err(e.into()),
    }
    Ok(CellRun { row, elapsed })
}

/// Runs every cell, in order or on one thread per cell.
pub fn run_config(cfg: &BenchConfig, parallel: bool) -> Result<Vec<Row>> {
    if !parallel {
        return cfg.cells.iter().map(|c| run_cell(cfg, c).map(|r| r.row)).collect();
    }
    std::thread::scope(|s| {
        let handles: Vec<_> = cfg.cells.iter().map(|c| s.spawn(move || run_cell(cfg, c))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("bench cell panicked").map(|r| r.row))
            .collect()
    })
}

pub fn to_csv(rows: &[Row]) -> Result<String> {
    let mut w = csv::Writer::from_writer(format!("# schema: {SCHEMA}\n").into_bytes());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn from_csv(text: &str) -> Result<Vec<Row>> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    r.deserialize()
        .collect::<Result<Vec<Row>, _>>()
        .context("reading bench CSV")
}

pub fn cmd(a: &BenchArgs) -> Result<()> {
    let text = std::fs::read_to_string(&a.config).with_context(|| format!("reading {}", a.config.display()))?;
    let cfg = parse_config(&text).with_context(|| format!("parsing {}", a.config.display()))?;
    let rows = run_config(&cfg, a.parallel)?;
    emit(a.out.as_deref(), &to_csv(&rows)?)
}
