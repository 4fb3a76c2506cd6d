//! `qshift` command-line front end.

pub mod bench;
pub mod build;
pub mod correlate;
pub mod search;
pub mod simulate;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qshift_core::circuit::{Basis, McxMode};
use qshift_core::grover::SearchMode;
use qshift_core::sim::BackendKind;
use qshift_core::SequenceSet;

#[derive(Debug, Parser)]
#[command(
    name = "qshift",
    version,
    about = "Shift-wise distance circuits and Grover screening for DNA sequences"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Match counts C(k) by FFT and by direct counting, with distances.
    Correlate(CorrelateArgs),
    /// Build a circuit and its resource report.
    Build(BuildArgs),
    /// Run a serialized circuit and sample it.
    Simulate(SimulateArgs),
    /// Grover search for candidates with 1 <= distance <= tau.
    Grover(GroverArgs),
    /// Timing sweep over (N, M, backend) cells from a TOML config.
    Bench(BenchArgs),
}

/// Where the sequences come from and how they are paired.
#[derive(Debug, Clone, Args)]
pub struct SeqArgs {
    /// Sequence file: one sequence per line, or FASTA.
    #[arg(long, value_name = "FILE", conflicts_with = "random")]
    pub seqs: Option<PathBuf>,
    /// Generate random sequences of this length instead of reading a file.
    #[arg(long, value_name = "N")]
    pub random: Option<usize>,
    /// Number of random sequences.
    #[arg(long, value_name = "M", default_value_t = 2, requires = "random")]
    pub count: usize,
    /// Compare two sequences of the input by index.
    #[arg(long, value_name = "I,J", value_parser = parse_pair, conflicts_with = "multi")]
    pub pair: Option<(usize, usize)>,
    /// Search over all sequences of the input.
    #[arg(long)]
    pub multi: bool,
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    #[arg(long, value_name = "FILE")]
    pub seqs: PathBuf,
    #[arg(long, value_name = "I,J", value_parser = parse_pair, default_value = "0,1")]
    pub pair: (usize, usize),
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub input: SeqArgs,
    #[arg(long, default_value_t = 1)]
    pub tau: usize,
    /// Grover iterations in the emitted circuit.
    #[arg(long, default_value_t = 1)]
    pub iters: usize,
    /// Circuit to emit.
    #[arg(long, value_enum, default_value_t = build::Kind::Iteration)]
    pub kind: build::Kind,
    /// u_cx, u_cx_mcx, or logical (no transpilation).
    #[arg(long, default_value = "u_cx")]
    pub basis: BasisChoice,
    #[arg(long, default_value = "no_ancilla")]
    pub mcx: McxMode,
    /// Circuit file; the report goes to stdout unless --report is given.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
    /// Seed for --random.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_name = "FILE")]
    pub circuit: PathBuf,
    #[arg(long, default_value = "dd")]
    pub backend: BackendKind,
    #[arg(long, default_value_t = 1024)]
    pub shots: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated register names, `search`, or `all`.
    #[arg(long, default_value = "search")]
    pub measure: String,
    #[arg(long, value_name = "SECS")]
    pub timeout: Option<f64>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GroverArgs {
    #[command(flatten)]
    pub input: SeqArgs,
    #[arg(long)]
    pub tau: usize,
    /// Fixed iteration count; defaults to the optimum for the classically
    /// counted solutions.
    #[arg(long, conflicts_with = "bbht")]
    pub iters: Option<usize>,
    /// Randomized schedule for unknown solution counts.
    #[arg(long)]
    pub bbht: bool,
    #[arg(long, default_value_t = 64, requires = "bbht")]
    pub max_rounds: usize,
    #[arg(long, default_value = "dd")]
    pub backend: BackendKind,
    #[arg(long, default_value_t = 4096)]
    pub shots: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_name = "SECS")]
    pub timeout: Option<f64>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_name = "FILE")]
    pub config: PathBuf,
    /// Run cells on separate threads.
    #[arg(long)]
    pub parallel: bool,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

pub fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected I,J, got `{s}`"))?;
    let idx = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("bad index `{v}`: {e}"));
    Ok((idx(a)?, idx(b)?))
}

/// Target basis, `None` meaning the untranspiled logical circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisChoice(pub Option<Basis>);

impl std::str::FromStr for BasisChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "logical" => Ok(BasisChoice(None)),
            other => other.parse().map(|b| BasisChoice(Some(b))),
        }
    }
}

pub fn read_sequences(path: &Path) -> Result<SequenceSet> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    SequenceSet::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn pick(set: &SequenceSet, (i, j): (usize, usize)) -> Result<SequenceSet> {
    let seqs = vec![set.get(i)?.clone(), set.get(j)?.clone()];
    Ok(SequenceSet::new(seqs)?)
}

impl SeqArgs {
    /// Loads the sequences and resolves the search mode.
    pub fn resolve(&self, seed: u64) -> Result<(SearchMode, SequenceSet)> {
        let set = match (&self.seqs, self.random) {
            (Some(p), _) => read_sequences(p)?,
            (None, Some(n)) => SequenceSet::random(n, self.count, seed)?,
            (None, None) => bail!("give --seqs FILE or --random N"),
        };
        match (self.pair, self.multi) {
            (Some(p), _) => Ok((SearchMode::Pairwise, pick(&set, p)?)),
            (None, true) => Ok((SearchMode::Multi, set)),
            (None, false) if set.len() == 2 => Ok((SearchMode::Pairwise, set)),
            (None, false) => bail!("input has {} sequences; choose --pair I,J or --multi", set.len()),
        }
    }
}

pub fn deadline(timeout: Option<f64>) -> Option<Instant> {
    timeout.map(|s| Instant::now() + Duration::from_secs_f64(s))
}

/// Writes to `out`, or stdout when `None`.
pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Correlate(a) => correlate::cmd(&a),
        Command::Build(a) => build::cmd(&a),
        Command::Simulate(a) => simulate::cmd(&a),
        Command::Grover(a) => search::cmd(&a),
        Command::Bench(a) => bench::cmd(&a),
    }
}
