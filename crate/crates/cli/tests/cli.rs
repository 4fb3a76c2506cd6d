use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Duration;

use qshift_cli::bench::{self, BenchConfig, CellSpec};
use qshift_cli::build::{build, Kind};
use qshift_cli::{correlate, simulate};
use qshift_core::circuit::{parse_circuit, Basis, McxMode};
use qshift_core::classical::candidate_distance;
use qshift_core::grover::SearchMode;
use qshift_core::sim::BackendKind;
use qshift_core::{DnaSequence, SequenceSet};

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn qshift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qshift"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = qshift(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn correlate_matches_golden_and_peaks_at_two() {
    let text = stdout(&["correlate", "--seqs", path(&golden("four_seqs.txt")), "--pair", "0,1"]);
    assert_eq!(text, std::fs::read_to_string(golden("correlate_s0_s1.csv")).unwrap());
    let rows = correlate::from_csv(&text).unwrap();
    let best = rows.iter().max_by_key(|r| r.c_fft).unwrap();
    assert_eq!((best.k, best.c_fft, best.d_h), (2, 6, 2));
    assert!(rows.iter().all(|r| r.c_fft == r.c_naive && r.c_fft + r.d_h == 8));
    assert_eq!(correlate::to_csv(&rows).unwrap(), text);
}

#[test]
fn correlate_identical_pair() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("same.txt");
    std::fs::write(&f, "GATTACA\nGATTACA\n").unwrap();
    let out = dir.path().join("c.csv");
    stdout(&["correlate", "--seqs", path(&f), "--out", path(&out)]);
    let rows = correlate::from_csv(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!((rows[0].c_fft, rows[0].d_h), (7, 0));
}

#[test]
fn input_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.txt");
    std::fs::write(&f, "ACGT\n\nACXT\n").unwrap();
    let out = qshift(&["correlate", "--seqs", path(&f)]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3") && err.contains("'X'"), "{err}");

    let out = qshift(&["correlate", "--seqs", path(&golden("four_seqs.txt")), "--pair", "0,9"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("out of range"));
}

#[test]
fn build_report_matches_golden() {
    let text = stdout(&[
        "build",
        "--seqs",
        path(&golden("toy_pair.txt")),
        "--tau",
        "1",
        "--iters",
        "1",
        "--basis",
        "u_cx",
    ]);
    assert_eq!(text, std::fs::read_to_string(golden("build_toy_u_cx.json")).unwrap());
}

#[test]
fn build_writes_a_parseable_circuit() {
    let dir = tempfile::tempdir().unwrap();
    let (c, r) = (dir.path().join("c.txt"), dir.path().join("r.json"));
    stdout(&[
        "build",
        "--seqs",
        path(&golden("four_seqs.txt")),
        "--multi",
        "--basis",
        "u_cx_mcx",
        "--mcx",
        "with_ancilla",
        "--out",
        path(&c),
        "--report",
        path(&r),
    ]);
    let circuit = parse_circuit(&std::fs::read_to_string(c).unwrap()).unwrap();
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(r).unwrap()).unwrap();
    assert_eq!(report["total"]["qubits"], circuit.width());
    assert_eq!(report["total"]["total_gates"], circuit.len());
    assert_eq!(report["mcx_mode"], "with_ancilla");
    assert_eq!(circuit.width(), 56);
}

#[test]
fn empty_iteration_request_has_no_gates() {
    let set = SequenceSet::from_strs(&["ACGT", "GTAA"]).unwrap();
    let b = build(
        SearchMode::Pairwise,
        &set,
        1,
        0,
        Kind::Iteration,
        Some(Basis::UCx),
        McxMode::NoAncilla,
    )
    .unwrap();
    assert_eq!(b.report.total.total_gates, 0);
    assert_eq!(b.report.total.depth, 0);
    assert!(b.circuit.is_empty());
}

#[test]
fn shift_dominates_the_core() {
    let set = SequenceSet::random(8, 4, 3).unwrap();
    let b = build(
        SearchMode::Multi,
        &set,
        1,
        1,
        Kind::Iteration,
        Some(Basis::UCx),
        McxMode::NoAncilla,
    )
    .unwrap();
    let core = &b.report.breakdown.qshift_sa;
    assert!(core.shift.total_gates > core.compare.total_gates);
    assert!(core.shift.total_gates > core.adder.total_gates);
    assert_eq!(
        core.total.total_gates,
        core.shift.total_gates + core.compare.total_gates + core.adder.total_gates
    );
}

#[test]
fn bad_sizes_are_rejected() {
    let set = SequenceSet::random(4, 3, 0).unwrap();
    assert!(build(SearchMode::Multi, &set, 1, 1, Kind::Iteration, None, McxMode::NoAncilla).is_err());
    let out = qshift(&["build", "--random", "4", "--count", "3", "--multi"]);
    assert!(!out.status.success());
}

fn core_circuit_file(dir: &Path, seqs: &str) -> PathBuf {
    let f = dir.join("pair.txt");
    std::fs::write(&f, seqs).unwrap();
    let c = dir.join("core.txt");
    stdout(&[
        "build",
        "--seqs",
        path(&f),
        "--kind",
        "core",
        "--basis",
        "logical",
        "--out",
        path(&c),
    ]);
    c
}

#[test]
fn simulate_pairs_shift_with_distance() {
    let dir = tempfile::tempdir().unwrap();
    let c = core_circuit_file(dir.path(), "ATGC\nGCAA\n");
    let text = stdout(&[
        "simulate",
        "--circuit",
        path(&c),
        "--measure",
        "shift,distance",
        "--shots",
        "400",
    ]);
    let r: simulate::SimReport = serde_json::from_str(&text).unwrap();
    let (x, y): (DnaSequence, DnaSequence) = ("ATGC".parse().unwrap(), "GCAA".parse().unwrap());
    assert_eq!(r.outcomes.len(), 4);
    for o in &r.outcomes {
        let k = o.registers["shift"] as usize;
        assert_eq!(o.registers["distance"], candidate_distance(&x, &y, k, false) as u128);
    }
    assert!(r.dd_stats.is_some());
    assert_eq!(r.outcomes.iter().map(|o| o.count).sum::<usize>(), 400);
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let c = core_circuit_file(dir.path(), "ACG\nGTA\n");
    let args = ["simulate", "--circuit", path(&c), "--measure", "all", "--seed", "5"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn simulate_sv_capacity_error() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("big.txt");
    stdout(&[
        "build",
        "--seqs",
        path(&golden("four_seqs.txt")),
        "--multi",
        "--kind",
        "grover",
        "--iters",
        "1",
        "--basis",
        "logical",
        "--out",
        path(&c),
    ]);
    let out = qshift(&["simulate", "--circuit", path(&c), "--backend", "sv"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("capacity"));
}

#[test]
fn grover_matches_golden() {
    let toy = golden("toy_pair.txt");
    let text = stdout(&[
        "grover",
        "--seqs",
        path(&toy),
        "--tau",
        "1",
        "--shots",
        "512",
        "--seed",
        "11",
    ]);
    assert_eq!(text, std::fs::read_to_string(golden("grover_toy.json")).unwrap());
}

#[test]
fn grover_paper_run_verifies_solutions() {
    let text = stdout(&[
        "grover",
        "--seqs",
        path(&golden("four_seqs.txt")),
        "--multi",
        "--tau",
        "1",
        "--iters",
        "6",
        "--seed",
        "2",
    ]);
    let r: qshift_core::grover::SearchResult = serde_json::from_str(&text).unwrap();
    let verified: Vec<_> = r.verified().collect();
    assert_eq!(verified.len(), 4);
    assert!(r.outcomes[..4].iter().all(|o| o.verified));
    assert!(verified.iter().all(|o| o.count > 16 * 10));
}

#[test]
fn grover_bbht_exhaustion_report() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("far.txt");
    std::fs::write(&f, "AAAA\nCCCC\n").unwrap();
    let text = stdout(&[
        "grover",
        "--seqs",
        path(&f),
        "--tau",
        "2",
        "--bbht",
        "--max-rounds",
        "8",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["status"], "exhausted");
    assert_eq!(v["rounds"], 8);
}

fn cell(n: usize, m: usize, backend: &str) -> CellSpec {
    CellSpec {
        n,
        m,
        backend: backend.into(),
        timeout: None,
        iterations: None,
        mode: None,
        basis: None,
    }
}

#[test]
fn bench_config_and_markers() {
    let cfg = bench::parse_config(
        r#"
        timeout = 60
        [[cell]]
        n = 8
        m = 4
        backend = "sv"
        [[cell]]
        n = 3
        m = 4
        backend = "mps"
        [[cell]]
        n = 2
        m = 2
        backend = "dd"
        basis = "u_cx"
        "#,
    )
    .unwrap();
    let rows = bench::run_config(&cfg, false).unwrap();
    assert_eq!(rows[0].wall_seconds, "CAPACITY");
    assert_eq!(rows[0].qubits, 55);
    assert_eq!(rows[1].wall_seconds, "UNSUPPORTED");
    assert!(rows[2].wall_seconds.parse::<f64>().is_ok());
    assert!(rows[2].peak_nodes.is_some());
    let csv = bench::to_csv(&rows).unwrap();
    assert!(csv.starts_with("# schema: qshift.bench.v1\n"));
    assert_eq!(bench::from_csv(&csv).unwrap(), rows);
    let par = bench::run_config(&cfg, true).unwrap();
    assert_eq!(par.len(), rows.len());
    assert_eq!(par[0], rows[0]);
    assert!(bench::parse_config("[[cell]]\nn = 1\n").is_err());
}

#[test]
fn bench_timeout_is_honored() {
    let cfg = BenchConfig {
        timeout: 1.0,
        seed: 1,
        iterations: 40,
        tau: 1,
        cells: vec![],
    };
    let run = bench::run_cell(&cfg, &cell(8, 8, "dd")).unwrap();
    assert_eq!(run.row.wall_seconds, ">1");
    assert!(run.elapsed >= Duration::from_secs(1));
    assert!(run.elapsed <= Duration::from_millis(1100), "{:?}", run.elapsed);
}

#[test]
fn bench_cli_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let (cfg, out) = (dir.path().join("b.toml"), dir.path().join("b.csv"));
    std::fs::write(&cfg, "[[cell]]\nn = 2\nm = 2\nbackend = \"sv\"\n").unwrap();
    stdout(&["bench", "--config", path(&cfg), "--out", path(&out)]);
    let rows = bench::from_csv(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].backend, "sv");
    let _ = BackendKind::Sv;
}
