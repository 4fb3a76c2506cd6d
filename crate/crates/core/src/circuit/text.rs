//! Line-oriented circuit text format.
//!
//! ```text
//! # qshift circuit v1
//! width 5
//! layout plain seqlen=0 seqs=0
//! reg work 0 5
//! CX ctrls=[0] negs=[] tgts=[1] params=[]
//! ```
//!
//! Blank lines and `#` comments after the first line are ignored. Angles are
//! written in shortest round-trip form, so write/parse is lossless.

use std::fmt::Write as _;

use super::layout::{LayoutMode, QubitRange, RegisterLayout, Role};
use super::{Circuit, GateApp, GateKind};
use crate::error::CircuitError;

pub const HEADER: &str = "# qshift circuit v1";

fn list<T: std::fmt::Debug>(xs: &[T]) -> String {
    let items: Vec<String> = xs.iter().map(|x| format!("{x:?}")).collect();
    format!("[{}]", items.join(","))
}

pub fn write_circuit(c: &Circuit) -> String {
    let mut out = String::new();
    let l = c.layout();
    let mode = match l.mode() {
        LayoutMode::Pairwise => "pairwise",
        LayoutMode::Multi { .. } => "multi",
        LayoutMode::Plain => "plain",
    };
    let seqs = match l.mode() {
        LayoutMode::Multi { num_seqs } => num_seqs,
        LayoutMode::Pairwise => 2,
        LayoutMode::Plain => 0,
    };
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "width {}", c.width()).unwrap();
    writeln!(out, "layout {mode} seqlen={} seqs={seqs}", l.seq_len()).unwrap();
    for (role, r) in l.registers() {
        writeln!(out, "reg {role} {} {}", r.start, r.len).unwrap();
    }
    for g in c.gates() {
        writeln!(
            out,
            "{} ctrls={} negs={} tgts={} params={}",
            g.kind.name(),
            list(&g.controls),
            list(&g.negated),
            list(&g.targets),
            list(&g.kind.params()),
        )
        .unwrap();
    }
    out
}

fn err(line: usize, msg: impl Into<String>) -> CircuitError {
    CircuitError::Parse { line, msg: msg.into() }
}

fn parse_list<T: std::str::FromStr>(line: usize, field: &str, key: &str) -> Result<Vec<T>, CircuitError> {
    let body = field
        .strip_prefix(key)
        .and_then(|s| s.strip_prefix('='))
        .and_then(|s| s.strip_prefix('['))
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| err(line, format!("expected `{key}=[...]`, got `{field}`")))?;
    if body.trim().is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| err(line, format!("bad value `{}` in {key}", s.trim())))
        })
        .collect()
}

fn parse_kv(line: usize, field: Option<&str>, key: &str) -> Result<usize, CircuitError> {
    field
        .and_then(|f| f.strip_prefix(key))
        .and_then(|f| f.strip_prefix('='))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| err(line, format!("expected `{key}=<int>`")))
}

pub fn parse_circuit(text: &str) -> Result<Circuit, CircuitError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    match lines.next() {
        Some((_, l)) if l == HEADER => {}
        _ => return Err(err(1, format!("missing header `{HEADER}`"))),
    }
    let mut width: Option<usize> = None;
    let mut mode: Option<(LayoutMode, usize)> = None;
    let mut registers = Vec::new();
    let mut circuit: Option<Circuit> = None;

    for (n, l) in lines {
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let mut fields = l.split_whitespace();
        let head = fields.next().unwrap();
        if circuit.is_none() {
            match head {
                "width" => {
                    let w = fields
                        .next()
                        .and_then(|w| w.parse().ok())
                        .ok_or_else(|| err(n, "expected `width <int>`"))?;
                    width = Some(w);
                    continue;
                }
                "layout" => {
                    let kind = fields.next().ok_or_else(|| err(n, "missing layout mode"))?;
                    let seq_len = parse_kv(n, fields.next(), "seqlen")?;
                    let seqs = parse_kv(n, fields.next(), "seqs")?;
                    let m = match kind {
                        "pairwise" => LayoutMode::Pairwise,
                        "multi" => LayoutMode::Multi { num_seqs: seqs },
                        "plain" => LayoutMode::Plain,
                        other => return Err(err(n, format!("unknown layout mode `{other}`"))),
                    };
                    mode = Some((m, seq_len));
                    continue;
                }
                "reg" => {
                    let parts: Vec<&str> = fields.collect();
                    if parts.len() != 3 {
                        return Err(err(n, "expected `reg <name> <start> <len>`"));
                    }
                    let role: Role = parts[0].parse().map_err(|e: CircuitError| err(n, e.to_string()))?;
                    let start = parts[1].parse().map_err(|_| err(n, "bad register start"))?;
                    let len = parts[2].parse().map_err(|_| err(n, "bad register length"))?;
                    registers.push((role, QubitRange::new(start, len)));
                    continue;
                }
                _ => {
                    let w = width.ok_or_else(|| err(n, "gate before `width` line"))?;
                    let layout = match mode {
                        Some((m, seq_len)) => RegisterLayout::from_parts(m, seq_len, std::mem::take(&mut registers))
                            .map_err(|e| err(n, e.to_string()))?,
                        None if registers.is_empty() => RegisterLayout::plain(w),
                        None => return Err(err(n, "registers given without a `layout` line")),
                    };
                    if layout.width() != w {
                        return Err(err(
                            n,
                            format!("registers cover {} qubits, width is {w}", layout.width()),
                        ));
                    }
                    circuit = Some(Circuit::new(layout));
                }
            }
        }
        let c = circuit.as_mut().unwrap();
        let rest: Vec<&str> = l.split_whitespace().skip(1).collect();
        if rest.len() != 4 {
            return Err(err(n, "expected `KIND ctrls=[..] negs=[..] tgts=[..] params=[..]`"));
        }
        let controls = parse_list::<usize>(n, rest[0], "ctrls")?;
        let negated = parse_list::<usize>(n, rest[1], "negs")?;
        let targets = parse_list::<usize>(n, rest[2], "tgts")?;
        let params = parse_list::<f64>(n, rest[3], "params")?;
        let kind = GateKind::from_name(head, &params)
            .ok_or_else(|| err(n, format!("unknown gate `{head}` with {} params", params.len())))?;
        let gate = GateApp {
            kind,
            controls,
            targets,
            negated,
        };
        c.try_push(gate).map_err(|e| err(n, e.to_string()))?;
    }

    match circuit {
        Some(c) => Ok(c),
        None => {
            let w = width.ok_or_else(|| err(0, "missing `width` line"))?;
            let layout = match mode {
                Some((m, seq_len)) => {
                    RegisterLayout::from_parts(m, seq_len, registers).map_err(|e| err(0, e.to_string()))?
                }
                None => RegisterLayout::plain(w),
            };
            if layout.width() != w {
                return Err(err(
                    0,
                    format!("registers cover {} qubits, width is {w}", layout.width()),
                ));
            }
            Ok(Circuit::new(layout))
        }
    }
}
