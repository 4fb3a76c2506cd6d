//! Decision-diagram state simulation.
//!
//! A state on `n` qubits is a weighted edge into a quasi-reduced diagram:
//! every node at level `l` (qubit `l`) has two edges into level `l - 1`, and
//! level `-1` is the single terminal. Zero edges carry weight 0 and point at
//! the terminal regardless of level. The amplitude of a basis index is the
//! product of the edge weights along its path from the root (qubit `n - 1`).
//!
//! Nodes are normalized by dividing both outgoing weights by the one of larger
//! magnitude (ties go to the low edge), so one child weight is exactly 1 and
//! the other has magnitude at most 1. Weights are compared in buckets of
//! `1e-10` per component when hash-consing.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::{BackendKind, Counts, QuantumState};
use crate::circuit::{GateApp, GateKind, Mat2};

pub type NodeId = u32;
pub const TERMINAL: NodeId = 0;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
/// Hash-consing bucket width per real/imaginary component.
const TOL: f64 = 1e-10;
/// Relative magnitude below which sums and child weights snap to zero.
const SNAP: f64 = 1e-13;
const DEAD: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub w: Complex64,
    pub node: NodeId,
}

impl Edge {
    pub const ZERO: Edge = Edge {
        w: ZERO,
        node: TERMINAL,
    };

    pub fn is_zero(&self) -> bool {
        self.w == ZERO
    }

    fn scaled(self, f: Complex64) -> Edge {
        if self.is_zero() || f == ZERO {
            Edge::ZERO
        } else {
            Edge {
                w: self.w * f,
                node: self.node,
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Node {
    pub level: u32,
    pub e: [Edge; 2],
}

fn q(x: f64) -> i64 {
    (x / TOL).round() as i64
}

fn qc(w: Complex64) -> (i64, i64) {
    (q(w.re), q(w.im))
}

type UniqueKey = (u32, [i64; 4], [NodeId; 2]);

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DdStats {
    pub peak_nodes: usize,
    pub live_nodes: usize,
    pub cache_lookups: u64,
    pub cache_hits: u64,
    pub gc_runs: usize,
    pub gates_applied: u64,
}

impl DdStats {
    pub fn cache_hit_rate(&self) -> f64 {
        if self.cache_lookups == 0 {
            0.0
        } else {
            self.cache_hits as f64 / self.cache_lookups as f64
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Shape {
    Diagonal,
    Antidiagonal,
    General,
}

/// Per-gate data for the apply recursion.
struct GateCtx {
    target: isize,
    /// Required control value per level.
    ctrl: Vec<Option<bool>>,
    /// Lowest control level below the target, if any.
    lowest_below: Option<isize>,
    m: Mat2,
    shape: Shape,
}

pub struct DdState {
    n: usize,
    nodes: Vec<Node>,
    free: Vec<NodeId>,
    unique: FxHashMap<UniqueKey, NodeId>,
    root: Edge,
    node_budget: usize,
    above_cache: FxHashMap<NodeId, Edge>,
    pair_cache: FxHashMap<(NodeId, NodeId, [i64; 4]), (Edge, Edge)>,
    add_cache: FxHashMap<(NodeId, NodeId, (i64, i64)), Edge>,
    stats: DdStats,
}

impl DdState {
    /// |0…0⟩ as a chain of `n` nodes.
    pub fn new(n: usize) -> Self {
        Self::with_node_budget(n, 1 << 21)
    }

    /// Like [`DdState::new`], collecting garbage whenever more than `budget`
    /// nodes are allocated.
    pub fn with_node_budget(n: usize, budget: usize) -> Self {
        assert!(n <= 128, "indices are u128");
        let mut s = DdState {
            n,
            nodes: vec![Node {
                level: DEAD,
                e: [Edge::ZERO; 2],
            }],
            free: Vec::new(),
            unique: FxHashMap::default(),
            root: Edge { w: ONE, node: TERMINAL },
            node_budget: budget.max(16),
            above_cache: FxHashMap::default(),
            pair_cache: FxHashMap::default(),
            add_cache: FxHashMap::default(),
            stats: DdStats::default(),
        };
        let mut e = Edge { w: ONE, node: TERMINAL };
        for lv in 0..n {
            e = s.make_node(lv as isize, e, Edge::ZERO);
        }
        s.root = e;
        s.update_peak();
        s
    }

    pub fn root(&self) -> Edge {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id as usize]
    }

    pub fn stats(&self) -> DdStats {
        let mut s = self.stats;
        s.live_nodes = self.allocated();
        s
    }

    fn allocated(&self) -> usize {
        self.nodes.len() - 1 - self.free.len()
    }

    fn update_peak(&mut self) {
        let a = self.allocated();
        if a > self.stats.peak_nodes {
            self.stats.peak_nodes = a;
        }
    }

    /// Nodes reachable from the root (terminal excluded).
    pub fn node_count(&self) -> usize {
        self.reachable().len()
    }

    fn reachable(&self) -> Vec<NodeId> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![self.root];
        let mut out = Vec::new();
        while let Some(e) = stack.pop() {
            if e.is_zero() || e.node == TERMINAL || seen[e.node as usize] {
                continue;
            }
            seen[e.node as usize] = true;
            out.push(e.node);
            stack.extend(self.nodes[e.node as usize].e);
        }
        out
    }

    /// Normalized, hash-consed edge for a node at `lv` with children `e0, e1`.
    fn make_node(&mut self, lv: isize, e0: Edge, e1: Edge) -> Edge {
        let (m0, m1) = (e0.w.norm(), e1.w.norm());
        if m0 == 0.0 && m1 == 0.0 {
            return Edge::ZERO;
        }
        let high_top = m1 > m0 + TOL * m0.max(m1);
        let top = if high_top { e1.w } else { e0.w };
        let top_norm = top.norm();
        let norm_child = |e: Edge, is_top: bool| -> Edge {
            if is_top {
                Edge { w: ONE, node: e.node }
            } else if e.is_zero() || e.w.norm() < SNAP * top_norm {
                Edge::ZERO
            } else {
                Edge {
                    w: e.w / top,
                    node: e.node,
                }
            }
        };
        let c0 = norm_child(e0, !high_top);
        let c1 = norm_child(e1, high_top);
        let (a, b) = (qc(c0.w), qc(c1.w));
        let key = (lv as u32, [a.0, a.1, b.0, b.1], [c0.node, c1.node]);
        let id = match self.unique.get(&key) {
            Some(&id) => id,
            None => {
                let node = Node {
                    level: lv as u32,
                    e: [c0, c1],
                };
                let id = match self.free.pop() {
                    Some(id) => {
                        self.nodes[id as usize] = node;
                        id
                    }
                    None => {
                        self.nodes.push(node);
                        (self.nodes.len() - 1) as NodeId
                    }
                };
                self.unique.insert(key, id);
                id
            }
        };
        Edge { w: top, node: id }
    }

    /// Children of an edge at level `lv`, with the edge weight pushed down.
    fn split(&self, e: Edge) -> (Edge, Edge) {
        if e.is_zero() {
            return (Edge::ZERO, Edge::ZERO);
        }
        let n = &self.nodes[e.node as usize];
        (n.e[0].scaled(e.w), n.e[1].scaled(e.w))
    }

    fn add(&mut self, a: Edge, b: Edge, lv: isize) -> Edge {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if lv < 0 || a.node == b.node {
            let w = a.w + b.w;
            if w.norm() < SNAP * a.w.norm().max(b.w.norm()) {
                return Edge::ZERO;
            }
            return Edge { w, node: a.node };
        }
        let ratio = b.w / a.w;
        let key = (a.node, b.node, qc(ratio));
        self.stats.cache_lookups += 1;
        if let Some(&r) = self.add_cache.get(&key) {
            self.stats.cache_hits += 1;
            return r.scaled(a.w);
        }
        let (a0, a1) = self.split(Edge { w: ONE, node: a.node });
        let (b0, b1) = self.split(Edge { w: ratio, node: b.node });
        let r0 = self.add(a0, b0, lv - 1);
        let r1 = self.add(a1, b1, lv - 1);
        let r = self.make_node(lv, r0, r1);
        self.add_cache.insert(key, r);
        r.scaled(a.w)
    }

    /// `(L, H) ↦ (m00 L + m01 H, m10 L + m11 H)` for edges at level `lv`.
    fn mix(&mut self, ctx: &GateCtx, l: Edge, h: Edge, lv: isize) -> (Edge, Edge) {
        let m = ctx.m;
        match ctx.shape {
            Shape::Diagonal => (l.scaled(m[0][0]), h.scaled(m[1][1])),
            Shape::Antidiagonal => (h.scaled(m[0][1]), l.scaled(m[1][0])),
            Shape::General => {
                let nl = self.add(l.scaled(m[0][0]), h.scaled(m[0][1]), lv);
                let nh = self.add(l.scaled(m[1][0]), h.scaled(m[1][1]), lv);
                (nl, nh)
            }
        }
    }

    /// Applies the gate to the target's two sub-vectors `l`, `h` (level
    /// `lv`), restricted to the paths satisfying the controls below.
    fn pair(&mut self, ctx: &GateCtx, l: Edge, h: Edge, lv: isize) -> (Edge, Edge) {
        if l.is_zero() && h.is_zero() {
            return (Edge::ZERO, Edge::ZERO);
        }
        if ctx.lowest_below.is_none_or(|low| lv < low) {
            return self.mix(ctx, l, h, lv);
        }
        let f = if l.is_zero() { h.w } else { l.w };
        let (lr, hr) = (l.scaled(ONE / f), h.scaled(ONE / f));
        let (a, b) = (qc(lr.w), qc(hr.w));
        let key = (lr.node, hr.node, [a.0, a.1, b.0, b.1]);
        self.stats.cache_lookups += 1;
        if let Some(&(x, y)) = self.pair_cache.get(&key) {
            self.stats.cache_hits += 1;
            return (x.scaled(f), y.scaled(f));
        }
        let (l0, l1) = self.split(lr);
        let (h0, h1) = self.split(hr);
        let ((nl0, nh0), (nl1, nh1)) = match ctx.ctrl[lv as usize] {
            Some(false) => (self.pair(ctx, l0, h0, lv - 1), (l1, h1)),
            Some(true) => ((l0, h0), self.pair(ctx, l1, h1, lv - 1)),
            None => (self.pair(ctx, l0, h0, lv - 1), self.pair(ctx, l1, h1, lv - 1)),
        };
        let nl = self.make_node(lv, nl0, nl1);
        let nh = self.make_node(lv, nh0, nh1);
        self.pair_cache.insert(key, (nl, nh));
        (nl.scaled(f), nh.scaled(f))
    }

    /// Applies the gate below an edge at level `lv >= target`.
    fn above(&mut self, ctx: &GateCtx, e: Edge, lv: isize) -> Edge {
        if e.is_zero() {
            return e;
        }
        self.stats.cache_lookups += 1;
        if let Some(&r) = self.above_cache.get(&e.node) {
            self.stats.cache_hits += 1;
            return r.scaled(e.w);
        }
        let node = self.nodes[e.node as usize];
        let r = if lv == ctx.target {
            let (nl, nh) = self.pair(ctx, node.e[0], node.e[1], lv - 1);
            self.make_node(lv, nl, nh)
        } else {
            let [c0, c1] = node.e;
            let (r0, r1) = match ctx.ctrl[lv as usize] {
                Some(false) => (self.above(ctx, c0, lv - 1), c1),
                Some(true) => (c0, self.above(ctx, c1, lv - 1)),
                None => (self.above(ctx, c0, lv - 1), self.above(ctx, c1, lv - 1)),
            };
            self.make_node(lv, r0, r1)
        };
        self.above_cache.insert(e.node, r);
        r.scaled(e.w)
    }

    /// Applies `m` to `target` on the subspace where every control matches.
    pub fn apply_controlled(&mut self, controls: &[(usize, bool)], target: usize, m: Mat2) {
        assert!(target < self.n);
        let mut ctrl = vec![None; self.n];
        for &(c, v) in controls {
            assert!(c < self.n && c != target);
            ctrl[c] = Some(v);
        }
        let lowest_below = controls
            .iter()
            .map(|c| c.0 as isize)
            .filter(|&c| c < target as isize)
            .min();
        let shape = if m[0][1] == ZERO && m[1][0] == ZERO {
            Shape::Diagonal
        } else if m[0][0] == ZERO && m[1][1] == ZERO {
            Shape::Antidiagonal
        } else {
            Shape::General
        };
        let ctx = GateCtx {
            target: target as isize,
            ctrl,
            lowest_below,
            m,
            shape,
        };
        let root = self.root;
        self.root = self.above(&ctx, root, self.n as isize - 1);
        self.above_cache.clear();
        self.pair_cache.clear();
        self.add_cache.clear();
        self.stats.gates_applied += 1;
        self.update_peak();
        if self.allocated() > self.node_budget {
            self.collect();
            if self.allocated() > self.node_budget / 2 {
                self.node_budget *= 2;
            }
        }
    }

    /// Mark-sweep: frees every node not reachable from the root.
    pub fn collect(&mut self) {
        let live = self.reachable();
        let mut marked = vec![false; self.nodes.len()];
        for &id in &live {
            marked[id as usize] = true;
        }
        self.free.clear();
        for id in 1..self.nodes.len() {
            if !marked[id] {
                self.nodes[id].level = DEAD;
                self.free.push(id as NodeId);
            }
        }
        self.unique.clear();
        for &id in &live {
            let n = self.nodes[id as usize];
            let (a, b) = (qc(n.e[0].w), qc(n.e[1].w));
            self.unique
                .insert((n.level, [a.0, a.1, b.0, b.1], [n.e[0].node, n.e[1].node]), id);
        }
        self.above_cache.clear();
        self.pair_cache.clear();
        self.add_cache.clear();
        self.stats.gc_runs += 1;
    }

    /// Squared norm of the sub-vector below each reachable node.
    fn subtree_norms(&self) -> FxHashMap<NodeId, f64> {
        let mut memo = FxHashMap::default();
        memo.insert(TERMINAL, 1.0);
        let mut order = self.reachable();
        order.sort_by_key(|&id| self.nodes[id as usize].level);
        for id in order {
            let n = &self.nodes[id as usize];
            let v: f64 =
                n.e.iter()
                    .filter(|e| !e.is_zero())
                    .map(|e| e.w.norm_sqr() * memo[&e.node])
                    .sum();
            memo.insert(id, v);
        }
        memo
    }

    /// Checks the ordering, reduction and normalization invariants of every
    /// reachable node; returns a description of the first violation.
    pub fn audit(&self) -> Result<(), String> {
        for id in self.reachable() {
            let n = &self.nodes[id as usize];
            if n.level == DEAD {
                return Err(format!("node {id} is reachable but freed"));
            }
            if n.e.iter().all(Edge::is_zero) {
                return Err(format!("node {id} has two zero edges"));
            }
            for e in n.e {
                if e.is_zero() {
                    continue;
                }
                let child_level = if e.node == TERMINAL {
                    -1
                } else {
                    self.nodes[e.node as usize].level as i64
                };
                if child_level != n.level as i64 - 1 {
                    return Err(format!("node {id} at level {} has child at {child_level}", n.level));
                }
                if e.w.norm() > 1.0 + 1e-12 {
                    return Err(format!("node {id} has edge weight {}", e.w.norm()));
                }
            }
            if !n.e.iter().any(|e| e.w == ONE) {
                return Err(format!("node {id} is not normalized"));
            }
        }
        Ok(())
    }
}

impl QuantumState for DdState {
    fn backend(&self) -> BackendKind {
        BackendKind::Dd
    }

    fn num_qubits(&self) -> usize {
        self.n
    }

    fn apply(&mut self, gate: &GateApp) {
        let controls = gate.control_values();
        let x = GateKind::PauliX.target_matrix().unwrap();
        match gate.kind {
            GateKind::Swap | GateKind::ControlledSwap => {
                let (a, b) = (gate.targets[0], gate.targets[1]);
                let mut inner = controls.clone();
                inner.push((a, true));
                self.apply_controlled(&[(b, true)], a, x);
                self.apply_controlled(&inner, b, x);
                self.apply_controlled(&[(b, true)], a, x);
            }
            kind => self.apply_controlled(&controls, gate.targets[0], kind.target_matrix().unwrap()),
        }
    }

    fn amplitude(&self, index: u128) -> Complex64 {
        let mut e = self.root;
        let mut w = e.w;
        for lv in (0..self.n).rev() {
            if e.is_zero() {
                return ZERO;
            }
            e = self.nodes[e.node as usize].e[((index >> lv) & 1) as usize];
            w *= e.w;
        }
        w
    }

    fn norm_sqr(&self) -> f64 {
        self.probability(&[])
    }

    fn marginal(&self, qubits: &[usize]) -> BTreeMap<u128, f64> {
        let mut pos = vec![None; self.n];
        for (i, &q) in qubits.iter().enumerate() {
            pos[q] = Some(i);
        }
        let mut memo: FxHashMap<NodeId, BTreeMap<u128, f64>> = FxHashMap::default();
        memo.insert(TERMINAL, [(0u128, 1.0)].into_iter().collect());
        let mut order = self.reachable();
        order.sort_by_key(|&id| self.nodes[id as usize].level);
        for id in order {
            let n = self.nodes[id as usize];
            let mut out = BTreeMap::new();
            for (bit, e) in n.e.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                let add = match pos[n.level as usize] {
                    Some(i) if bit == 1 => 1u128 << i,
                    _ => 0,
                };
                let p = e.w.norm_sqr();
                for (&k, &v) in &memo[&e.node] {
                    *out.entry(k | add).or_insert(0.0) += p * v;
                }
            }
            memo.insert(id, out);
        }
        if self.root.is_zero() {
            return BTreeMap::new();
        }
        let scale = self.root.w.norm_sqr();
        memo.remove(&self.root.node)
            .unwrap()
            .into_iter()
            .filter(|(_, p)| *p > 0.0)
            .map(|(k, p)| (k, p * scale))
            .collect()
    }

    fn probability(&self, assignment: &[(usize, bool)]) -> f64 {
        let mut want = vec![None; self.n];
        for &(q, v) in assignment {
            want[q] = Some(v);
        }
        let mut memo: FxHashMap<NodeId, f64> = FxHashMap::default();
        memo.insert(TERMINAL, 1.0);
        let mut order = self.reachable();
        order.sort_by_key(|&id| self.nodes[id as usize].level);
        for id in order {
            let n = self.nodes[id as usize];
            let v: f64 = (0..2)
                .filter(|&b| want[n.level as usize].is_none_or(|v| v == (b == 1)))
                .filter(|&b| !n.e[b].is_zero())
                .map(|b| n.e[b].w.norm_sqr() * memo[&n.e[b].node])
                .sum();
            memo.insert(id, v);
        }
        if self.root.is_zero() {
            return 0.0;
        }
        self.root.w.norm_sqr() * memo[&self.root.node]
    }

    /// Top-down sampling: each branch is taken with probability proportional
    /// to its weighted subtree norm.
    fn sample(&self, qubits: &[usize], shots: usize, seed: u64) -> Counts {
        let norms = self.subtree_norms();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = Counts::new();
        if self.root.is_zero() {
            return counts;
        }
        for _ in 0..shots {
            let mut e = self.root;
            let mut index = 0u128;
            for lv in (0..self.n).rev() {
                let n = &self.nodes[e.node as usize];
                let p = |b: usize| {
                    let c = n.e[b];
                    if c.is_zero() {
                        0.0
                    } else {
                        c.w.norm_sqr() * norms[&c.node]
                    }
                };
                let (p0, p1) = (p(0), p(1));
                let bit = usize::from(rng.gen::<f64>() * (p0 + p1) >= p0);
                index |= (bit as u128) << lv;
                e = n.e[bit];
            }
            *counts.entry(super::extract_bits(index, qubits)).or_insert(0) += 1;
        }
        counts
    }

    fn dd_stats(&self) -> Option<DdStats> {
        Some(self.stats())
    }
}
