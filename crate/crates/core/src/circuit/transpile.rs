//! Lowering of logical circuits to the `{u, cx}` and `{u, cx, mcx}` bases.
//!
//! Multi-controlled X gates with `n` controls are synthesized as follows:
//!
//! * `n <= 2`: CX, or the standard 6-CX Toffoli network.
//! * `n = 3, 4`: phase polynomial over all parities, Gray-code ordered
//!   (`2^(n+1) - 2` CX).
//! * `n >= 5`, `no_ancilla`: the controls are split in two halves around one
//!   borrowed qubit that is not touched by the gate. The borrowed qubit may be
//!   in any state and is restored. Each half is a Toffoli ladder that uses the
//!   other half as dirty workspace. If the circuit has no idle qubit at all,
//!   a root-of-X recursion with quadratic cost is used instead.
//! * `n >= 5`, `with_ancilla`: the same split, but around one appended clean
//!   ancilla, which needs three half-size gates instead of four.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{Circuit, GateApp, GateKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    #[serde(rename = "u_cx")]
    UCx,
    #[serde(rename = "u_cx_mcx")]
    UCxMcx,
}

impl Basis {
    pub fn name(&self) -> &'static str {
        match self {
            Basis::UCx => "u_cx",
            Basis::UCxMcx => "u_cx_mcx",
        }
    }
}

impl std::str::FromStr for Basis {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "u_cx" => Ok(Basis::UCx),
            "u_cx_mcx" => Ok(Basis::UCxMcx),
            other => Err(format!("unknown basis `{other}` (expected u_cx or u_cx_mcx)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum McxMode {
    #[serde(rename = "no_ancilla")]
    NoAncilla,
    #[serde(rename = "with_ancilla")]
    WithAncilla,
}

impl McxMode {
    pub fn name(&self) -> &'static str {
        match self {
            McxMode::NoAncilla => "no_ancilla",
            McxMode::WithAncilla => "with_ancilla",
        }
    }
}

impl std::str::FromStr for McxMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "no_ancilla" => Ok(McxMode::NoAncilla),
            "with_ancilla" => Ok(McxMode::WithAncilla),
            other => Err(format!(
                "unknown mcx mode `{other}` (expected no_ancilla or with_ancilla)"
            )),
        }
    }
}

/// Rewrites `c` so that it only contains gates of `basis`.
///
/// In `with_ancilla` mode the output has one extra qubit (index
/// `c.width()`), registered as an ancilla; it starts and ends in |0⟩.
pub fn transpile(c: &Circuit, basis: Basis, mode: McxMode) -> Circuit {
    let (layout, ancilla) = match mode {
        McxMode::NoAncilla => (c.layout().clone(), None),
        McxMode::WithAncilla => (c.layout().with_extra_ancillas(1), Some(c.width())),
    };
    let mut em = Emitter {
        gates: Vec::with_capacity(c.len() * 8),
        width: c.width(),
        keep_mcx: basis == Basis::UCxMcx,
        ancilla,
    };
    for g in c.gates() {
        em.lower(g);
    }
    let mut out = Circuit::new(layout);
    out.extend(em.gates);
    out
}

struct Emitter {
    gates: Vec<GateApp>,
    /// Width of the source circuit (the ancilla, if any, sits above it).
    width: usize,
    keep_mcx: bool,
    ancilla: Option<usize>,
}

impl Emitter {
    fn lower(&mut self, g: &GateApp) {
        for &q in &g.negated {
            self.x(q);
        }
        let c = &g.controls;
        let t = &g.targets;
        match g.kind {
            GateKind::PauliX => self.x(t[0]),
            GateKind::Hadamard => self.h(t[0]),
            GateKind::U { theta, phi, lambda } => self.u(theta, phi, lambda, t[0]),
            GateKind::Phase(a) => self.p(a, t[0]),
            GateKind::ControlledX => self.cx(c[0], t[0]),
            GateKind::Toffoli => self.ccx(c[0], c[1], t[0]),
            GateKind::MultiControlledX => self.mcx(c, t[0]),
            GateKind::Swap => {
                self.cx(t[0], t[1]);
                self.cx(t[1], t[0]);
                self.cx(t[0], t[1]);
            }
            GateKind::ControlledSwap => {
                self.cx(t[1], t[0]);
                self.ccx(c[0], t[0], t[1]);
                self.cx(t[1], t[0]);
            }
            GateKind::ControlledPhase(a) => self.cp(a, c[0], t[0]),
            GateKind::MultiControlledZ => self.mcz(c, t[0]),
        }
        for &q in &g.negated {
            self.x(q);
        }
    }

    fn u(&mut self, theta: f64, phi: f64, lambda: f64, q: usize) {
        self.gates.push(GateApp::u(theta, phi, lambda, q));
    }

    fn x(&mut self, q: usize) {
        self.u(PI, 0.0, PI, q);
    }

    fn h(&mut self, q: usize) {
        self.u(PI / 2.0, 0.0, PI, q);
    }

    fn p(&mut self, a: f64, q: usize) {
        self.u(0.0, 0.0, a, q);
    }

    fn cx(&mut self, c: usize, t: usize) {
        self.gates.push(GateApp::cx(c, t));
    }

    fn cp(&mut self, a: f64, c: usize, t: usize) {
        self.p(a / 2.0, c);
        self.cx(c, t);
        self.p(-a / 2.0, t);
        self.cx(c, t);
        self.p(a / 2.0, t);
    }

    /// Six-CX Toffoli with T-gate phases.
    fn ccx(&mut self, a: usize, b: usize, t: usize) {
        let (tp, tm) = (PI / 4.0, -PI / 4.0);
        self.h(t);
        self.cx(b, t);
        self.p(tm, t);
        self.cx(a, t);
        self.p(tp, t);
        self.cx(b, t);
        self.p(tm, t);
        self.cx(a, t);
        self.p(tp, b);
        self.p(tp, t);
        self.h(t);
        self.cx(a, b);
        self.p(tp, a);
        self.p(tm, b);
        self.cx(a, b);
    }

    fn mcz(&mut self, controls: &[usize], t: usize) {
        if self.keep_mcx && controls.len() >= 3 {
            self.gates.push(GateApp::mcz(controls, t));
            return;
        }
        self.h(t);
        self.mcx(controls, t);
        self.h(t);
    }

    fn mcx(&mut self, controls: &[usize], t: usize) {
        let n = controls.len();
        if self.keep_mcx && n >= 3 {
            self.gates.push(GateApp::mcx(controls, t));
            return;
        }
        if n <= 4 {
            return self.mcx_small(controls, t);
        }
        if let Some(anc) = self.ancilla {
            let (a, b) = controls.split_at(n.div_ceil(2));
            let mut pool_a: Vec<usize> = b.to_vec();
            pool_a.push(t);
            let mut upper: Vec<usize> = b.to_vec();
            upper.push(anc);
            self.mcx_dirty(a, anc, &pool_a);
            self.mcx_dirty(&upper, t, a);
            self.mcx_dirty(a, anc, &pool_a);
            return;
        }
        match (0..self.width).find(|q| *q != t && !controls.contains(q)) {
            Some(borrowed) => self.mcx_dirty(controls, t, &[borrowed]),
            None => self.mcx_pow(controls, t, 1.0),
        }
    }

    fn mcx_small(&mut self, controls: &[usize], t: usize) {
        match controls.len() {
            0 => self.x(t),
            1 => self.cx(controls[0], t),
            2 => self.ccx(controls[0], controls[1], t),
            _ => {
                let mut qs = controls.to_vec();
                qs.push(t);
                self.h(t);
                self.mc_phase_gray(&qs, PI);
                self.h(t);
            }
        }
    }

    /// Multiplies the all-ones basis state of `qs` by `exp(i * angle)`.
    ///
    /// Uses `prod(x) = 2^(1-k) * sum_{S != {}} (-1)^(|S|+1) parity_S(x)`; the
    /// parities ending in qubit `h` are visited in Gray-code order so that
    /// each step costs one CX.
    fn mc_phase_gray(&mut self, qs: &[usize], angle: f64) {
        let k = qs.len();
        let base = angle / (1u64 << (k - 1)) as f64;
        for h in 0..k {
            let mut prev = 0usize;
            for step in 0..(1usize << h) {
                let gray = step ^ (step >> 1);
                if step > 0 {
                    let j = (gray ^ prev).trailing_zeros() as usize;
                    self.cx(qs[j], qs[h]);
                }
                let size = gray.count_ones() + 1;
                let sign = if size % 2 == 1 { 1.0 } else { -1.0 };
                self.p(sign * base, qs[h]);
                prev = gray;
            }
            if h > 0 {
                self.cx(qs[h - 1], qs[h]);
            }
        }
    }

    /// MCX using qubits of `pool` as dirty workspace.
    fn mcx_dirty(&mut self, controls: &[usize], t: usize, pool: &[usize]) {
        let m = controls.len();
        if m <= 4 {
            return self.mcx_small(controls, t);
        }
        if pool.len() >= m - 2 {
            return self.toffoli_ladder(controls, t, &pool[..m - 2]);
        }
        if let Some((&b, rest)) = pool.split_first() {
            let (a, bh) = controls.split_at(m.div_ceil(2));
            let mut pool_a: Vec<usize> = bh.iter().copied().chain([t]).chain(rest.iter().copied()).collect();
            pool_a.dedup();
            let mut upper: Vec<usize> = bh.to_vec();
            upper.push(b);
            let pool_b: Vec<usize> = a.iter().copied().chain(rest.iter().copied()).collect();
            for _ in 0..2 {
                self.mcx_dirty(a, b, &pool_a);
                self.mcx_dirty(&upper, t, &pool_b);
            }
            return;
        }
        self.mcx_pow(controls, t, 1.0);
    }

    /// `4(m-2)` Toffolis computing an `m`-controlled X with `m-2` dirty
    /// qubits, all of which are restored.
    fn toffoli_ladder(&mut self, c: &[usize], t: usize, a: &[usize]) {
        let m = c.len();
        debug_assert!(m >= 3 && a.len() == m - 2);
        let down = |em: &mut Self| {
            for i in (1..=m - 3).rev() {
                em.ccx(c[i + 1], a[i - 1], a[i]);
            }
        };
        let up = |em: &mut Self| {
            for i in 1..=m - 3 {
                em.ccx(c[i + 1], a[i - 1], a[i]);
            }
        };
        self.ccx(c[m - 1], a[m - 3], t);
        down(self);
        self.ccx(c[0], c[1], a[0]);
        up(self);
        self.ccx(c[m - 1], a[m - 3], t);
        down(self);
        self.ccx(c[0], c[1], a[0]);
        up(self);
    }

    /// Controlled `X^power` without any workspace outside the gate.
    fn mcx_pow(&mut self, controls: &[usize], t: usize, power: f64) {
        match controls.split_last() {
            None => {
                self.h(t);
                self.p(PI * power, t);
                self.h(t);
            }
            Some((&c, [])) => {
                self.h(t);
                self.cp(PI * power, c, t);
                self.h(t);
            }
            Some((&last, rest)) => {
                self.mcx_pow(&[last], t, power / 2.0);
                self.mcx_dirty(rest, last, &[t]);
                self.mcx_pow(&[last], t, -power / 2.0);
                self.mcx_dirty(rest, last, &[t]);
                self.mcx_pow(rest, t, power / 2.0);
            }
        }
    }
}
