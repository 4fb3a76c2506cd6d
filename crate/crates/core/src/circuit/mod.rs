//! Gate-level circuit representation.
//!
//! A [`Circuit`] is an ordered list of [`GateApp`]s over `width` qubits, tagged
//! with the [`RegisterLayout`] that assigns qubit ranges to roles. Qubit 0 is
//! the least-significant bit of a basis-state index everywhere in this crate.

mod layout;
mod resources;
mod text;
mod transpile;

use std::f64::consts::PI;

use num_complex::Complex64;

pub use layout::{ceil_log2, LayoutMode, QubitRange, RegisterLayout, Role, COMPARE_ANCILLAS};
pub use resources::{count_resources, depth, ResourceReport};
pub use text::{parse_circuit, write_circuit};
pub use transpile::{transpile, Basis, McxMode};

use crate::error::CircuitError;

/// 2x2 complex matrix, row-major.
pub type Mat2 = [[Complex64; 2]; 2];

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    PauliX,
    Hadamard,
    /// Generic single-qubit rotation `U(theta, phi, lambda)`.
    U {
        theta: f64,
        phi: f64,
        lambda: f64,
    },
    ControlledX,
    Toffoli,
    MultiControlledX,
    Swap,
    ControlledSwap,
    Phase(f64),
    ControlledPhase(f64),
    MultiControlledZ,
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::PauliX => "X",
            GateKind::Hadamard => "H",
            GateKind::U { .. } => "U",
            GateKind::ControlledX => "CX",
            GateKind::Toffoli => "CCX",
            GateKind::MultiControlledX => "MCX",
            GateKind::Swap => "SWAP",
            GateKind::ControlledSwap => "CSWAP",
            GateKind::Phase(_) => "P",
            GateKind::ControlledPhase(_) => "CP",
            GateKind::MultiControlledZ => "MCZ",
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            GateKind::U { theta, phi, lambda } => vec![theta, phi, lambda],
            GateKind::Phase(a) | GateKind::ControlledPhase(a) => vec![a],
            _ => Vec::new(),
        }
    }

    pub fn from_name(name: &str, params: &[f64]) -> Option<GateKind> {
        let kind = match (name, params.len()) {
            ("X", 0) => GateKind::PauliX,
            ("H", 0) => GateKind::Hadamard,
            ("U", 3) => GateKind::U {
                theta: params[0],
                phi: params[1],
                lambda: params[2],
            },
            ("CX", 0) => GateKind::ControlledX,
            ("CCX", 0) => GateKind::Toffoli,
            ("MCX", 0) => GateKind::MultiControlledX,
            ("SWAP", 0) => GateKind::Swap,
            ("CSWAP", 0) => GateKind::ControlledSwap,
            ("P", 1) => GateKind::Phase(params[0]),
            ("CP", 1) => GateKind::ControlledPhase(params[0]),
            ("MCZ", 0) => GateKind::MultiControlledZ,
            _ => return None,
        };
        Some(kind)
    }

    pub fn adjoint(&self) -> GateKind {
        match *self {
            GateKind::U { theta, phi, lambda } => GateKind::U {
                theta: -theta,
                phi: -lambda,
                lambda: -phi,
            },
            GateKind::Phase(a) => GateKind::Phase(-a),
            GateKind::ControlledPhase(a) => GateKind::ControlledPhase(-a),
            other => other,
        }
    }

    /// The 2x2 matrix applied to the (single) target when all controls are
    /// satisfied. `None` for the swap family.
    pub fn target_matrix(&self) -> Option<Mat2> {
        let m = match *self {
            GateKind::PauliX | GateKind::ControlledX | GateKind::Toffoli | GateKind::MultiControlledX => mat_x(),
            GateKind::Hadamard => mat_h(),
            GateKind::U { theta, phi, lambda } => mat_u(theta, phi, lambda),
            GateKind::Phase(a) | GateKind::ControlledPhase(a) => mat_phase(a),
            GateKind::MultiControlledZ => mat_phase(PI),
            GateKind::Swap | GateKind::ControlledSwap => return None,
        };
        Some(m)
    }

    fn arity(&self) -> (std::ops::RangeInclusive<usize>, usize) {
        match self {
            GateKind::PauliX | GateKind::Hadamard | GateKind::U { .. } | GateKind::Phase(_) => (0..=0, 1),
            GateKind::ControlledX | GateKind::ControlledPhase(_) => (1..=1, 1),
            GateKind::Toffoli => (2..=2, 1),
            GateKind::MultiControlledX | GateKind::MultiControlledZ => (1..=usize::MAX, 1),
            GateKind::Swap => (0..=0, 2),
            GateKind::ControlledSwap => (1..=1, 2),
        }
    }
}

pub fn mat_x() -> Mat2 {
    let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    [[o, l], [l, o]]
}

pub fn mat_h() -> Mat2 {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[s, s], [s, -s]]
}

pub fn mat_phase(a: f64) -> Mat2 {
    let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    [[l, o], [o, Complex64::from_polar(1.0, a)]]
}

pub fn mat_u(theta: f64, phi: f64, lambda: f64) -> Mat2 {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    [
        [Complex64::new(c, 0.0), -Complex64::from_polar(s, lambda)],
        [Complex64::from_polar(s, phi), Complex64::from_polar(c, phi + lambda)],
    ]
}

/// One gate applied to concrete qubits.
///
/// `negated` lists the controls that fire on |0⟩ instead of |1⟩; it is always
/// a subset of `controls`.
#[derive(Clone, Debug, PartialEq)]
pub struct GateApp {
    pub kind: GateKind,
    pub controls: Vec<usize>,
    pub targets: Vec<usize>,
    pub negated: Vec<usize>,
}

impl GateApp {
    fn raw(kind: GateKind, controls: Vec<usize>, targets: Vec<usize>) -> Self {
        GateApp {
            kind,
            controls,
            targets,
            negated: Vec::new(),
        }
    }

    pub fn x(q: usize) -> Self {
        Self::raw(GateKind::PauliX, vec![], vec![q])
    }
    pub fn h(q: usize) -> Self {
        Self::raw(GateKind::Hadamard, vec![], vec![q])
    }
    pub fn u(theta: f64, phi: f64, lambda: f64, q: usize) -> Self {
        Self::raw(GateKind::U { theta, phi, lambda }, vec![], vec![q])
    }
    pub fn phase(angle: f64, q: usize) -> Self {
        Self::raw(GateKind::Phase(angle), vec![], vec![q])
    }
    pub fn cx(c: usize, t: usize) -> Self {
        Self::raw(GateKind::ControlledX, vec![c], vec![t])
    }
    pub fn ccx(c0: usize, c1: usize, t: usize) -> Self {
        Self::raw(GateKind::Toffoli, vec![c0, c1], vec![t])
    }
    pub fn mcx(controls: &[usize], t: usize) -> Self {
        Self::raw(GateKind::MultiControlledX, controls.to_vec(), vec![t])
    }
    pub fn swap(a: usize, b: usize) -> Self {
        Self::raw(GateKind::Swap, vec![], vec![a, b])
    }
    pub fn cswap(c: usize, a: usize, b: usize) -> Self {
        Self::raw(GateKind::ControlledSwap, vec![c], vec![a, b])
    }
    pub fn cphase(angle: f64, c: usize, t: usize) -> Self {
        Self::raw(GateKind::ControlledPhase(angle), vec![c], vec![t])
    }
    pub fn mcz(controls: &[usize], t: usize) -> Self {
        Self::raw(GateKind::MultiControlledZ, controls.to_vec(), vec![t])
    }

    /// Marks the given controls as 0-controls.
    pub fn with_negated(mut self, negated: &[usize]) -> Self {
        self.negated = negated.to_vec();
        self.negated.sort_unstable();
        self.negated.dedup();
        self
    }

    pub fn adjoint(&self) -> GateApp {
        GateApp {
            kind: self.kind.adjoint(),
            ..self.clone()
        }
    }

    /// Every qubit the gate touches, controls first.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls.iter().chain(self.targets.iter()).copied()
    }

    pub fn is_negated(&self, q: usize) -> bool {
        self.negated.contains(&q)
    }

    /// `(qubit, required value)` for every control.
    pub fn control_values(&self) -> Vec<(usize, bool)> {
        self.controls.iter().map(|&c| (c, !self.is_negated(c))).collect()
    }

    pub fn validate(&self, width: usize) -> Result<(), CircuitError> {
        let (ctrl_range, ntargets) = self.kind.arity();
        if !ctrl_range.contains(&self.controls.len()) || self.targets.len() != ntargets {
            return Err(CircuitError::Arity {
                kind: self.kind.name(),
                controls: self.controls.len(),
                targets: self.targets.len(),
            });
        }
        for p in self.kind.params() {
            if !p.is_finite() {
                return Err(CircuitError::NonFiniteAngle(self.kind.name()));
            }
        }
        let mut seen = Vec::with_capacity(self.controls.len() + self.targets.len());
        for q in self.qubits() {
            if q >= width {
                return Err(CircuitError::QubitOutOfRange { qubit: q, width });
            }
            if seen.contains(&q) {
                return Err(CircuitError::RepeatedQubit(q));
            }
            seen.push(q);
        }
        if let Some(&q) = self.negated.iter().find(|q| !self.controls.contains(q)) {
            return Err(CircuitError::NegatedNotControl(q));
        }
        Ok(())
    }
}

/// An ordered gate list over a fixed register layout.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    width: usize,
    gates: Vec<GateApp>,
    layout: RegisterLayout,
}

impl Circuit {
    pub fn new(layout: RegisterLayout) -> Self {
        Circuit {
            width: layout.width(),
            gates: Vec::new(),
            layout,
        }
    }

    /// A circuit over `width` anonymous qubits.
    pub fn with_width(width: usize) -> Self {
        Self::new(RegisterLayout::plain(width))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[GateApp] {
        &self.gates
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Appends a gate.
    ///
    /// Panics if the gate is malformed for this circuit; use
    /// [`Circuit::try_push`] for untrusted input.
    pub fn push(&mut self, gate: GateApp) {
        if let Err(e) = gate.validate(self.width) {
            panic!("invalid gate {gate:?}: {e}");
        }
        self.gates.push(gate);
    }

    pub fn try_push(&mut self, gate: GateApp) -> Result<(), CircuitError> {
        gate.validate(self.width)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend<I: IntoIterator<Item = GateApp>>(&mut self, gates: I) {
        for g in gates {
            self.push(g);
        }
    }

    /// Appends all gates of `other`, which must share this circuit's layout.
    pub fn append(&mut self, other: &Circuit) -> Result<(), CircuitError> {
        if self.width != other.width || self.layout != other.layout {
            return Err(CircuitError::LayoutMismatch {
                left: self.width,
                right: other.width,
            });
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    /// Gates of `a` followed by gates of `b`.
    pub fn compose(a: &Circuit, b: &Circuit) -> Result<Circuit, CircuitError> {
        let mut out = a.clone();
        out.append(b)?;
        Ok(out)
    }

    /// Reversed gate order with every gate replaced by its adjoint.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            width: self.width,
            gates: self.gates.iter().rev().map(GateApp::adjoint).collect(),
            layout: self.layout.clone(),
        }
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        self.layout.validate()?;
        if self.layout.width() != self.width {
            return Err(CircuitError::LayoutMismatch {
                left: self.width,
                right: self.layout.width(),
            });
        }
        self.gates.iter().try_for_each(|g| g.validate(self.width))
    }
}
