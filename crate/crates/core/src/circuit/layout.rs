use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::CircuitError;

/// Contiguous block of qubits `[start, start + len)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QubitRange {
    pub start: usize,
    pub len: usize,
}

impl QubitRange {
    pub const fn new(start: usize, len: usize) -> Self {
        QubitRange { start, len }
    }

    pub fn end(&self) -> usize {
        self.start + self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The `i`-th qubit of the range (bit `i` of the register value).
    pub fn qubit(&self, i: usize) -> usize {
        assert!(i < self.len, "qubit {i} outside register of {} qubits", self.len);
        self.start + i
    }

    pub fn qubits(&self) -> std::ops::Range<usize> {
        self.start..self.end()
    }

    pub fn contains(&self, q: usize) -> bool {
        self.qubits().contains(&q)
    }

    /// Sub-range `[offset, offset + len)` relative to this range.
    pub fn slice(&self, offset: usize, len: usize) -> QubitRange {
        assert!(offset + len <= self.len);
        QubitRange::new(self.start + offset, len)
    }
}

/// What a register is used for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    DataX,
    DataY,
    AddrI,
    AddrJ,
    Shift,
    Sign,
    Mismatch,
    Distance,
    Phase,
    Ancilla,
    /// Anonymous qubits of a free-form circuit.
    Work,
}

impl Role {
    pub const ALL: [Role; 11] = [
        Role::DataX,
        Role::DataY,
        Role::AddrI,
        Role::AddrJ,
        Role::Shift,
        Role::Sign,
        Role::Mismatch,
        Role::Distance,
        Role::Phase,
        Role::Ancilla,
        Role::Work,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Role::DataX => "dataX",
            Role::DataY => "dataY",
            Role::AddrI => "addrI",
            Role::AddrJ => "addrJ",
            Role::Shift => "shift",
            Role::Sign => "sign",
            Role::Mismatch => "mismatch",
            Role::Distance => "distance",
            Role::Phase => "phase",
            Role::Ancilla => "ancilla",
            Role::Work => "work",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Role {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Role::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| CircuitError::UnknownRegister(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LayoutMode {
    /// Two fixed sequences; no address registers.
    Pairwise,
    /// `num_seqs` candidates selected by address registers `i` and `j`.
    Multi { num_seqs: usize },
    /// Free-form circuit without sequence registers.
    Plain,
}

/// `ceil(log2(x))`, with `ceil_log2(0) == ceil_log2(1) == 0`.
pub fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

/// Scratch qubits of the symbol comparison in multi-sequence layouts, shared
/// by all positions. Pairwise layouts compare in place and carry none.
pub const COMPARE_ANCILLAS: usize = 2;

/// Map from register roles to qubit ranges. Ranges are pairwise disjoint and
/// tile `[0, width)` in declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterLayout {
    mode: LayoutMode,
    seq_len: usize,
    registers: Vec<(Role, QubitRange)>,
}

impl RegisterLayout {
    fn build(mode: LayoutMode, seq_len: usize, sizes: &[(Role, usize)]) -> Self {
        let mut start = 0;
        let mut registers = Vec::new();
        for &(role, len) in sizes {
            if len == 0 {
                continue;
            }
            registers.push((role, QubitRange::new(start, len)));
            start += len;
        }
        RegisterLayout {
            mode,
            seq_len,
            registers,
        }
    }

    fn sequence_sizes(n: usize, addr: usize, ancillas: usize) -> Vec<(Role, usize)> {
        vec![
            (Role::DataX, 2 * n),
            (Role::DataY, 2 * n),
            (Role::AddrI, addr),
            (Role::AddrJ, addr),
            (Role::Shift, ceil_log2(n)),
            (Role::Sign, 1),
            (Role::Mismatch, n),
            (Role::Distance, ceil_log2(n + 1)),
            (Role::Phase, 1),
            (Role::Ancilla, ancillas),
        ]
    }

    /// Layout for comparing two fixed sequences of length `n`.
    pub fn pairwise(n: usize) -> Self {
        assert!(n >= 1, "sequence length must be positive");
        Self::build(LayoutMode::Pairwise, n, &Self::sequence_sizes(n, 0, 0))
    }

    /// Layout for `m` candidate sequences of length `n`.
    pub fn multi(n: usize, m: usize) -> Self {
        assert!(n >= 1 && m >= 1);
        Self::build(
            LayoutMode::Multi { num_seqs: m },
            n,
            &Self::sequence_sizes(n, ceil_log2(m), COMPARE_ANCILLAS),
        )
    }

    pub fn plain(width: usize) -> Self {
        Self::build(LayoutMode::Plain, 0, &[(Role::Work, width)])
    }

    pub(crate) fn from_parts(
        mode: LayoutMode,
        seq_len: usize,
        registers: Vec<(Role, QubitRange)>,
    ) -> Result<Self, CircuitError> {
        let layout = RegisterLayout {
            mode,
            seq_len,
            registers,
        };
        layout.validate()?;
        Ok(layout)
    }

    /// Same layout with `count` extra ancilla qubits appended at the top.
    pub fn with_extra_ancillas(&self, count: usize) -> Self {
        let mut out = self.clone();
        if count == 0 {
            return out;
        }
        let width = self.width();
        match out.registers.last_mut() {
            Some((Role::Ancilla, r)) => r.len += count,
            _ => out.registers.push((Role::Ancilla, QubitRange::new(width, count))),
        }
        out
    }

    /// Ancilla qubits the layout carries before any transpiler additions.
    pub fn base_ancillas(&self) -> usize {
        match self.mode {
            LayoutMode::Multi { .. } => COMPARE_ANCILLAS,
            _ => 0,
        }
    }

    pub fn mode(&self) -> LayoutMode {
        self.mode
    }

    /// Sequence length `N` (0 for plain layouts).
    pub fn seq_len(&self) -> usize {
        self.seq_len
    }

    pub fn num_seqs(&self) -> usize {
        match self.mode {
            LayoutMode::Multi { num_seqs } => num_seqs,
            LayoutMode::Pairwise => 2,
            LayoutMode::Plain => 0,
        }
    }

    pub fn width(&self) -> usize {
        self.registers.last().map_or(0, |(_, r)| r.end())
    }

    pub fn registers(&self) -> &[(Role, QubitRange)] {
        &self.registers
    }

    pub fn get(&self, role: Role) -> Option<QubitRange> {
        self.registers.iter().find(|(r, _)| *r == role).map(|(_, range)| *range)
    }

    /// Range for `role`; an empty range if the layout has no such register.
    pub fn reg(&self, role: Role) -> QubitRange {
        self.get(role).unwrap_or_else(|| QubitRange::new(self.width(), 0))
    }

    /// Search registers in order addrI, addrJ, shift, sign (the order used to
    /// build search-register values, least-significant first).
    pub fn search_registers(&self) -> Vec<(Role, QubitRange)> {
        [Role::AddrI, Role::AddrJ, Role::Shift, Role::Sign]
            .into_iter()
            .filter_map(|r| self.get(r).map(|range| (r, range)))
            .collect()
    }

    pub fn search_qubits(&self) -> Vec<usize> {
        self.search_registers()
            .into_iter()
            .flat_map(|(_, r)| r.qubits())
            .collect()
    }

    pub fn non_search_qubits(&self) -> Vec<usize> {
        let search = self.search_qubits();
        (0..self.width()).filter(|q| !search.contains(q)).collect()
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        let mut next = 0;
        for (role, range) in &self.registers {
            if range.start != next || range.len == 0 {
                return Err(CircuitError::BadLayout(format!(
                    "register {role} at {}..{} does not tile from {next}",
                    range.start,
                    range.end()
                )));
            }
            if self.registers.iter().filter(|(r, _)| r == role).count() > 1 {
                return Err(CircuitError::BadLayout(format!("duplicate register {role}")));
            }
            next = range.end();
        }
        if self.mode == LayoutMode::Pairwise && (self.get(Role::AddrI).is_some() || self.get(Role::AddrJ).is_some()) {
            return Err(CircuitError::BadLayout(
                "pairwise layout cannot carry address registers".into(),
            ));
        }
        Ok(())
    }
}
