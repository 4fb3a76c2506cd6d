//! DNA sequences and their basis-state loaders.
//!
//! Each symbol takes two qubits. Symbol slot `j` of a data register occupies
//! register bits `2j` (low code bit) and `2j + 1` (high code bit).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{ceil_log2, Circuit, GateApp, QubitRange, RegisterLayout};
use crate::error::{CircuitError, SequenceError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Base {
    A,
    T,
    C,
    G,
}

impl Base {
    pub const ALL: [Base; 4] = [Base::A, Base::T, Base::C, Base::G];

    /// Two-bit code: A=00, T=01, C=10, G=11.
    pub fn code(self) -> u8 {
        match self {
            Base::A => 0b00,
            Base::T => 0b01,
            Base::C => 0b10,
            Base::G => 0b11,
        }
    }

    pub fn from_code(code: u8) -> Base {
        Base::ALL[(code & 3) as usize]
    }

    pub fn from_char(c: char) -> Option<Base> {
        match c.to_ascii_uppercase() {
            'A' => Some(Base::A),
            'T' => Some(Base::T),
            'C' => Some(Base::C),
            'G' => Some(Base::G),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Base::A => 'A',
            Base::T => 'T',
            Base::C => 'C',
            Base::G => 'G',
        }
    }
}

/// Two-bit code of a symbol character.
pub fn encode_symbol(c: char) -> Result<u8, SequenceError> {
    Base::from_char(c)
        .map(Base::code)
        .ok_or(SequenceError::InvalidSymbol { line: 0, symbol: c })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DnaSequence {
    symbols: Vec<Base>,
}

impl DnaSequence {
    pub fn new(symbols: Vec<Base>) -> Result<Self, SequenceError> {
        if symbols.is_empty() {
            return Err(SequenceError::Empty { line: 0 });
        }
        Ok(DnaSequence { symbols })
    }

    fn parse_line(s: &str, line: usize) -> Result<Self, SequenceError> {
        let symbols = s
            .chars()
            .map(|c| Base::from_char(c).ok_or(SequenceError::InvalidSymbol { line, symbol: c }))
            .collect::<Result<Vec<_>, _>>()?;
        if symbols.is_empty() {
            return Err(SequenceError::Empty { line });
        }
        Ok(DnaSequence { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Base] {
        &self.symbols
    }

    /// Data-register value of the sequence (bit `2j` = low bit of symbol `j`).
    pub fn encoded(&self) -> u128 {
        assert!(self.len() <= 64, "sequence too long for a u128 encoding");
        self.symbols
            .iter()
            .enumerate()
            .fold(0u128, |acc, (j, b)| acc | (b.code() as u128) << (2 * j))
    }

    /// Inverse of [`DnaSequence::encoded`] for a sequence of length `n`.
    pub fn decode(value: u128, n: usize) -> DnaSequence {
        let symbols = (0..n)
            .map(|j| Base::from_code(((value >> (2 * j)) & 3) as u8))
            .collect();
        DnaSequence { symbols }
    }

    /// Data-register bits, least significant first.
    pub fn bits(&self) -> Vec<bool> {
        self.symbols
            .iter()
            .flat_map(|b| [b.code() & 1 == 1, b.code() & 2 == 2])
            .collect()
    }

    pub fn popcount(&self) -> usize {
        self.bits().iter().filter(|b| **b).count()
    }
}

impl FromStr for DnaSequence {
    type Err = SequenceError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DnaSequence::parse_line(s.trim(), 1)
    }
}

impl fmt::Display for DnaSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.symbols.iter().try_for_each(|b| write!(f, "{}", b.to_char()))
    }
}

/// `M >= 1` sequences of one common length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceSet {
    seqs: Vec<DnaSequence>,
}

impl SequenceSet {
    pub fn new(seqs: Vec<DnaSequence>) -> Result<Self, SequenceError> {
        let first = seqs.first().ok_or(SequenceError::NoSequences)?;
        let n = first.len();
        if let Some((index, s)) = seqs.iter().enumerate().find(|(_, s)| s.len() != n) {
            return Err(SequenceError::LengthMismatch {
                index,
                expected: n,
                got: s.len(),
            });
        }
        Ok(SequenceSet { seqs })
    }

    pub fn from_strs(strs: &[&str]) -> Result<Self, SequenceError> {
        let seqs = strs
            .iter()
            .enumerate()
            .map(|(i, s)| DnaSequence::parse_line(s, i + 1))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(seqs)
    }

    /// `m` uniformly random sequences of length `n`.
    pub fn random(n: usize, m: usize, seed: u64) -> Result<Self, SequenceError> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let seqs = (0..m)
            .map(|_| DnaSequence::new((0..n).map(|_| Base::from_code(rng.gen_range(0..4))).collect()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(seqs)
    }

    /// Parses either one sequence per line or FASTA (detected by a first
    /// non-blank line starting with `>`).
    pub fn parse(text: &str) -> Result<Self, SequenceError> {
        let fasta = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty())
            .is_some_and(|l| l.starts_with('>'));
        if fasta {
            return Self::parse_fasta(text);
        }
        let seqs = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| DnaSequence::parse_line(l.trim(), i + 1))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(seqs)
    }

    fn parse_fasta(text: &str) -> Result<Self, SequenceError> {
        let mut seqs = Vec::new();
        let mut current: Option<(usize, Vec<Base>)> = None;
        let finish = |cur: Option<(usize, Vec<Base>)>, seqs: &mut Vec<DnaSequence>| match cur {
            Some((line, syms)) if syms.is_empty() => Err(SequenceError::Empty { line }),
            Some((_, symbols)) => {
                seqs.push(DnaSequence { symbols });
                Ok(())
            }
            None => Ok(()),
        };
        for (i, l) in text.lines().enumerate() {
            let l = l.trim();
            if l.is_empty() || l.starts_with(';') {
                continue;
            }
            if l.starts_with('>') {
                finish(current.take(), &mut seqs)?;
                current = Some((i + 1, Vec::new()));
                continue;
            }
            let (_, syms) = current.get_or_insert((i + 1, Vec::new()));
            for c in l.chars() {
                syms.push(Base::from_char(c).ok_or(SequenceError::InvalidSymbol { line: i + 1, symbol: c })?);
            }
        }
        finish(current, &mut seqs)?;
        Self::new(seqs)
    }

    pub fn len(&self) -> usize {
        self.seqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seqs.is_empty()
    }

    pub fn seq_len(&self) -> usize {
        self.seqs[0].len()
    }

    pub fn sequences(&self) -> &[DnaSequence] {
        &self.seqs
    }

    pub fn get(&self, index: usize) -> Result<&DnaSequence, SequenceError> {
        self.seqs.get(index).ok_or(SequenceError::IndexOutOfRange {
            index,
            count: self.seqs.len(),
        })
    }
}

/// X gates writing `seq` into `target` from |0…0⟩.
pub fn load_sequence(layout: &RegisterLayout, seq: &DnaSequence, target: QubitRange) -> Result<Circuit, CircuitError> {
    if target.len != 2 * seq.len() {
        return Err(CircuitError::RegisterWidth {
            expected: 2 * seq.len(),
            got: target.len,
        });
    }
    let mut c = Circuit::new(layout.clone());
    for (bit, set) in seq.bits().into_iter().enumerate() {
        if set {
            c.try_push(GateApp::x(target.qubit(bit)))?;
        }
    }
    Ok(c)
}

/// Address-controlled loader: |a⟩|0⟩ ↦ |a⟩|D[a]⟩ for every `a < M`.
///
/// One MCX per set data bit, with 0-controls on the clear address bits.
/// With a zero-width address register (M = 1) the gates are plain X.
pub fn build_qrom(
    layout: &RegisterLayout,
    set: &SequenceSet,
    addr: QubitRange,
    data: QubitRange,
) -> Result<Circuit, CircuitError> {
    let a = ceil_log2(set.len());
    if addr.len != a {
        return Err(CircuitError::RegisterWidth {
            expected: a,
            got: addr.len,
        });
    }
    if data.len != 2 * set.seq_len() {
        return Err(CircuitError::RegisterWidth {
            expected: 2 * set.seq_len(),
            got: data.len,
        });
    }
    let mut c = Circuit::new(layout.clone());
    let controls: Vec<usize> = addr.qubits().collect();
    for (index, seq) in set.sequences().iter().enumerate() {
        let negated: Vec<usize> = (0..a)
            .filter(|b| (index >> b) & 1 == 0)
            .map(|b| addr.qubit(b))
            .collect();
        for (bit, on) in seq.bits().into_iter().enumerate() {
            if !on {
                continue;
            }
            let t = data.qubit(bit);
            let g = if controls.is_empty() {
                GateApp::x(t)
            } else {
                GateApp::mcx(&controls, t).with_negated(&negated)
            };
            c.try_push(g)?;
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_codes() {
        assert_eq!(encode_symbol('A').unwrap(), 0b00);
        assert_eq!(encode_symbol('T').unwrap(), 0b01);
        assert_eq!(encode_symbol('C').unwrap(), 0b10);
        assert_eq!(encode_symbol('G').unwrap(), 0b11);
        assert!(matches!(
            encode_symbol('U'),
            Err(SequenceError::InvalidSymbol { symbol: 'U', .. })
        ));
    }

    #[test]
    fn encoded_value_is_slot_ordered() {
        let s: DnaSequence = "ATGC".parse().unwrap();
        // slots 0..4 = 00, 01, 11, 10
        assert_eq!(s.encoded(), 0b10_11_01_00);
        assert_eq!(DnaSequence::decode(s.encoded(), 4), s);
        assert_eq!(s.popcount(), 4);
    }

    #[test]
    fn load_all_a_is_empty() {
        let l = RegisterLayout::plain(8);
        let s: DnaSequence = "AAAA".parse().unwrap();
        assert!(load_sequence(&l, &s, QubitRange::new(0, 8)).unwrap().is_empty());
        assert!(load_sequence(&l, &s, QubitRange::new(0, 6)).is_err());
    }

    #[test]
    fn load_g_sets_both_bits() {
        let l = RegisterLayout::plain(2);
        let s: DnaSequence = "G".parse().unwrap();
        let c = load_sequence(&l, &s, QubitRange::new(0, 2)).unwrap();
        assert_eq!(c.gates(), &[GateApp::x(0), GateApp::x(1)]);
    }

    #[test]
    fn plain_and_fasta_parsing() {
        let set = SequenceSet::parse("ACGT\n\nttga\n").unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(set.get(1).unwrap().to_string(), "TTGA");
        let fa = SequenceSet::parse(">one\nAC\nGT\n>two\nCCCC\n").unwrap();
        assert_eq!(fa.sequences()[0].to_string(), "ACGT");
        assert_eq!(fa.len(), 2);
        assert_eq!(
            SequenceSet::parse("ACGT\nACXT\n"),
            Err(SequenceError::InvalidSymbol { line: 2, symbol: 'X' })
        );
        assert!(matches!(
            SequenceSet::parse("ACGT\nACG\n"),
            Err(SequenceError::LengthMismatch { index: 1, .. })
        ));
        assert_eq!(SequenceSet::parse("\n"), Err(SequenceError::NoSequences));
        assert!(matches!(
            SequenceSet::parse(">a\n>b\nAC\n"),
            Err(SequenceError::Empty { line: 1 })
        ));
        assert!(set.get(2).is_err());
    }

    #[test]
    fn qrom_single_entry_has_no_controls() {
        let set = SequenceSet::from_strs(&["GT"]).unwrap();
        let l = RegisterLayout::plain(4);
        let c = build_qrom(&l, &set, QubitRange::new(4, 0), QubitRange::new(0, 4)).unwrap();
        assert_eq!(c.gates(), &[GateApp::x(0), GateApp::x(1), GateApp::x(2)]);
    }

    #[test]
    fn qrom_gate_count_is_total_popcount() {
        let set = SequenceSet::from_strs(&["ATGC", "GGGG", "AAAA", "CATT"]).unwrap();
        let l = RegisterLayout::plain(10);
        let c = build_qrom(&l, &set, QubitRange::new(8, 2), QubitRange::new(0, 8)).unwrap();
        let pop: usize = set.sequences().iter().map(DnaSequence::popcount).sum();
        assert_eq!(c.len(), pop);
        assert!(c.len() <= 2 * 4 * 4);
        // address 0 entry (ATGC) has both address bits negated
        assert_eq!(c.gates()[0].negated, vec![8, 9]);
    }
}
