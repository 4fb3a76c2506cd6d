//! Classical reference computations used to verify every quantum result.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::circuit::ceil_log2;
use crate::encoder::{Base, DnaSequence, SequenceSet};
use crate::error::SequenceError;

fn check_len(x: &DnaSequence, y: &DnaSequence) -> Result<(), SequenceError> {
    if x.len() != y.len() {
        return Err(SequenceError::LengthMismatch {
            index: 1,
            expected: x.len(),
            got: y.len(),
        });
    }
    Ok(())
}

/// Number of positions where `x` and `y` differ.
pub fn hamming(x: &DnaSequence, y: &DnaSequence) -> Result<usize, SequenceError> {
    check_len(x, y)?;
    Ok(x.symbols().iter().zip(y.symbols()).filter(|(a, b)| a != b).count())
}

/// Levenshtein distance with unit costs.
pub fn edit_distance(x: &[Base], y: &[Base]) -> usize {
    let mut prev: Vec<usize> = (0..=y.len()).collect();
    let mut cur = vec![0; y.len() + 1];
    for (i, a) in x.iter().enumerate() {
        cur[0] = i + 1;
        for (j, b) in y.iter().enumerate() {
            let sub = prev[j] + usize::from(a != b);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[y.len()]
}

/// Cyclic rotation moving the symbol at `p` to `(p + k) mod N`.
pub fn rotate(seq: &DnaSequence, k: usize) -> DnaSequence {
    let n = seq.len();
    let s = seq.symbols();
    let symbols = (0..n).map(|p| s[(p + n - k % n) % n]).collect();
    DnaSequence::new(symbols).expect("rotation keeps length")
}

/// `C[k]` = number of positions where `x` agrees with `rotate(y, k)`.
pub fn match_count_naive(x: &DnaSequence, y: &DnaSequence) -> Result<Vec<usize>, SequenceError> {
    check_len(x, y)?;
    let n = x.len();
    let (xs, ys) = (x.symbols(), y.symbols());
    Ok((0..n)
        .map(|k| (0..n).filter(|&p| xs[p] == ys[(p + n - k) % n]).count())
        .collect())
}

/// `C[k]` via per-symbol indicator channels and FFT circular correlation.
///
/// Power-of-two lengths are correlated directly at period `N`; other lengths
/// are zero-padded to a power of two `>= 2N - 1` and folded back mod `N`.
pub fn match_count_fft(x: &DnaSequence, y: &DnaSequence) -> Result<Vec<usize>, SequenceError> {
    check_len(x, y)?;
    let n = x.len();
    let len = if n.is_power_of_two() {
        n
    } else {
        (2 * n - 1).next_power_of_two()
    };
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);
    let mut acc = vec![0.0f64; len];
    for alpha in Base::ALL {
        let channel = |s: &DnaSequence| -> Vec<Complex<f64>> {
            let mut v: Vec<Complex<f64>> = s
                .symbols()
                .iter()
                .map(|&b| Complex::new(f64::from(u8::from(b == alpha)), 0.0))
                .collect();
            v.resize(len, Complex::new(0.0, 0.0));
            v
        };
        let mut u = channel(x);
        let mut v = channel(y);
        fwd.process(&mut u);
        fwd.process(&mut v);
        let mut w: Vec<Complex<f64>> = u.iter().zip(&v).map(|(a, b)| a * b.conj()).collect();
        inv.process(&mut w);
        for (a, c) in acc.iter_mut().zip(&w) {
            *a += c.re / len as f64;
        }
    }
    Ok((0..n)
        .map(|k| {
            let wrapped = if len != n && k > 0 { acc[len + k - n] } else { 0.0 };
            (acc[k] + wrapped).round() as usize
        })
        .collect())
}

/// Distance of one search candidate: with `sign = false` the second
/// sequence is rotated by `k`, otherwise the first one is.
pub fn candidate_distance(x: &DnaSequence, y: &DnaSequence, k: usize, sign: bool) -> usize {
    let d = if sign {
        hamming(&rotate(x, k), y)
    } else {
        hamming(x, &rotate(y, k))
    };
    d.expect("candidate sequences share a length")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Candidate {
    pub i: usize,
    pub j: usize,
    /// Shift-register value (may exceed `N - 1` when `N` is not a power of two).
    pub k: usize,
    pub sign: bool,
    pub d: usize,
}

fn scan(pairs: impl Iterator<Item = (usize, usize)>, set: &SequenceSet, tau: usize) -> Vec<Candidate> {
    let n = set.seq_len();
    let shifts = 1usize << ceil_log2(n);
    let mut out = Vec::new();
    for (i, j) in pairs {
        let (x, y) = (&set.sequences()[i], &set.sequences()[j]);
        for sign in [false, true] {
            for k in 0..shifts {
                let d = candidate_distance(x, y, k, sign);
                if (1..=tau).contains(&d) {
                    out.push(Candidate { i, j, k, sign, d });
                }
            }
        }
    }
    out.sort();
    out
}

/// Every `(i, j, k, sign)` over ordered pairs (including `i = j`), shift
/// register values and signs with `1 <= d <= tau`.
pub fn scan_candidates(set: &SequenceSet, tau: usize) -> Vec<Candidate> {
    let m = set.len();
    scan((0..m).flat_map(|i| (0..m).map(move |j| (i, j))), set, tau)
}

/// Same as [`scan_candidates`] for the single pair `(0, 1)`.
pub fn scan_pair(set: &SequenceSet, tau: usize) -> Vec<Candidate> {
    assert!(set.len() >= 2);
    scan(std::iter::once((0, 1)), set, tau)
}
