//! Shift-wise match counts as CSV.

use anyhow::{Context, Result};
use qshift_core::classical::{hamming, match_count_fft, match_count_naive, rotate};
use qshift_core::DnaSequence;
use serde::{Deserialize, Serialize};

use crate::{emit, read_sequences, CorrelateArgs};

pub const SCHEMA: &str = "qshift.correlate.v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub k: usize,
    pub c_fft: usize,
    pub c_naive: usize,
    pub d_h: usize,
}

pub fn rows(x: &DnaSequence, y: &DnaSequence) -> Result<Vec<Row>> {
    let fft = match_count_fft(x, y)?;
    let naive = match_count_naive(x, y)?;
    (0..x.len())
        .map(|k| {
            Ok(Row {
                k,
                c_fft: fft[k],
                c_naive: naive[k],
                d_h: hamming(x, &rotate(y, k))?,
            })
        })
        .collect()
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
        .context("reading correlate CSV")
}

pub fn cmd(a: &CorrelateArgs) -> Result<()> {
    let set = read_sequences(&a.seqs)?;
    let (i, j) = a.pair;
    let out = rows(set.get(i)?, set.get(j)?)?;
    emit(a.out.as_deref(), &to_csv(&out)?)
}
