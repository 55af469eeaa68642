//! Candidate batches as CSV: `id,signal_dbm,velocity_kmh,spectrum_ratio,distance_m`.

use std::collections::HashSet;
use std::io::Read;

use thiserror::Error;

use crate::radio::{Candidate, CandidateError, INPUT_NAMES};

pub const HEADER: [&str; 5] = [
    "id",
    INPUT_NAMES[0],
    INPUT_NAMES[1],
    INPUT_NAMES[2],
    INPUT_NAMES[3],
];

#[derive(Debug, Error)]
pub enum CandidatesError {
    #[error("expected header `{}`, found `{found}`", HEADER.join(","))]
    Header { found: String },
    #[error("no candidates: file has a header but no data rows")]
    Empty,
    #[error("line {line}: {column} = `{value}` is not a finite number")]
    Number {
        line: u64,
        column: &'static str,
        value: String,
    },
    #[error("line {line}: duplicate candidate id `{id}`")]
    DuplicateId { line: u64, id: String },
    #[error("line {line}: {source}")]
    Invalid { line: u64, source: CandidateError },
    #[error("{0}")]
    Csv(#[from] csv::Error),
}

pub fn read_candidates<R: Read>(reader: R) -> Result<Vec<Candidate<f64>>, CandidatesError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(CandidatesError::Header {
            found: header.iter().collect::<Vec<_>>().join(","),
        });
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let mut values = [0.0f64; 4];
        for (k, column) in INPUT_NAMES.iter().enumerate() {
            let raw = &record[k + 1];
            values[k] = raw
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CandidatesError::Number {
                    line,
                    column,
                    value: raw.to_string(),
                })?;
        }
        let c = Candidate::new(
            record[0].to_string(),
            values[0],
            values[1],
            values[2],
            values[3],
        );
        c.validate()
            .map_err(|source| CandidatesError::Invalid { line, source })?;
        if !seen.insert(c.id.clone()) {
            return Err(CandidatesError::DuplicateId { line, id: c.id });
        }
        out.push(c);
    }
    if out.is_empty() {
        return Err(CandidatesError::Empty);
    }
    Ok(out)
}
