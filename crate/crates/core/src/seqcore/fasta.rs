use std::collections::HashSet;

use super::{AlignedRow, Alignment, Alphabet, Sequence, GAP};
use crate::error::{Error, Result};

/// Result of [`parse_fasta`]: plain sequences or a gapped alignment.
#[derive(Debug, Clone, PartialEq)]
pub enum Parsed {
    Sequences(Vec<Sequence>),
    Alignment(Alignment),
}

struct RawRecord {
    id: String,
    body: Vec<u8>,
}

fn split_records(bytes: &[u8]) -> Result<Vec<RawRecord>> {
    let mut records: Vec<RawRecord> = Vec::new();
    for raw_line in bytes.split(|&b| b == b'\n') {
        let line = raw_line.strip_suffix(b"\r").unwrap_or(raw_line);
        if let Some(header) = line.strip_prefix(b">") {
            let header = String::from_utf8_lossy(header);
            let id = header.split_whitespace().next().unwrap_or("").to_string();
            if id.is_empty() {
                return Err(Error::MalformedFasta("header without an id".into()));
            }
            records.push(RawRecord {
                id,
                body: Vec::new(),
            });
        } else if line.iter().all(u8::is_ascii_whitespace) {
            continue;
        } else {
            match records.last_mut() {
                Some(r) => r
                    .body
                    .extend(line.iter().filter(|b| !b.is_ascii_whitespace())),
                None => {
                    return Err(Error::MalformedFasta(
                        "residue data before the first header".into(),
                    ))
                }
            }
        }
    }
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut seen = HashSet::new();
    for r in &records {
        if !seen.insert(r.id.as_str()) {
            return Err(Error::DuplicateId(r.id.clone()));
        }
    }
    Ok(records)
}

fn check_symbols(id: &str, body: &[u8], alphabet: &Alphabet) -> Result<()> {
    for (position, &c) in body.iter().enumerate() {
        if c != GAP && !alphabet.contains(c) {
            return Err(Error::IllegalSymbol {
                id: id.to_string(),
                position,
                symbol: c as char,
            });
        }
    }
    Ok(())
}

/// Parses unaligned FASTA; gap characters are stripped.
pub fn parse_sequences(bytes: &[u8], alphabet: &Alphabet) -> Result<Vec<Sequence>> {
    split_records(bytes)?
        .into_iter()
        .enumerate()
        .map(|(i, mut r)| {
            r.body.make_ascii_uppercase();
            check_symbols(&r.id, &r.body, alphabet)?;
            r.body.retain(|&c| c != GAP);
            if r.body.is_empty() {
                return Err(Error::EmptySequence(r.id));
            }
            Ok(Sequence::new(r.id, r.body, i))
        })
        .collect()
}

/// Parses aligned FASTA; rows keep their gaps and must share one length.
pub fn parse_alignment(bytes: &[u8], alphabet: &Alphabet) -> Result<Alignment> {
    let rows = split_records(bytes)?
        .into_iter()
        .enumerate()
        .map(|(i, mut r)| {
            r.body.make_ascii_uppercase();
            check_symbols(&r.id, &r.body, alphabet)?;
            if r.body.iter().all(|&c| c == GAP) {
                return Err(Error::EmptySequence(r.id));
            }
            Ok(AlignedRow {
                id: r.id,
                source_index: i,
                residues: r.body,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Alignment::new(rows)
}

pub fn parse_fasta(bytes: &[u8], alphabet: &Alphabet, keep_gaps: bool) -> Result<Parsed> {
    if keep_gaps {
        parse_alignment(bytes, alphabet).map(Parsed::Alignment)
    } else {
        parse_sequences(bytes, alphabet).map(Parsed::Sequences)
    }
}

/// Anything that can be written as a FASTA record.
pub trait FastaRecord {
    fn fasta_id(&self) -> &str;
    fn fasta_residues(&self) -> &[u8];
}

impl FastaRecord for Sequence {
    fn fasta_id(&self) -> &str {
        &self.id
    }
    fn fasta_residues(&self) -> &[u8] {
        &self.residues
    }
}

impl FastaRecord for AlignedRow {
    fn fasta_id(&self) -> &str {
        &self.id
    }
    fn fasta_residues(&self) -> &[u8] {
        &self.residues
    }
}

/// Canonical FASTA: one header line, residues wrapped at `wrap` columns, LF endings.
pub fn write_fasta<R: FastaRecord>(records: &[R], wrap: usize) -> Vec<u8> {
    let wrap = wrap.max(1);
    let mut out = Vec::new();
    for r in records {
        out.push(b'>');
        out.extend_from_slice(r.fasta_id().as_bytes());
        out.push(b'\n');
        for chunk in r.fasta_residues().chunks(wrap) {
            out.extend_from_slice(chunk);
            out.push(b'\n');
        }
    }
    out
}
