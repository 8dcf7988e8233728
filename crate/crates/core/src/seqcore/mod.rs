//! Sequences, alignments, alphabets, scoring, FASTA I/O and a synthetic
//! family generator.

mod alphabet;
mod fasta;
mod generate;
mod matrix;

pub use alphabet::{Alphabet, AlphabetKind, GAP};
pub use fasta::{parse_alignment, parse_fasta, parse_sequences, write_fasta, FastaRecord, Parsed};
pub use generate::{generate_family, GenConfig};
pub use matrix::{substitution_score, SubstitutionMatrix};

use crate::error::{Error, Result};

/// An identified, ungapped residue string.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequence {
    pub id: String,
    pub residues: Vec<u8>,
    /// Position in the original input, 0-based.
    pub source_index: usize,
}

impl Sequence {
    pub fn new(id: impl Into<String>, residues: impl Into<Vec<u8>>, source_index: usize) -> Self {
        Sequence {
            id: id.into(),
            residues: residues.into(),
            source_index,
        }
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    /// Checks that every residue belongs to `alphabet` and the sequence is nonempty.
    pub fn validate(&self, alphabet: &Alphabet) -> Result<()> {
        if self.residues.is_empty() {
            return Err(Error::EmptySequence(self.id.clone()));
        }
        if let Some(position) = self.residues.iter().position(|&c| !alphabet.contains(c)) {
            return Err(Error::IllegalSymbol {
                id: self.id.clone(),
                position,
                symbol: self.residues[position] as char,
            });
        }
        Ok(())
    }
}

/// One gapped row of an [`Alignment`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlignedRow {
    pub id: String,
    pub source_index: usize,
    pub residues: Vec<u8>,
}

impl AlignedRow {
    pub fn ungapped(&self) -> Vec<u8> {
        self.residues.iter().copied().filter(|&c| c != GAP).collect()
    }

    pub fn to_sequence(&self) -> Sequence {
        Sequence::new(self.id.clone(), self.ungapped(), self.source_index)
    }
}

/// Ordered gapped rows sharing one width.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Alignment {
    rows: Vec<AlignedRow>,
    width: usize,
}

impl Alignment {
    pub fn empty() -> Self {
        Alignment::default()
    }

    /// Builds an alignment, checking that every row has the same length.
    pub fn new(rows: Vec<AlignedRow>) -> Result<Self> {
        let width = rows.first().map_or(0, |r| r.residues.len());
        for r in &rows {
            if r.residues.len() != width {
                return Err(Error::RaggedAlignment {
                    id: r.id.clone(),
                    expected: width,
                    found: r.residues.len(),
                });
            }
        }
        Ok(Alignment { rows, width })
    }

    /// A one-row alignment holding `seq` without gaps.
    pub fn single(seq: &Sequence) -> Self {
        Alignment {
            width: seq.residues.len(),
            rows: vec![AlignedRow {
                id: seq.id.clone(),
                source_index: seq.source_index,
                residues: seq.residues.clone(),
            }],
        }
    }

    pub fn rows(&self) -> &[AlignedRow] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<AlignedRow> {
        self.rows
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, id: &str) -> Option<&AlignedRow> {
        self.rows.iter().find(|r| r.id == id)
    }

    pub fn sort_by_source_index(&mut self) {
        self.rows.sort_by_key(|r| r.source_index);
    }

    /// Drops columns in which every row carries a gap.
    pub fn without_empty_columns(self) -> Self {
        let keep: Vec<bool> = (0..self.width)
            .map(|c| self.rows.iter().any(|r| r.residues[c] != GAP))
            .collect();
        let width = keep.iter().filter(|&&k| k).count();
        if width == self.width {
            return self;
        }
        let rows = self
            .rows
            .into_iter()
            .map(|mut r| {
                let mut it = keep.iter();
                r.residues.retain(|_| *it.next().unwrap());
                r
            })
            .collect();
        Alignment { rows, width }
    }

    /// The underlying sequences with gaps removed, in row order.
    pub fn sequences(&self) -> Vec<Sequence> {
        self.rows.iter().map(AlignedRow::to_sequence).collect()
    }
}
