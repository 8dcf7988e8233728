use crate::error::{Error, Result};
use crate::seqcore::{Alignment, Alphabet, GAP};

/// Per-column symbol counts of an alignment over `alphabet ∪ {gap}`.
///
/// Counts are kept as integers so that profile-profile scores are exact;
/// frequencies are `count / depth`. Index `alphabet.len()` is the gap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    dim: usize,
    width: usize,
    depth: u32,
    counts: Vec<u32>,
}

impl Profile {
    /// Builds a profile from raw per-column counts (`width * dim` entries,
    /// each column summing to `depth`).
    pub fn from_counts(dim: usize, depth: u32, counts: Vec<u32>) -> Result<Self> {
        if dim == 0 || counts.len() % dim != 0 {
            return Err(Error::InvalidConfig("profile counts do not fit the dimension".into()));
        }
        let width = counts.len() / dim;
        for c in counts.chunks(dim) {
            if c.iter().map(|&x| u64::from(x)).sum::<u64>() != u64::from(depth) {
                return Err(Error::InvalidConfig("profile column does not sum to depth".into()));
            }
        }
        Ok(Profile {
            dim,
            width,
            depth,
            counts,
        })
    }

    /// Inverse of [`Self::frequency`] for a whole profile; counts are
    /// recovered as `round(f * depth)`.
    pub fn from_frequencies(dim: usize, depth: u32, freqs: &[f64]) -> Result<Self> {
        let counts = freqs
            .iter()
            .map(|&f| {
                if !(0.0..=1.0).contains(&f) {
                    return Err(Error::InvalidConfig(format!("frequency {f} out of range")));
                }
                Ok((f * f64::from(depth)).round() as u32)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_counts(dim, depth, counts)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Entries per column: alphabet size plus one for the gap.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.width == 0
    }

    #[inline]
    pub fn column(&self, c: usize) -> &[u32] {
        &self.counts[c * self.dim..(c + 1) * self.dim]
    }

    #[inline]
    pub fn gap_count(&self, c: usize) -> u32 {
        self.column(c)[self.dim - 1]
    }

    pub fn frequency(&self, c: usize, symbol: usize) -> f64 {
        f64::from(self.column(c)[symbol]) / f64::from(self.depth)
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&x| f64::from(x) / f64::from(self.depth))
            .collect()
    }
}

/// Column frequencies of an alignment; the gap counts as a symbol.
pub fn profile_from_alignment(alignment: &Alignment, alphabet: &Alphabet) -> Result<Profile> {
    let dim = alphabet.len() + 1;
    let width = alignment.width();
    let mut counts = vec![0u32; width * dim];
    for row in alignment.rows() {
        for (c, &sym) in row.residues.iter().enumerate() {
            let idx = if sym == GAP {
                dim - 1
            } else {
                alphabet
                    .index_of(sym)
                    .ok_or(Error::UnknownSymbol(sym as char))?
            };
            counts[c * dim + idx] += 1;
        }
    }
    Ok(Profile {
        dim,
        width,
        depth: alignment.len() as u32,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::AlignedRow;

    fn aln(rows: &[&str]) -> Alignment {
        Alignment::new(
            rows.iter()
                .enumerate()
                .map(|(i, r)| AlignedRow {
                    id: format!("r{i}"),
                    source_index: i,
                    residues: r.as_bytes().to_vec(),
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_row() {
        let dna = Alphabet::dna();
        let p = profile_from_alignment(&aln(&["AC"]), &dna).unwrap();
        assert_eq!(p.width(), 2);
        assert_eq!(p.frequency(0, dna.index_of(b'A').unwrap()), 1.0);
        assert_eq!(p.frequency(1, dna.index_of(b'C').unwrap()), 1.0);
    }

    #[test]
    fn gap_is_a_symbol() {
        let dna = Alphabet::dna();
        let p = profile_from_alignment(&aln(&["A", "-"]), &dna).unwrap();
        assert_eq!(p.frequency(0, 0), 0.5);
        assert_eq!(p.frequency(0, p.dim() - 1), 0.5);
        let sum: f64 = (0..p.dim()).map(|s| p.frequency(0, s)).sum();
        assert!((sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn frequencies_round_trip() {
        let p = profile_from_alignment(&aln(&["AC-T", "A-GT", "TCGA"]), &Alphabet::dna()).unwrap();
        let q = Profile::from_frequencies(p.dim(), p.depth(), &p.frequencies()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn unknown_symbol() {
        assert_eq!(
            profile_from_alignment(&aln(&["AZ"]), &Alphabet::dna()),
            Err(Error::UnknownSymbol('Z'))
        );
    }
}
