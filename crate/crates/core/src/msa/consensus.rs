use crate::error::{Error, Result};
use crate::seqcore::{Alignment, Sequence, GAP};

/// Majority consensus of an alignment.
///
/// Columns whose gap fraction is strictly above one half are dropped; in the
/// rest the most frequent residue wins, ties going to the smaller symbol.
pub fn consensus(alignment: &Alignment) -> Result<Sequence> {
    if alignment.is_empty() || alignment.width() == 0 {
        return Err(Error::EmptyAlignment);
    }
    let depth = alignment.len();
    let mut residues = Vec::with_capacity(alignment.width());
    let mut counts = [0u32; 256];
    for c in 0..alignment.width() {
        counts.fill(0);
        for row in alignment.rows() {
            counts[row.residues[c] as usize] += 1;
        }
        let gaps = counts[GAP as usize] as usize;
        if 2 * gaps > depth {
            continue;
        }
        counts[GAP as usize] = 0;
        // max_by_key keeps the last maximum, so scan symbols in reverse
        let (sym, _) = counts
            .iter()
            .enumerate()
            .rev()
            .max_by_key(|(_, &n)| n)
            .expect("256 entries");
        residues.push(sym as u8);
    }
    if residues.is_empty() {
        return Err(Error::AllGapConsensus);
    }
    Ok(Sequence::new("consensus", residues, 0))
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
    fn examples() {
        assert_eq!(consensus(&aln(&["ACGT"])).unwrap().residues, b"ACGT");
        assert_eq!(consensus(&aln(&["AC", "AC", "AT"])).unwrap().residues, b"AC");
        assert_eq!(consensus(&aln(&["A-", "-A"])).unwrap().residues, b"AA");
    }

    #[test]
    fn single_gapped_row_is_degapped() {
        assert_eq!(consensus(&aln(&["A-C-G"])).unwrap().residues, b"ACG");
    }

    #[test]
    fn ties_go_to_smaller_symbol() {
        assert_eq!(consensus(&aln(&["T", "G", "C"])).unwrap().residues, b"C");
        assert_eq!(consensus(&aln(&["TG", "GT"])).unwrap().residues, b"GG");
    }

    #[test]
    fn majority_gap_dropped() {
        assert_eq!(consensus(&aln(&["A-C", "A-C", "AGC"])).unwrap().residues, b"AC");
    }

    #[test]
    fn errors() {
        assert_eq!(consensus(&Alignment::empty()), Err(Error::EmptyAlignment));
        assert_eq!(
            consensus(&aln(&["A--", "-A-", "--A"])),
            Err(Error::AllGapConsensus)
        );
    }
}
