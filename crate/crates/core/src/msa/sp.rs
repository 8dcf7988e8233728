use crate::error::{Error, Result};
use crate::seqcore::{Alignment, SubstitutionMatrix};

/// Sum-of-pairs score: every column, every unordered row pair.
pub fn sp_score(alignment: &Alignment, matrix: &SubstitutionMatrix) -> Result<i64> {
    if alignment.is_empty() {
        return Err(Error::EmptyAlignment);
    }
    let dim = matrix.dim();
    let mut counts = vec![0i64; dim];
    let mut total = 0i64;
    let rows: Vec<Vec<usize>> = alignment
        .rows()
        .iter()
        .map(|r| r.residues.iter().map(|&c| matrix.index_of(c)).collect())
        .collect::<Result<_>>()?;
    for c in 0..alignment.width() {
        counts.fill(0);
        for r in &rows {
            counts[r[c]] += 1;
        }
        for s in 0..dim {
            let ns = counts[s];
            if ns == 0 {
                continue;
            }
            total += ns * (ns - 1) / 2 * i64::from(matrix.score_index(s, s));
            for t in s + 1..dim {
                total += ns * counts[t] * i64::from(matrix.score_index(s, t));
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::{AlignedRow, AlphabetKind};
    use proptest::prelude::*;

    fn aln(rows: &[String]) -> Alignment {
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

    fn naive(a: &Alignment, m: &SubstitutionMatrix) -> i64 {
        let rows = a.rows();
        let mut t = 0;
        for c in 0..a.width() {
            for i in 0..rows.len() {
                for j in i + 1..rows.len() {
                    t += i64::from(m.score(rows[i].residues[c], rows[j].residues[c]).unwrap());
                }
            }
        }
        t
    }

    #[test]
    fn examples() {
        let m = SubstitutionMatrix::default_for(AlphabetKind::Dna);
        assert_eq!(sp_score(&aln(&["AA".into(), "AA".into()]), &m).unwrap(), 10);
        assert_eq!(sp_score(&aln(&["A-".into(), "-A".into()]), &m).unwrap(), -12);
        assert_eq!(sp_score(&aln(&["ACGT".into()]), &m).unwrap(), 0);
        assert_eq!(sp_score(&Alignment::empty(), &m), Err(Error::EmptyAlignment));
    }

    proptest! {
        #[test]
        fn matches_pairwise_sum(rows in prop::collection::vec("[ACDEFGHIKLMNPQRSTVWYX-]{12}", 1..7)) {
            let m = SubstitutionMatrix::default_for(AlphabetKind::Protein);
            let a = aln(&rows);
            prop_assert_eq!(sp_score(&a, &m).unwrap(), naive(&a, &m));
        }
    }
}
