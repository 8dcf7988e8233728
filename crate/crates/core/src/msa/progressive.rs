use crate::error::Result;
use crate::kmer::KmerConfig;
use crate::seqcore::{Alignment, Sequence, SubstitutionMatrix};

use super::{
    align_profiles, build_distance_matrix, merge_alignments, profile_from_alignment, upgma, TreeNode,
};

/// Work counters accumulated by the aligner.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DpStats {
    pub dp_cells: u64,
    pub profile_alignments: u64,
}

/// Progressive alignment: k-mer distances, UPGMA guide tree, then
/// profile-profile merges in post-order. Rows come out ordered by
/// `source_index`.
pub fn progressive_align(
    sequences: &[Sequence],
    kmer: &KmerConfig,
    matrix: &SubstitutionMatrix,
) -> Result<Alignment> {
    progressive_align_with_stats(sequences, kmer, matrix, &mut DpStats::default())
}

pub fn progressive_align_with_stats(
    sequences: &[Sequence],
    kmer: &KmerConfig,
    matrix: &SubstitutionMatrix,
    stats: &mut DpStats,
) -> Result<Alignment> {
    for s in sequences {
        s.validate(matrix.alphabet())?;
    }
    match sequences {
        [] => return Ok(Alignment::empty()),
        [one] => return Ok(Alignment::single(one)),
        _ => {}
    }
    let tree = upgma(&build_distance_matrix(sequences, kmer)?);
    let mut built: Vec<Option<Alignment>> = vec![None; tree.nodes().len()];
    for node in tree.post_order() {
        let aln = match tree.nodes()[node] {
            TreeNode::Leaf(i) => Alignment::single(&sequences[i]),
            TreeNode::Join { left, right, .. } => {
                let a = built[left].take().expect("post-order visits children first");
                let b = built[right].take().expect("post-order visits children first");
                let pa = profile_from_alignment(&a, matrix.alphabet())?;
                let pb = profile_from_alignment(&b, matrix.alphabet())?;
                let r = align_profiles(&pa, &pb, matrix)?;
                stats.dp_cells += r.cells;
                stats.profile_alignments += 1;
                merge_alignments(&a, &b, &r.path)?
            }
        };
        built[node] = Some(aln);
    }
    let mut out = built
        .pop()
        .flatten()
        .expect("root is built last");
    out.sort_by_source_index();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::{AlphabetKind, GAP};

    fn seqs(rs: &[&str]) -> Vec<Sequence> {
        rs.iter()
            .enumerate()
            .map(|(i, r)| Sequence::new(format!("s{i}"), r.as_bytes().to_vec(), i))
            .collect()
    }

    #[test]
    fn trivial_sizes() {
        let m = SubstitutionMatrix::default_for(AlphabetKind::Dna);
        let k = KmerConfig::new(2);
        assert!(progressive_align(&[], &k, &m).unwrap().is_empty());
        let one = progressive_align(&seqs(&["ACGT"]), &k, &m).unwrap();
        assert_eq!(one.width(), 4);
        assert_eq!(one.len(), 1);
    }

    #[test]
    fn identical_pair_is_gap_free() {
        let m = SubstitutionMatrix::default_for(AlphabetKind::Dna);
        let a = progressive_align(&seqs(&["ACGTTGCA", "ACGTTGCA"]), &KmerConfig::new(3), &m).unwrap();
        assert_eq!(a.width(), 8);
        assert_eq!(a.rows()[0].residues, a.rows()[1].residues);
        assert!(!a.rows()[0].residues.contains(&GAP));
    }

    #[test]
    fn three_short_sequences() {
        let m = SubstitutionMatrix::default_for(AlphabetKind::Dna);
        let input = seqs(&["ACGT", "AGT", "ACG"]);
        let mut stats = DpStats::default();
        let a = progressive_align_with_stats(&input, &KmerConfig::new(2), &m, &mut stats).unwrap();
        for (s, r) in input.iter().zip(a.rows()) {
            assert_eq!(r.ungapped(), s.residues);
        }
        assert!(a.width() <= 4 + 3);
        assert_eq!(stats.profile_alignments, 2);
        let rows: Vec<&[u8]> = a.rows().iter().map(|r| r.residues.as_slice()).collect();
        assert_eq!(rows, vec![&b"ACGT"[..], b"A-GT", b"ACG-"]);
    }

    #[test]
    fn rejects_foreign_symbols() {
        let m = SubstitutionMatrix::default_for(AlphabetKind::Dna);
        assert!(progressive_align(&seqs(&["ACGT", "AQGT"]), &KmerConfig::new(2), &m).is_err());
    }
}
