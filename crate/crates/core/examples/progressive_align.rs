//! Sequential progressive alignment of a FASTA file (or a generated
//! family when no path is given).
//!
//! cargo run --example progressive_align -- family.fa

use sample_align::kmer::KmerConfig;
use sample_align::msa::{progressive_align_with_stats, DpStats};
use sample_align::seqcore::{
    generate_family, parse_sequences, write_fasta, Alphabet, AlphabetKind, GenConfig, SubstitutionMatrix,
};

fn main() -> sample_align::error::Result<()> {
    let seqs = match std::env::args().nth(1) {
        Some(path) => parse_sequences(&std::fs::read(path)?, &Alphabet::protein())?,
        None => {
            let gen = GenConfig {
                alphabet: AlphabetKind::Protein,
                tree_depth: 3,
                root_length: 40,
                sub_rate: 0.1,
                ins_rate: 0.02,
                del_rate: 0.02,
                seed: 5,
            };
            generate_family(&gen)?.0
        }
    };
    let matrix = SubstitutionMatrix::default_for(AlphabetKind::Protein);
    let mut stats = DpStats::default();
    let kmer = KmerConfig::default_for(AlphabetKind::Protein);
    let aln = progressive_align_with_stats(&seqs, &kmer, &matrix, &mut stats)?;
    print!("{}", String::from_utf8_lossy(&write_fasta(aln.rows(), 60)));
    eprintln!("{} profile alignments, {} dp cells", stats.profile_alignments, stats.dp_cells);
    Ok(())
}
