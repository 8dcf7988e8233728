//! Simulates a protein family down a binary tree and prints the leaves
//! followed by the true alignment.
//!
//! cargo run --example generate_family

use sample_align::seqcore::{generate_family, write_fasta, AlphabetKind, GenConfig};

fn main() -> sample_align::error::Result<()> {
    let (seqs, truth) = generate_family(&GenConfig {
        alphabet: AlphabetKind::Protein,
        tree_depth: 3,
        root_length: 50,
        sub_rate: 0.05,
        ins_rate: 0.01,
        del_rate: 0.01,
        seed: 11,
    })?;
    print!("{}", String::from_utf8_lossy(&write_fasta(&seqs, 60)));
    println!("\n# true alignment, width {}", truth.width());
    print!("{}", String::from_utf8_lossy(&write_fasta(truth.rows(), 60)));
    Ok(())
}
