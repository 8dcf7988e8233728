//! Runs the distributed aligner on in-process workers and prints the
//! per-phase metrics.
//!
//! cargo run --release --example distributed_align -- 8

use sample_align::pipeline::{run_sample_align_d, PipelineConfig};
use sample_align::seqcore::{generate_family, AlphabetKind, GenConfig};

fn main() -> sample_align::error::Result<()> {
    let p: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let (seqs, _) = generate_family(&GenConfig {
        alphabet: AlphabetKind::Protein,
        tree_depth: 7,
        root_length: 100,
        sub_rate: 0.05,
        ins_rate: 0.01,
        del_rate: 0.01,
        seed: 1,
    })?;
    let (aln, metrics) = run_sample_align_d(&PipelineConfig::new(AlphabetKind::Protein, p), &seqs)?;
    println!("{} rows, width {}", aln.len(), aln.width());
    println!("buckets {:?}", metrics.bucket_sizes);
    print!("{}", metrics.phase_table());
    Ok(())
}
