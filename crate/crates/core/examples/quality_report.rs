//! Scores the sequential and distributed alignments of a generated family
//! against its true alignment.

use sample_align::msa::{progressive_align, sp_score};
use sample_align::pipeline::{run_sample_align_d, PipelineConfig};
use sample_align::quality::compare_runs;
use sample_align::seqcore::{generate_family, AlphabetKind, GenConfig};

fn main() -> sample_align::error::Result<()> {
    let (seqs, truth) = generate_family(&GenConfig {
        alphabet: AlphabetKind::Protein,
        tree_depth: 6,
        root_length: 120,
        sub_rate: 0.05,
        ins_rate: 0.01,
        del_rate: 0.01,
        seed: 4,
    })?;
    let config = PipelineConfig::new(AlphabetKind::Protein, 4);
    let (distributed, _) = run_sample_align_d(&config, &seqs)?;
    let sequential = progressive_align(&seqs, &config.kmer, &config.matrix())?;
    let cmp = compare_runs(&distributed, &sequential, &truth)?;
    print!("{}", cmp.report());
    println!("sp_distributed={}", sp_score(&distributed, &config.matrix())?);
    println!("sp_sequential={}", sp_score(&sequential, &config.matrix())?);
    Ok(())
}
