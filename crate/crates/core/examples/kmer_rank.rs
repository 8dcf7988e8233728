//! k-mer similarity between pairs, then every sequence's rank against the
//! whole set and against a small sample of it.

use sample_align::kmer::{kmer_similarity, rank_all_centralized, rank_all_vs_samples, KmerConfig};
use sample_align::seqcore::Sequence;

fn main() -> sample_align::error::Result<()> {
    let seqs = vec![
        Sequence::new("a", b"ACGTACGTGA".to_vec(), 0),
        Sequence::new("b", b"ACGTACGAGA".to_vec(), 1),
        Sequence::new("c", b"TTTTGGGGCC".to_vec(), 2),
        Sequence::new("d", b"ACGTTTGGGA".to_vec(), 3),
    ];
    let config = KmerConfig::new(3);
    for (x, y) in [(0, 1), (0, 2), (1, 3)] {
        let s = kmer_similarity(&seqs[x], &seqs[y], &config)?;
        println!("F({}, {}) = {s:.4}", seqs[x].id, seqs[y].id);
    }
    let central = rank_all_centralized(&seqs, &config)?;
    let sampled = rank_all_vs_samples(&seqs, &seqs[..2], &config)?;
    println!("id\tcentral\tvs a,b");
    for (c, s) in central.iter().zip(&sampled) {
        println!("{}\t{:.4}\t{:.4}", c.sequence.id, c.rank, s.rank);
    }
    Ok(())
}
