//! Regular sampling on random ranks: per-worker samples, pivots, bucket
//! sizes and the load bound.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sample_align::kmer::{sort_by_rank, RankedSequence};
use sample_align::partition::{check_load_bound, partition_set, select_local_samples, select_pivots};
use sample_align::seqcore::Sequence;

fn main() -> sample_align::error::Result<()> {
    let (p, n) = (4, 256);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let items: Vec<RankedSequence> = (0..n)
        .map(|i| RankedSequence {
            sequence: Sequence::new(format!("s{i}"), b"A".to_vec(), i),
            mean_similarity: 0.0,
            rank: rng.gen_range(0.1f64..1.1).ln(),
        })
        .collect();

    let mut gathered = Vec::new();
    for (w, block) in items.chunks(n / p).enumerate() {
        let mut block = block.to_vec();
        sort_by_rank(&mut block);
        let samples = select_local_samples(&block, p - 1)?;
        let ranks: Vec<f64> = samples.iter().map(|s| s.rank).collect();
        println!("worker {w} samples {ranks:.3?}");
        gathered.extend(ranks);
    }
    let pivots = select_pivots(&gathered, p)?;
    println!("pivots {:.3?}", pivots.pivots());
    let buckets = partition_set(items, &pivots);
    let report = check_load_bound(&buckets, n, p);
    println!("bucket sizes {:?}, max {} (bound holds: {})", buckets.sizes(), report.max_bucket, report.holds);
    Ok(())
}
