//! k-mer counting, pairwise k-mer similarity, mean similarity and k-mer rank.
//!
//! The similarity of two sequences is the number of shared k-mer occurrences
//! (sum of per-k-mer minimum counts) divided by the window count of the
//! shorter sequence. The rank of a sequence is `ln(0.1 + D)` where `D` is its
//! mean similarity to a reference set.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::seqcore::{AlphabetKind, Sequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KmerConfig {
    pub kmer_len: usize,
    /// Leave a sequence's own entry out of its reference set (divides by M - 1).
    pub exclude_self: bool,
}

impl KmerConfig {
    pub fn new(kmer_len: usize) -> Self {
        KmerConfig {
            kmer_len,
            exclude_self: false,
        }
    }

    /// 6 for DNA, 3 for protein.
    pub fn default_for(kind: AlphabetKind) -> Self {
        match kind {
            AlphabetKind::Dna => Self::new(6),
            AlphabetKind::Protein => Self::new(3),
        }
    }
}

/// Occurrence counts of every k-mer in one sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KmerCounts {
    kmer_len: usize,
    counts: BTreeMap<Vec<u8>, u32>,
    total: usize,
}

impl KmerCounts {
    pub fn kmer_len(&self) -> usize {
        self.kmer_len
    }

    /// Number of windows, `L - k + 1`.
    pub fn total(&self) -> usize {
        self.total
    }

    pub fn get(&self, kmer: &[u8]) -> u32 {
        self.counts.get(kmer).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u8], u32)> {
        self.counts.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    /// Sum over shared k-mers of the smaller count.
    pub fn shared(&self, other: &KmerCounts) -> u64 {
        let mut a = self.counts.iter().peekable();
        let mut b = other.counts.iter().peekable();
        let mut sum = 0u64;
        while let (Some((ka, &ca)), Some((kb, &cb))) = (a.peek(), b.peek()) {
            match ka.cmp(kb) {
                std::cmp::Ordering::Less => {
                    a.next();
                }
                std::cmp::Ordering::Greater => {
                    b.next();
                }
                std::cmp::Ordering::Equal => {
                    sum += u64::from(ca.min(cb));
                    a.next();
                    b.next();
                }
            }
        }
        sum
    }
}

pub fn count_kmers(sequence: &Sequence, config: &KmerConfig) -> Result<KmerCounts> {
    let k = config.kmer_len;
    if k == 0 {
        return Err(Error::InvalidConfig("kmer_len must be at least 1".into()));
    }
    if sequence.residues.len() < k {
        return Err(Error::SequenceTooShort {
            id: sequence.id.clone(),
            kmer_len: k,
        });
    }
    let mut counts = BTreeMap::new();
    for w in sequence.residues.windows(k) {
        *counts.entry(w.to_vec()).or_insert(0) += 1;
    }
    Ok(KmerCounts {
        kmer_len: k,
        counts,
        total: sequence.residues.len() - k + 1,
    })
}

/// Similarity of two precomputed count tables.
pub fn similarity_of_counts(x: &KmerCounts, y: &KmerCounts) -> f64 {
    let denom = x.total.min(y.total);
    x.shared(y) as f64 / denom as f64
}

pub fn kmer_similarity(x: &Sequence, y: &Sequence, config: &KmerConfig) -> Result<f64> {
    let cx = count_kmers(x, config)?;
    let cy = count_kmers(y, config)?;
    Ok(similarity_of_counts(&cx, &cy))
}

/// A sequence together with its mean similarity and k-mer rank.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedSequence {
    pub sequence: Sequence,
    pub mean_similarity: f64,
    pub rank: f64,
}

impl RankedSequence {
    pub fn new(sequence: Sequence, mean_similarity: f64) -> Result<Self> {
        let rank = kmer_rank(mean_similarity)?;
        Ok(RankedSequence {
            sequence,
            mean_similarity,
            rank,
        })
    }

    pub fn source_index(&self) -> usize {
        self.sequence.source_index
    }
}

fn is_same(a: &Sequence, b: &Sequence) -> bool {
    a.source_index == b.source_index && a.id == b.id
}

/// Mean of the similarities of `x` against counts of a reference set, summed
/// in reference order.
fn mean_against(
    x: &Sequence,
    cx: &KmerCounts,
    refs: &[(&Sequence, KmerCounts)],
    config: &KmerConfig,
) -> Result<f64> {
    let mut sum = 0.0;
    let mut m = 0usize;
    for (r, cr) in refs {
        if config.exclude_self && is_same(x, r) {
            continue;
        }
        sum += similarity_of_counts(cx, cr);
        m += 1;
    }
    if m == 0 {
        return Err(Error::EmptyReferenceSet);
    }
    Ok(sum / m as f64)
}

fn count_all<'a>(
    seqs: &'a [Sequence],
    config: &KmerConfig,
) -> Result<Vec<(&'a Sequence, KmerCounts)>> {
    seqs.iter()
        .map(|s| Ok((s, count_kmers(s, config)?)))
        .collect()
}

pub fn mean_similarity(x: &Sequence, reference_set: &[Sequence], config: &KmerConfig) -> Result<f64> {
    if reference_set.is_empty() {
        return Err(Error::EmptyReferenceSet);
    }
    let cx = count_kmers(x, config)?;
    let refs = count_all(reference_set, config)?;
    mean_against(x, &cx, &refs, config)
}

/// `ln(0.1 + D)`.
pub fn kmer_rank(mean_similarity: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&mean_similarity) {
        return Err(Error::OutOfRange(mean_similarity));
    }
    Ok((0.1 + mean_similarity).ln())
}

/// Ranks every sequence against the whole input. Output order follows input.
pub fn rank_all_centralized(sequences: &[Sequence], config: &KmerConfig) -> Result<Vec<RankedSequence>> {
    rank_all_vs_samples(sequences, sequences, config)
}

/// Ranks every local sequence against `samples` only.
pub fn rank_all_vs_samples(
    local: &[Sequence],
    samples: &[Sequence],
    config: &KmerConfig,
) -> Result<Vec<RankedSequence>> {
    if samples.is_empty() {
        return Err(Error::EmptyReferenceSet);
    }
    let refs = count_all(samples, config)?;
    local
        .iter()
        .map(|x| {
            let cx = count_kmers(x, config)?;
            let d = mean_against(x, &cx, &refs, config)?;
            RankedSequence::new(x.clone(), d)
        })
        .collect()
}

/// Sorts by `(rank, source_index)`.
pub fn sort_by_rank(ranked: &mut [RankedSequence]) {
    ranked.sort_by(|a, b| {
        a.rank
            .total_cmp(&b.rank)
            .then(a.sequence.source_index.cmp(&b.sequence.source_index))
    });
}
