//! Regular sampling: local samples, root pivot selection, bucketing and the
//! load-bound check.
//!
//! All index rules here are 1-based in the arithmetic (as in the usual
//! statement of regular sampling) and converted to 0-based at the slice.

use crate::error::{Error, Result};
use crate::kmer::RankedSequence;

/// How many local samples each worker contributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SampleCount {
    /// `min(max(p - 1, 8), w)`.
    #[default]
    Auto,
    Fixed(usize),
    /// The whole local block.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionConfig {
    pub worker_count: usize,
    pub sample_count: SampleCount,
}

impl PartitionConfig {
    pub fn new(worker_count: usize) -> Self {
        PartitionConfig {
            worker_count,
            sample_count: SampleCount::Auto,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.worker_count == 0 {
            return Err(Error::InvalidConfig("worker_count must be at least 1".into()));
        }
        if self.sample_count == SampleCount::Fixed(0) {
            return Err(Error::InvalidConfig("sample_count must be at least 1".into()));
        }
        Ok(())
    }

    /// Effective sample count for a local set of `local_size` sequences.
    pub fn sample_count_for(&self, local_size: usize) -> usize {
        match self.sample_count {
            SampleCount::Auto => self
                .worker_count
                .saturating_sub(1)
                .max(8)
                .min(local_size)
                .max(1),
            SampleCount::Fixed(n) => n,
            SampleCount::All => local_size,
        }
    }

    /// Local samples of a rank-sorted block under this configuration.
    /// `All` returns the block itself rather than `w` evenly spaced picks,
    /// which may repeat entries.
    pub fn local_samples(&self, sorted_local: &[RankedSequence]) -> Result<Vec<RankedSequence>> {
        match self.sample_count {
            SampleCount::All => Ok(sorted_local.to_vec()),
            _ => select_local_samples(sorted_local, self.sample_count_for(sorted_local.len())),
        }
    }
}

/// Sorted bucket boundaries; `p - 1` of them for `p` buckets.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PivotSet {
    pivots: Vec<f64>,
}

impl PivotSet {
    /// Wraps boundaries that are already known to be sorted (e.g. received
    /// from the root).
    pub fn from_sorted(pivots: Vec<f64>) -> Result<Self> {
        if pivots.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidConfig("pivots are not sorted".into()));
        }
        Ok(PivotSet { pivots })
    }

    pub fn pivots(&self) -> &[f64] {
        &self.pivots
    }

    pub fn bucket_count(&self) -> usize {
        self.pivots.len() + 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BucketAssignment {
    pub buckets: Vec<Vec<RankedSequence>>,
}

impl BucketAssignment {
    pub fn sizes(&self) -> Vec<usize> {
        self.buckets.iter().map(Vec::len).collect()
    }
}

/// 0-based positions of `count` evenly spaced samples out of `w`:
/// 1-based `floor(j * w / (count + 1))` for `j = 1..=count`, clamped to `[1, w]`.
///
/// Duplicates appear when `w` is small relative to `count`.
pub fn regular_sample_indices(w: usize, count: usize) -> Vec<usize> {
    if w == 0 {
        return Vec::new();
    }
    (1..=count)
        .map(|j| (j * w / (count + 1)).clamp(1, w) - 1)
        .collect()
}

/// Picks `count` evenly spaced entries of a rank-sorted local list.
pub fn select_local_samples(sorted_local: &[RankedSequence], count: usize) -> Result<Vec<RankedSequence>> {
    let w = sorted_local.len();
    if count > w {
        return Err(Error::InsufficientSequences(format!(
            "{count} samples requested from {w} local sequences"
        )));
    }
    Ok(regular_sample_indices(w, count)
        .into_iter()
        .map(|i| sorted_local[i].clone())
        .collect())
}

/// Sorts the `p(p - 1)` gathered ranks and takes entries
/// `floor(p/2) + i*p` (1-based) for `i = 0..p-1` as the `p - 1` pivots.
pub fn select_pivots(gathered_ranks: &[f64], p: usize) -> Result<PivotSet> {
    if p == 0 {
        return Err(Error::InvalidConfig("worker_count must be at least 1".into()));
    }
    let expected = p * (p - 1);
    if gathered_ranks.len() != expected {
        return Err(Error::WrongSampleCardinality {
            expected,
            found: gathered_ranks.len(),
        });
    }
    let mut y = gathered_ranks.to_vec();
    y.sort_by(f64::total_cmp);
    let pivots = (0..p.saturating_sub(1))
        .map(|i| y[p / 2 + i * p - 1])
        .collect();
    Ok(PivotSet { pivots })
}

/// Smallest bucket whose upper pivot is `>= rank`; ties go low.
pub fn bucket_of(rank: f64, pivots: &PivotSet) -> usize {
    pivots.pivots.partition_point(|&y| y < rank)
}

pub fn partition_set(ranked: Vec<RankedSequence>, pivots: &PivotSet) -> BucketAssignment {
    let mut buckets: Vec<Vec<RankedSequence>> = vec![Vec::new(); pivots.bucket_count()];
    for r in ranked {
        buckets[bucket_of(r.rank, pivots)].push(r);
    }
    for b in &mut buckets {
        crate::kmer::sort_by_rank(b);
    }
    BucketAssignment { buckets }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoadReport {
    pub max_bucket: usize,
    /// `2 * ceil(n / p)`.
    pub bound_2w: usize,
    pub holds: bool,
}

pub fn check_load_bound_sizes(sizes: &[usize], n: usize, p: usize) -> LoadReport {
    let max_bucket = sizes.iter().copied().max().unwrap_or(0);
    let bound_2w = 2 * n.div_ceil(p.max(1));
    LoadReport {
        max_bucket,
        bound_2w,
        holds: max_bucket < bound_2w,
    }
}

pub fn check_load_bound(assignment: &BucketAssignment, n: usize, p: usize) -> LoadReport {
    check_load_bound_sizes(&assignment.sizes(), n, p)
}
