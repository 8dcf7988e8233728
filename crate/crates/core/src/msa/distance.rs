use crate::error::Result;
use crate::kmer::{count_kmers, similarity_of_counts, KmerConfig};
use crate::seqcore::Sequence;

/// Symmetric k-mer distance matrix, `d(i, j) = 1 - similarity(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    /// Builds a matrix from a full row-major table; the caller guarantees
    /// symmetry and a zero diagonal.
    pub fn from_rows(n: usize, d: Vec<f64>) -> Self {
        assert_eq!(d.len(), n * n);
        DistanceMatrix { n, d }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }
}

pub fn build_distance_matrix(sequences: &[Sequence], config: &KmerConfig) -> Result<DistanceMatrix> {
    let n = sequences.len();
    let counts = sequences
        .iter()
        .map(|s| count_kmers(s, config))
        .collect::<Result<Vec<_>>>()?;
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v = 1.0 - similarity_of_counts(&counts[i], &counts[j]);
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    Ok(DistanceMatrix { n, d })
}
