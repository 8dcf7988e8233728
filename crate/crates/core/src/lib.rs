//! Distributed multiple sequence alignment by k-mer rank sampling.
//!
//! Sequences are ranked by k-mer similarity against a global sample, split
//! into rank buckets across workers by regular sampling, aligned per bucket,
//! and reconciled through a shared ancestor template into one alignment.
//!
//! The crate is organised by stage:
//!
//! - [`seqcore`]: sequences, alignments, scoring, FASTA, synthetic families
//! - [`kmer`]: k-mer similarity and rank
//! - [`partition`]: regular sampling, pivots and buckets
//! - [`msa`]: the sequential aligner and the ancestor template machinery
//! - [`transport`]: collectives over in-process and TCP backends
//! - [`pipeline`]: the distributed algorithm end to end
//! - [`quality`]: Q-score and rank statistics
//! - [`cli`]: the `sample-align` command line

pub mod cli;
pub mod error;
pub mod kmer;
pub mod msa;
pub mod partition;
pub mod pipeline;
pub mod quality;
pub mod seqcore;
pub mod transport;

pub use error::{Error, Result};
