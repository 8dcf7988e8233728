use thiserror::Error;

/// Errors raised anywhere in the alignment engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input contains no records")]
    EmptyInput,
    #[error("illegal symbol {symbol:?} in record {id:?} at position {position}")]
    IllegalSymbol { id: String, position: usize, symbol: char },
    #[error("aligned rows have unequal lengths (record {id:?} has {found}, expected {expected})")]
    RaggedAlignment { id: String, expected: usize, found: usize },
    #[error("duplicate record id {0:?}")]
    DuplicateId(String),
    #[error("record {0:?} has no residues")]
    EmptySequence(String),
    #[error("malformed FASTA: {0}")]
    MalformedFasta(String),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(char),
    #[error("substitution rates are invalid: {0}")]
    InvalidRates(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("sequence {id:?} is shorter than the k-mer length {kmer_len}")]
    SequenceTooShort { id: String, kmer_len: usize },
    #[error("reference set is empty")]
    EmptyReferenceSet,
    #[error("mean similarity {0} is outside [0, 1]")]
    OutOfRange(f64),

    #[error("insufficient sequences: {0}")]
    InsufficientSequences(String),
    #[error("expected {expected} gathered ranks, got {found}")]
    WrongSampleCardinality { expected: usize, found: usize },

    #[error("profile is empty")]
    EmptyProfile,
    #[error("alignment is empty")]
    EmptyAlignment,
    #[error("every column of the alignment is majority-gap")]
    AllGapConsensus,
    #[error("tweaked parts disagree on template width (expected {expected}, found {found})")]
    TemplateWidthMismatch { expected: usize, found: usize },
    #[error("external aligner failed: {0}")]
    AlignerFailed(String),

    #[error("alignments carry different ids: {0}")]
    IdMismatch(String),
    #[error("record {0:?} has different residues in the two alignments")]
    SequenceMismatch(String),
    #[error("reference alignment has no residue pairs")]
    EmptyReference,
    #[error("vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("peer disconnected: {0}")]
    PeerDisconnected(String),
    #[error("corrupt frame: {0}")]
    FrameCorrupt(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of the message-passing layer.
    pub fn is_transport(&self) -> bool {
        matches!(
            self,
            Error::PeerDisconnected(_) | Error::FrameCorrupt(_) | Error::Io(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        use std::io::ErrorKind::*;
        match e.kind() {
            UnexpectedEof | ConnectionReset | ConnectionAborted | BrokenPipe => {
                Error::PeerDisconnected(e.to_string())
            }
            _ => Error::Io(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
