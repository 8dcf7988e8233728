use super::alphabet::{Alphabet, AlphabetKind, GAP};
use crate::error::{Error, Result};

/// Standard BLOSUM62 in NCBI row order.
const BLOSUM62_ORDER: &[u8] = b"ARNDCQEGHILKMFPSTWYV";
#[rustfmt::skip]
const BLOSUM62: [[i32; 20]; 20] = [
    //A   R   N   D   C   Q   E   G   H   I   L   K   M   F   P   S   T   W   Y   V
    [ 4, -1, -2, -2,  0, -1, -1,  0, -2, -1, -1, -1, -1, -2, -1,  1,  0, -3, -2,  0], // A
    [-1,  5,  0, -2, -3,  1,  0, -2,  0, -3, -2,  2, -1, -3, -2, -1, -1, -3, -2, -3], // R
    [-2,  0,  6,  1, -3,  0,  0,  0,  1, -3, -3,  0, -2, -3, -2,  1,  0, -4, -2, -3], // N
    [-2, -2,  1,  6, -3,  0,  2, -1, -1, -3, -4, -1, -3, -3, -1,  0, -1, -4, -3, -3], // D
    [ 0, -3, -3, -3,  9, -3, -4, -3, -3, -1, -1, -3, -1, -2, -3, -1, -1, -2, -2, -1], // C
    [-1,  1,  0,  0, -3,  5,  2, -2,  0, -3, -2,  1,  0, -3, -1,  0, -1, -2, -1, -2], // Q
    [-1,  0,  0,  2, -4,  2,  5, -2,  0, -3, -3,  1, -2, -3, -1,  0, -1, -3, -2, -2], // E
    [ 0, -2,  0, -1, -3, -2, -2,  6, -2, -4, -4, -2, -3, -3, -2,  0, -2, -2, -3, -3], // G
    [-2,  0,  1, -1, -3,  0,  0, -2,  8, -3, -3, -1, -2, -1, -2, -1, -2, -2,  2, -3], // H
    [-1, -3, -3, -3, -1, -3, -3, -4, -3,  4,  2, -3,  1,  0, -3, -2, -1, -3, -1,  3], // I
    [-1, -2, -3, -4, -1, -2, -3, -4, -3,  2,  4, -2,  2,  0, -3, -2, -1, -2, -1,  1], // L
    [-1,  2,  0, -1, -3,  1,  1, -2, -1, -3, -2,  5, -1, -3, -1,  0, -1, -3, -2, -2], // K
    [-1, -1, -2, -3, -1,  0, -2, -3, -2,  1,  2, -1,  5,  0, -2, -1, -1, -1, -1,  1], // M
    [-2, -3, -3, -3, -2, -3, -3, -3, -1,  0,  0, -3,  0,  6, -4, -2, -2,  1,  3, -1], // F
    [-1, -2, -2, -1, -3, -1, -1, -2, -2, -3, -3, -1, -2, -4,  7, -1, -1, -4, -3, -2], // P
    [ 1, -1,  1,  0, -1,  0,  0,  0, -1, -2, -2,  0, -1, -2, -1,  4,  1, -3, -2, -2], // S
    [ 0, -1,  0, -1, -1, -1, -1, -2, -2, -1, -1, -1, -1, -2, -1,  1,  5, -2, -2,  0], // T
    [-3, -3, -4, -4, -2, -2, -3, -2, -2, -3, -2, -3, -1,  1, -4, -3, -2, 11,  2, -3], // W
    [-2, -2, -2, -3, -2, -1, -2, -3,  2, -1, -1, -2, -1,  3, -3, -2, -2,  2,  7, -1], // Y
    [ 0, -3, -3, -3, -1, -2, -2, -3, -3,  3,  1, -2,  1, -1, -2, -2,  0, -3, -1,  4], // V
];

/// Symmetric integer scores over an alphabet, with a linear gap penalty.
///
/// Internally the table is `(n + 1) x (n + 1)` where index `n` is the gap:
/// symbol-vs-gap scores `-gap_penalty` and gap-vs-gap scores 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SubstitutionMatrix {
    alphabet: Alphabet,
    table: Vec<i32>,
    gap_penalty: i32,
}

impl SubstitutionMatrix {
    /// Builds a matrix from a score function over symbol pairs.
    ///
    /// The function must be symmetric; ambiguity codes always score 0.
    pub fn from_fn(
        alphabet: Alphabet,
        gap_penalty: i32,
        score: impl Fn(u8, u8) -> i32,
    ) -> Result<Self> {
        if gap_penalty < 0 {
            return Err(Error::InvalidConfig("gap penalty must be nonnegative".into()));
        }
        let n = alphabet.len();
        let dim = n + 1;
        let unknown = alphabet.unknown();
        let mut table = vec![0; dim * dim];
        for (i, &a) in alphabet.symbols().iter().enumerate() {
            for (j, &b) in alphabet.symbols().iter().enumerate() {
                let s = if a == unknown || b == unknown {
                    0
                } else {
                    score(a, b)
                };
                if a != unknown && b != unknown && s != score(b, a) {
                    return Err(Error::InvalidConfig(format!(
                        "score({}, {}) is not symmetric",
                        a as char, b as char
                    )));
                }
                table[i * dim + j] = s;
            }
            table[i * dim + n] = -gap_penalty;
            table[n * dim + i] = -gap_penalty;
        }
        Ok(SubstitutionMatrix {
            alphabet,
            table,
            gap_penalty,
        })
    }

    pub fn blosum62(gap_penalty: i32) -> Self {
        let idx = |c: u8| BLOSUM62_ORDER.iter().position(|&x| x == c).unwrap();
        Self::from_fn(Alphabet::protein(), gap_penalty, |a, b| {
            BLOSUM62[idx(a)][idx(b)]
        })
        .expect("BLOSUM62 is symmetric")
    }

    pub fn dna_simple(matched: i32, mismatched: i32, gap_penalty: i32) -> Self {
        Self::from_fn(Alphabet::dna(), gap_penalty, |a, b| {
            if a == b {
                matched
            } else {
                mismatched
            }
        })
        .expect("match/mismatch scoring is symmetric")
    }

    /// BLOSUM62 with gap penalty 6 for protein; +5/-4 with gap penalty 6 for DNA.
    pub fn default_for(kind: AlphabetKind) -> Self {
        match kind {
            AlphabetKind::Protein => Self::blosum62(6),
            AlphabetKind::Dna => Self::dna_simple(5, -4, 6),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn gap_penalty(&self) -> i32 {
        self.gap_penalty
    }

    /// Number of rows/columns of the internal table (alphabet size plus gap).
    #[inline]
    pub fn dim(&self) -> usize {
        self.alphabet.len() + 1
    }

    /// Index used for `-` in profile columns and in [`Self::score_index`].
    #[inline]
    pub fn gap_index(&self) -> usize {
        self.alphabet.len()
    }

    #[inline]
    pub fn score_index(&self, a: usize, b: usize) -> i32 {
        self.table[a * self.dim() + b]
    }

    /// Maps a symbol or `-` to its table index.
    #[inline]
    pub fn index_of(&self, c: u8) -> Result<usize> {
        if c == GAP {
            return Ok(self.gap_index());
        }
        self.alphabet
            .index_of(c)
            .ok_or(Error::UnknownSymbol(c as char))
    }

    /// Score of two symbols, either of which may be the gap character.
    pub fn score(&self, a: u8, b: u8) -> Result<i32> {
        Ok(self.score_index(self.index_of(a)?, self.index_of(b)?))
    }
}

/// Free-function form of [`SubstitutionMatrix::score`].
pub fn substitution_score(matrix: &SubstitutionMatrix, a: u8, b: u8) -> Result<i32> {
    matrix.score(a, b)
}
