use std::fmt;

/// The gap character used in every aligned row.
pub const GAP: u8 = b'-';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlphabetKind {
    Protein,
    Dna,
}

/// A residue alphabet. Symbols are uppercase ASCII, unique, and never `-`.
///
/// The last symbol is always the ambiguity code (`X` for protein, `N` for DNA).
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    kind: AlphabetKind,
    symbols: &'static [u8],
    lookup: [u8; 256],
}

const PROTEIN: &[u8] = b"ACDEFGHIKLMNPQRSTVWYX";
const DNA: &[u8] = b"ACGTN";
const NONE: u8 = u8::MAX;

impl Alphabet {
    pub fn new(kind: AlphabetKind) -> Self {
        let symbols = match kind {
            AlphabetKind::Protein => PROTEIN,
            AlphabetKind::Dna => DNA,
        };
        let mut lookup = [NONE; 256];
        for (i, &s) in symbols.iter().enumerate() {
            lookup[s as usize] = i as u8;
        }
        Alphabet {
            kind,
            symbols,
            lookup,
        }
    }

    pub fn protein() -> Self {
        Self::new(AlphabetKind::Protein)
    }

    pub fn dna() -> Self {
        Self::new(AlphabetKind::Dna)
    }

    pub fn kind(&self) -> AlphabetKind {
        self.kind
    }

    pub fn symbols(&self) -> &[u8] {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Symbols that a generator may emit (everything except the ambiguity code).
    pub fn canonical(&self) -> &[u8] {
        &self.symbols[..self.symbols.len() - 1]
    }

    /// The ambiguity code, `X` or `N`.
    pub fn unknown(&self) -> u8 {
        self.symbols[self.symbols.len() - 1]
    }

    /// Index of an (uppercase) symbol, or `None` when it is not in the alphabet.
    #[inline]
    pub fn index_of(&self, symbol: u8) -> Option<usize> {
        match self.lookup[symbol as usize] {
            NONE => None,
            i => Some(i as usize),
        }
    }

    #[inline]
    pub fn contains(&self, symbol: u8) -> bool {
        self.lookup[symbol as usize] != NONE
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Alphabet({:?}, {})",
            self.kind,
            String::from_utf8_lossy(self.symbols)
        )
    }
}
