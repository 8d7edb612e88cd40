//! RNA sequences, a maximum-pairing folder and level-5 abstract shapes.

mod fold;
mod ingest;
mod shape;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use fold::{fold_surrogate, max_pairs, DEFAULT_MIN_LOOP};
pub use ingest::{ingest_dataset, read_dataset, write_dataset, DatasetRecord};
pub use shape::{
    abstract_shape, parse_dotbracket, render_forest, AbstractShape, DotBracketStructure, PairNode, OPEN_CHAIN,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Nucleotide {
    A,
    U,
    C,
    G,
}

impl Nucleotide {
    pub const ALL: [Nucleotide; 4] = [Nucleotide::A, Nucleotide::U, Nucleotide::C, Nucleotide::G];

    /// Position of the 1 in the four-bit code A=1000, U=0100, C=0010, G=0001.
    pub fn code_index(self) -> usize {
        match self {
            Nucleotide::A => 0,
            Nucleotide::U => 1,
            Nucleotide::C => 2,
            Nucleotide::G => 3,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Nucleotide::A => 'A',
            Nucleotide::U => 'U',
            Nucleotide::C => 'C',
            Nucleotide::G => 'G',
        }
    }

    /// Watson–Crick and GU wobble pairs.
    pub fn pairs_with(self, other: Nucleotide) -> bool {
        use Nucleotide::*;
        matches!(
            (self, other),
            (A, U) | (U, A) | (G, C) | (C, G) | (G, U) | (U, G)
        )
    }

    fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'A' => Some(Nucleotide::A),
            'U' | 'T' => Some(Nucleotide::U),
            'C' => Some(Nucleotide::C),
            'G' => Some(Nucleotide::G),
            _ => None,
        }
    }
}

/// A non-empty RNA sequence. `T` is read as `U`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NucleotideSequence(Vec<Nucleotide>);

impl NucleotideSequence {
    pub fn new(letters: Vec<Nucleotide>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(Self(letters))
    }

    pub fn letters(&self) -> &[Nucleotide] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for NucleotideSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .enumerate()
            .map(|(position, symbol)| {
                Nucleotide::from_char(symbol).ok_or(Error::InvalidNucleotide { symbol, position })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters)
    }
}

impl fmt::Display for NucleotideSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.0 {
            write!(f, "{}", n.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for NucleotideSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NucleotideSequence({self})")
    }
}

/// Concatenated four-bit codes, length `4L`.
pub fn encode_onehot(seq: &NucleotideSequence) -> Vec<u8> {
    let mut out = vec![0u8; 4 * seq.len()];
    for (i, n) in seq.letters().iter().enumerate() {
        out[4 * i + n.code_index()] = 1;
    }
    out
}

/// Half the bit-level Hamming distance of the encodings, i.e. the number
/// of differing letters.
pub fn hamming(a: &NucleotideSequence, b: &NucleotideSequence) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let bits = encode_onehot(a)
        .iter()
        .zip(encode_onehot(b).iter())
        .filter(|(x, y)| x != y)
        .count();
    Ok(0.5 * bits as f64)
}

/// Letter-level Hamming distance; equal to [`hamming`] for equal lengths.
pub fn letter_distance(a: &NucleotideSequence, b: &NucleotideSequence) -> usize {
    a.letters()
        .iter()
        .zip(b.letters())
        .filter(|(x, y)| x != y)
        .count()
}
