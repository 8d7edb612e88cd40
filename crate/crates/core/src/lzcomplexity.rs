//! Lempel–Ziv (1976) complexity of binary strings.
//!
//! The phrase count follows the exhaustive production history of Lempel and
//! Ziv as computed by the Kaspar–Schuster scan: each new phrase is the
//! shortest prefix of the remaining input that cannot be copied from
//! earlier text (copies may overlap the phrase itself). An incomplete
//! final phrase still counts.
//!
//! [`clz`] symmetrizes the count over the string and its reverse and
//! scales it by `log2(n)`, special-casing constant strings whose true
//! complexity only grows like `log2(n)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A non-empty string over `{0, 1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryString(Vec<u8>);

impl BinaryString {
    /// Builds a string from symbols that must each be 0 or 1.
    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptyBinaryString);
        }
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidBinarySymbol(char::from(b'0' + b.min(9))));
        }
        Ok(Self(bits))
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; present for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    /// True for `0^n` and `1^n`.
    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&b| b == self.0[0])
    }
}

impl FromStr for BinaryString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidBinarySymbol(other)),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_bits(bits)
    }
}

impl fmt::Display for BinaryString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryString({self})")
    }
}

/// Complexity estimate of one binary string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexityEstimate {
    /// `C_LZ` in bits.
    pub raw_clz: f64,
    pub nw_forward: usize,
    pub nw_reverse: usize,
    pub n: usize,
}

/// Number of phrases in the LZ76 exhaustive history of `s`.
pub fn lz76_phrase_count(s: &BinaryString) -> usize {
    let s = s.bits();
    let n = s.len();
    if n == 1 {
        return 1;
    }
    // `u` is where the current phrase starts, `v` the length matched so far
    // against a copy starting at `i`, `vmax` the best match over all `i`.
    let (mut i, mut u, mut v, mut vmax) = (0usize, 1usize, 1usize, 1usize);
    let mut count = 1;
    while u + v <= n {
        if s[i + v - 1] == s[u + v - 1] {
            v += 1;
        } else {
            vmax = vmax.max(v);
            i += 1;
            if i == u {
                count += 1;
                u += vmax;
                i = 0;
                v = 1;
                vmax = 1;
            } else {
                v = 1;
            }
        }
    }
    if v != 1 {
        // the scan ran off the end mid-copy: an incomplete final phrase
        count += 1;
    }
    count
}

pub fn clz(s: &BinaryString) -> ComplexityEstimate {
    let n = s.len();
    let log_n = (n as f64).log2();
    let nw_forward = lz76_phrase_count(s);
    let nw_reverse = lz76_phrase_count(&s.reversed());
    let raw_clz = if s.is_constant() {
        log_n
    } else {
        log_n * (nw_forward + nw_reverse) as f64 / 2.0
    };
    ComplexityEstimate {
        raw_clz,
        nw_forward,
        nw_reverse,
        n,
    }
}

/// Maps `[` to 0 and `]` to 1.
///
/// Only bracket characters are accepted; the open-chain token has no
/// bracket form and is rejected as malformed.
pub fn shape_to_binary(shape: &str) -> Result<BinaryString> {
    if shape.is_empty() {
        return Err(Error::EmptyShape);
    }
    let bits = shape
        .chars()
        .map(|c| match c {
            '[' => Ok(0),
            ']' => Ok(1),
            _ => Err(Error::MalformedShape(shape.to_string())),
        })
        .collect::<Result<Vec<u8>>>()?;
    BinaryString::from_bits(bits)
}
