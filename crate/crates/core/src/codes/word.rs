use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Longest word length handled anywhere in the crate.
pub const MAX_LENGTH: usize = 16;

/// A binary vector of length at most 16.
///
/// Coordinate 1 is the least significant bit of `bits`. The textual form
/// lists coordinates left to right starting at coordinate 1, so `"1000"`
/// has only coordinate 1 set and `bits() == 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BinaryWord {
    bits: u32,
    len: u8,
}

impl BinaryWord {
    pub fn new(bits: u32, len: usize) -> Result<Self> {
        if len > MAX_LENGTH {
            return Err(Error::LengthOutOfRange(len));
        }
        if len < 32 && bits >> len != 0 {
            return Err(Error::WordOverflow { bits, len });
        }
        Ok(BinaryWord {
            bits,
            len: len as u8,
        })
    }

    pub fn zero(len: usize) -> Result<Self> {
        Self::new(0, len)
    }

    pub fn ones(len: usize) -> Result<Self> {
        Self::new(low_mask(len), len)
    }

    /// Builds a word from coordinate values listed in order (coordinate 1 first).
    pub fn from_bits(coords: &[bool]) -> Result<Self> {
        let bits = coords
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, &b)| acc | (u32::from(b) << i));
        Self::new(bits, coords.len())
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Value of coordinate `i` (1-based).
    pub fn coordinate(&self, i: usize) -> bool {
        debug_assert!(i >= 1 && i <= self.len());
        (self.bits >> (i - 1)) & 1 == 1
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (1..=self.len()).map(|i| self.coordinate(i)).collect()
    }

    pub fn xor(&self, other: &BinaryWord) -> Result<BinaryWord> {
        self.check_len(other)?;
        Ok(BinaryWord {
            bits: self.bits ^ other.bits,
            len: self.len,
        })
    }

    pub fn distance(&self, other: &BinaryWord) -> Result<u32> {
        self.check_len(other)?;
        Ok((self.bits ^ other.bits).count_ones())
    }

    fn check_len(&self, other: &BinaryWord) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        Ok(())
    }
}

pub fn hamming_distance(a: &BinaryWord, b: &BinaryWord) -> Result<u32> {
    a.distance(b)
}

pub(crate) fn low_mask(len: usize) -> u32 {
    if len >= 32 {
        u32::MAX
    } else {
        (1u32 << len) - 1
    }
}

/// Renders `bits` as a coordinate-1-first binary string of `len` characters.
pub fn format_bits(bits: u32, len: usize) -> String {
    (0..len)
        .map(|i| if (bits >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Inverse of [`format_bits`]. Whitespace between digits is ignored, so the
/// bracketed `[0 0 1 ...]` listing style is also accepted once the brackets
/// are stripped.
pub fn parse_bits(s: &str) -> Option<(u32, usize)> {
    let mut bits = 0u32;
    let mut len = 0usize;
    for c in s.chars() {
        match c {
            '0' | '1' => {
                if len == MAX_LENGTH {
                    return None;
                }
                if c == '1' {
                    bits |= 1 << len;
                }
                len += 1;
            }
            c if c.is_whitespace() => {}
            _ => return None,
        }
    }
    if len == 0 {
        None
    } else {
        Some((bits, len))
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_bits(self.bits, self.len()))
    }
}

impl FromStr for BinaryWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (bits, len) = parse_bits(s.trim())
            .ok_or_else(|| Error::parse(0, format!("not a binary word: {s:?}")))?;
        BinaryWord::new(bits, len)
    }
}
