//! Fixed-width two's-complement words and Booth radix-4 digit extraction.

use std::fmt;

use crate::error::WordError;

/// Widest word the crate can represent.
pub const MAX_WORD_WIDTH: u32 = 128;

/// Immutable two's-complement bit vector of `width` bits.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Word {
    width: u32,
    bits: u128,
}

fn mask(width: u32) -> u128 {
    if width >= 128 {
        u128::MAX
    } else {
        (1u128 << width) - 1
    }
}

impl Word {
    /// Stores `value mod 2^width`.
    pub fn new(value: i128, width: u32) -> Result<Self, WordError> {
        Self::check_width(width)?;
        Ok(Self {
            width,
            bits: (value as u128) & mask(width),
        })
    }

    /// Builds a word from a raw bit pattern; bits above `width` are discarded.
    pub fn from_bits(bits: u128, width: u32) -> Result<Self, WordError> {
        Self::check_width(width)?;
        Ok(Self {
            width,
            bits: bits & mask(width),
        })
    }

    /// Parses an MSB-first string of `0`/`1` characters.
    pub fn from_bit_str(s: &str) -> Result<Self, WordError> {
        let width = u32::try_from(s.len()).map_err(|_| WordError::InvalidWidth(u32::MAX))?;
        Self::check_width(width)?;
        let mut bits = 0u128;
        for ch in s.chars() {
            bits <<= 1;
            match ch {
                '0' => {}
                '1' => bits |= 1,
                other => return Err(WordError::BadDigit(other)),
            }
        }
        Ok(Self { width, bits })
    }

    fn check_width(width: u32) -> Result<(), WordError> {
        if !(2..=MAX_WORD_WIDTH).contains(&width) {
            return Err(WordError::InvalidWidth(width));
        }
        Ok(())
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Raw pattern, zero above `width`.
    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn signed_value(&self) -> i128 {
        let shift = 128 - self.width;
        ((self.bits << shift) as i128) >> shift
    }

    /// Bit `index`; reading past the top is an error.
    pub fn bit(&self, index: u32) -> Result<bool, WordError> {
        if index >= self.width {
            return Err(WordError::IndexOutOfRange {
                index: i64::from(index),
                width: self.width,
            });
        }
        Ok((self.bits >> index) & 1 == 1)
    }

    /// Bit access with the Booth convention that negative indices read 0.
    pub fn booth_bit(&self, index: i64) -> Result<bool, WordError> {
        if index < 0 {
            return Ok(false);
        }
        let index = u32::try_from(index).map_err(|_| WordError::IndexOutOfRange {
            index,
            width: self.width,
        })?;
        self.bit(index)
    }

    /// Radix-4 digits, least significant first: digit i is
    /// `B(a[2i+1], a[2i], a[2i-1])` with `a[-1] = 0`.
    pub fn booth_digits(&self) -> Result<Vec<BoothDigit>, WordError> {
        if !self.width.is_multiple_of(2) {
            return Err(WordError::OddWidth(self.width));
        }
        (0..self.width / 2)
            .map(|i| {
                let i = i64::from(i);
                Ok(BoothDigit::encode(
                    self.booth_bit(2 * i + 1)?,
                    self.booth_bit(2 * i)?,
                    self.booth_bit(2 * i - 1)?,
                ))
            })
            .collect()
    }

    /// The low `len` bits as a new word of width `len`.
    pub fn low_bits(&self, len: u32) -> Result<Word, WordError> {
        Word::from_bits(self.bits, len)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({}'b{self}, {})", self.width, self.signed_value())
    }
}

/// MSB-first binary pattern.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (0..self.width).rev() {
            f.write_str(if (self.bits >> i) & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A radix-4 Booth digit together with the three bits it was encoded from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoothDigit {
    value: i8,
    source: (bool, bool, bool),
}

impl BoothDigit {
    /// `B(x, y, z) = -2x + y + z`.
    pub fn encode(x: bool, y: bool, z: bool) -> Self {
        let value = -2 * i8::from(x) + i8::from(y) + i8::from(z);
        Self {
            value,
            source: (x, y, z),
        }
    }

    pub fn value(&self) -> i8 {
        self.value
    }

    pub fn source(&self) -> (bool, bool, bool) {
        self.source
    }
}
