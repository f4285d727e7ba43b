//! Dynamic-width bit-strings.
//!
//! Bit 0 is the least-significant bit. The text form is written most
//! significant bit first, so the string `"01"` has bit 0 set.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub(crate) const WORD_BITS: usize = 64;

/// Number of 64-bit words needed to hold `width` bits.
#[inline]
pub fn words_for(width: usize) -> usize {
    width.div_ceil(WORD_BITS).max(1)
}

#[inline]
pub(crate) fn get_bit(words: &[u64], index: usize) -> bool {
    (words[index / WORD_BITS] >> (index % WORD_BITS)) & 1 == 1
}

#[inline]
pub(crate) fn flip_bit(words: &mut [u64], index: usize) {
    words[index / WORD_BITS] ^= 1 << (index % WORD_BITS);
}

/// Compare two equal-length word slices as unsigned integers.
#[inline]
pub(crate) fn cmp_words(a: &[u64], b: &[u64]) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// A computational-basis state over `width` qubits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    width: usize,
    words: SmallVec<[u64; 4]>,
}

impl BitString {
    pub fn zeros(width: usize) -> Self {
        BitString {
            width,
            words: SmallVec::from_elem(0, words_for(width)),
        }
    }

    /// Build from raw words. Bits above `width` must be clear.
    pub fn from_words(width: usize, words: &[u64]) -> Result<Self> {
        if words.len() != words_for(width) {
            return Err(Error::WidthMismatch {
                expected: words_for(width),
                found: words.len(),
            });
        }
        let b = BitString {
            width,
            words: SmallVec::from_slice(words),
        };
        if b.has_stray_bits() {
            return Err(Error::Dimension(format!(
                "bits set above width {width}"
            )));
        }
        Ok(b)
    }

    /// Build from a `u64` value; only valid for widths up to 64.
    pub fn from_u64(width: usize, value: u64) -> Self {
        let mut b = BitString::zeros(width);
        b.words[0] = value;
        debug_assert!(!b.has_stray_bits());
        b
    }

    /// Set bits at the given indices.
    pub fn from_indices(width: usize, ones: &[usize]) -> Result<Self> {
        let mut b = BitString::zeros(width);
        for &i in ones {
            if i >= width {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    limit: width,
                });
            }
            b.set(i, true);
        }
        Ok(b)
    }

    fn has_stray_bits(&self) -> bool {
        let rem = self.width % WORD_BITS;
        rem != 0 && self.words.last().is_some_and(|w| w >> rem != 0)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn bit(&self, index: usize) -> bool {
        get_bit(&self.words, index)
    }

    pub fn set(&mut self, index: usize, value: bool) {
        assert!(index < self.width, "bit {index} out of width {}", self.width);
        let w = &mut self.words[index / WORD_BITS];
        let m = 1u64 << (index % WORD_BITS);
        if value {
            *w |= m;
        } else {
            *w &= !m;
        }
    }

    pub fn flip(&mut self, index: usize) {
        assert!(index < self.width, "bit {index} out of width {}", self.width);
        flip_bit(&mut self.words, index);
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// Low 64 bits as an integer.
    pub fn low_u64(&self) -> u64 {
        self.words[0]
    }

    /// Parse an MSB-first binary string.
    pub fn parse_msb(text: &str) -> Result<Self> {
        let width = text.len();
        if width == 0 {
            return Err(Error::parse(0, "empty bit-string"));
        }
        let mut b = BitString::zeros(width);
        for (pos, ch) in text.bytes().enumerate() {
            let index = width - 1 - pos;
            match ch {
                b'0' => {}
                b'1' => b.set(index, true),
                other => {
                    return Err(Error::parse(
                        0,
                        format!("invalid bit character {:?}", other as char),
                    ))
                }
            }
        }
        Ok(b)
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BitString::parse_msb(s.trim())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.width)
            .rev()
            .map(|i| if self.bit(i) { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

/// Ordered by integer value; widths are compared first.
impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.width
            .cmp(&other.width)
            .then_with(|| cmp_words(&self.words, &other.words))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Fixed-width bit-set used for bucket occupancy flags.
#[derive(Clone, Debug, Default)]
pub(crate) struct FixedBitSet {
    words: Vec<u64>,
    len: usize,
}

impl FixedBitSet {
    pub fn with_len(len: usize) -> Self {
        FixedBitSet {
            words: vec![0; len.div_ceil(WORD_BITS)],
            len,
        }
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        get_bit(&self.words, i)
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
    }
}
