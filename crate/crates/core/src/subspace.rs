//! Indexed bit-string subspace with open-addressing lookup.
//!
//! Entries live in one flat word array in insertion order, so row `i` is a
//! plain slice and rows can be read in parallel. Lookup goes through a
//! linear-probing table sized up front to a load factor of at most 0.5,
//! plus a bucket-occupancy bit-set that rejects misses on an empty home
//! bucket without touching the table.

use std::hash::Hasher;

use rayon::prelude::*;
use rustc_hash::FxHasher;

use crate::bits::{cmp_words, flip_bit, words_for, BitString, FixedBitSet};
use crate::error::{Error, Result};

const EMPTY: usize = usize::MAX;

/// Whether [`Subspace::lookup`] consults the occupancy bit-set first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LookupPath {
    OccupancyFirst,
    TableOnly,
}

#[derive(Clone, Debug)]
pub struct Subspace {
    num_qubits: usize,
    stride: usize,
    words: Vec<u64>,
    table: Vec<usize>,
    occupancy: FixedBitSet,
    sorted: bool,
}

fn hash_words(words: &[u64]) -> u64 {
    let mut h = FxHasher::default();
    for &w in words {
        h.write_u64(w);
    }
    // FxHasher leaves weak low bits; fold the high half down.
    let x = h.finish();
    x ^ (x >> 29) ^ (x >> 47)
}

impl Subspace {
    /// An empty subspace with room for `capacity` entries.
    fn with_capacity(num_qubits: usize, capacity: usize) -> Self {
        let buckets = (capacity.max(1) * 2).next_power_of_two();
        let stride = words_for(num_qubits);
        Subspace {
            num_qubits,
            stride,
            words: Vec::with_capacity(capacity * stride),
            table: vec![EMPTY; buckets],
            occupancy: FixedBitSet::with_len(buckets),
            sorted: true,
        }
    }

    /// Deduplicate, keeping first-occurrence order.
    pub fn from_bitstrings<I>(strings: I, num_qubits: usize) -> Result<Self>
    where
        I: IntoIterator<Item = BitString>,
    {
        let strings: Vec<BitString> = strings.into_iter().collect();
        let mut s = Subspace::with_capacity(num_qubits, strings.len());
        for (line, b) in strings.iter().enumerate() {
            if b.width() != num_qubits {
                return Err(Error::parse(
                    line + 1,
                    format!(
                        "bit-string {b} has width {}, expected {num_qubits}",
                        b.width()
                    ),
                ));
            }
            s.insert_words(b.words());
        }
        Ok(s)
    }

    /// Parse MSB-first strings; all must share one width.
    pub fn from_strs<S: AsRef<str>>(strings: &[S]) -> Result<Self> {
        let parsed = strings
            .iter()
            .enumerate()
            .map(|(i, s)| {
                s.as_ref().parse::<BitString>().map_err(|e| match e {
                    Error::Parse { msg, .. } => Error::parse(i + 1, msg),
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let width = parsed.first().map_or(1, BitString::width);
        Subspace::from_bitstrings(parsed, width)
    }

    /// Every bit-string of `num_qubits` bits, in integer order.
    pub fn full(num_qubits: usize) -> Result<Self> {
        if num_qubits >= 40 {
            return Err(Error::Dimension(format!(
                "full space over {num_qubits} qubits is too large"
            )));
        }
        let dim = 1usize << num_qubits;
        Subspace::from_bitstrings(
            (0..dim as u64).map(|v| BitString::from_u64(num_qubits, v)),
            num_qubits,
        )
    }

    fn insert_words(&mut self, key: &[u64]) -> bool {
        let mask = self.table.len() - 1;
        let mut b = hash_words(key) as usize & mask;
        loop {
            match self.table[b] {
                EMPTY => break,
                idx if self.row(idx) == key => return false,
                _ => b = (b + 1) & mask,
            }
        }
        let idx = self.dim();
        if let Some(last) = idx.checked_sub(1) {
            if self.sorted && cmp_words(self.row(last), key).is_gt() {
                self.sorted = false;
            }
        }
        self.words.extend_from_slice(key);
        self.table[b] = idx;
        self.occupancy.insert(b);
        true
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.words.len() / self.stride
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Number of 64-bit words per row.
    #[inline]
    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn bucket_count(&self) -> usize {
        self.table.len()
    }

    /// Row `i` as raw words.
    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.words[i * self.stride..(i + 1) * self.stride]
    }

    pub fn get(&self, i: usize) -> BitString {
        BitString::from_words(self.num_qubits, self.row(i)).expect("stored rows are well formed")
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = BitString> + '_ {
        (0..self.dim()).map(move |i| self.get(i))
    }

    pub fn par_rows(&self) -> impl IndexedParallelIterator<Item = &[u64]> + '_ {
        self.words.par_chunks(self.stride)
    }

    /// Entries are in ascending integer order.
    pub fn is_sorted_by_value(&self) -> bool {
        self.sorted
    }

    /// Home bucket for a key.
    pub fn home_bucket(&self, key: &[u64]) -> usize {
        hash_words(key) as usize & (self.table.len() - 1)
    }

    pub fn is_bucket_occupied(&self, bucket: usize) -> bool {
        self.occupancy.contains(bucket)
    }

    #[inline]
    pub fn lookup(&self, key: &[u64]) -> Option<usize> {
        self.lookup_with(key, LookupPath::OccupancyFirst)
    }

    pub fn lookup_with(&self, key: &[u64], path: LookupPath) -> Option<usize> {
        debug_assert_eq!(key.len(), self.stride);
        let mask = self.table.len() - 1;
        let mut b = hash_words(key) as usize & mask;
        if path == LookupPath::OccupancyFirst && !self.occupancy.contains(b) {
            return None;
        }
        loop {
            match self.table[b] {
                EMPTY => return None,
                idx if self.row(idx) == key => return Some(idx),
                _ => b = (b + 1) & mask,
            }
        }
    }

    /// Ordinal index of `b`, if present.
    pub fn contains(&self, b: &BitString) -> Option<usize> {
        if b.width() != self.num_qubits {
            return None;
        }
        self.lookup(b.words())
    }

    /// Re-index entries in ascending integer order.
    pub fn sort_by_integer_value(&self) -> Subspace {
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.par_sort_unstable_by(|&a, &b| cmp_words(self.row(a), self.row(b)));
        let mut out = Subspace::with_capacity(self.num_qubits, self.dim());
        for i in order {
            out.insert_words(self.row(i));
        }
        debug_assert!(out.sorted);
        out
    }

    /// Membership union, keeping `self`'s order followed by new entries of `other`.
    pub fn union(&self, other: &Subspace) -> Result<Subspace> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::WidthMismatch {
                expected: self.num_qubits,
                found: other.num_qubits,
            });
        }
        let mut out = Subspace::with_capacity(self.num_qubits, self.dim() + other.dim());
        for i in 0..self.dim() {
            out.insert_words(self.row(i));
        }
        for i in 0..other.dim() {
            out.insert_words(other.row(i));
        }
        Ok(out)
    }
}

/// Flip `row` at every index of `structure`.
pub fn column_bitstring(row: &BitString, structure: &[usize]) -> BitString {
    let mut col = row.clone();
    for &i in structure {
        col.flip(i);
    }
    col
}

/// Word-level variant of [`column_bitstring`] writing into `out`.
#[inline]
pub(crate) fn column_words(row: &[u64], structure: &[usize], out: &mut [u64]) {
    out.copy_from_slice(row);
    for &i in structure {
        flip_bit(out, i);
    }
}
