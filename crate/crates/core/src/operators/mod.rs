//! Qubit and fermionic operators over the extended alphabet
//! `{Z, P0, P1, X, Y, Lower, Raise}`.

mod fermion;
mod jordan_wigner;

pub use fermion::{merge_pair, FermionOperator, FermionSymbol, FermionTerm};
pub use jordan_wigner::{jordan_wigner, pauli_decompose};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::bits::get_bit;
use crate::error::{Error, Result};
use crate::C64;

/// Single-qubit operator code. The discriminants are the wire encoding.
///
/// `Lower` is `|0><1|` and `Raise` is `|1><0|`; `P0`/`P1` project onto
/// `|0>`/`|1>`. `Y|0> = i|1>` and `Y|1> = -i|0>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum OpCode {
    Z = 0,
    P0 = 1,
    P1 = 2,
    X = 3,
    Y = 4,
    Lower = 5,
    Raise = 6,
}

impl OpCode {
    pub const ALL: [OpCode; 7] = [
        OpCode::Z,
        OpCode::P0,
        OpCode::P1,
        OpCode::X,
        OpCode::Y,
        OpCode::Lower,
        OpCode::Raise,
    ];

    #[inline]
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<OpCode> {
        OpCode::ALL.get(code as usize).copied()
    }

    #[inline]
    pub fn is_diagonal(self) -> bool {
        self.code() <= 2
    }

    #[inline]
    pub fn is_ladder(self) -> bool {
        matches!(self, OpCode::Lower | OpCode::Raise)
    }

    /// Operators whose single nonzero matrix entry depends on the row bit.
    #[inline]
    pub fn is_constraining(self) -> bool {
        matches!(self, OpCode::P0 | OpCode::P1 | OpCode::Lower | OpCode::Raise)
    }

    pub fn adjoint(self) -> OpCode {
        match self {
            OpCode::Lower => OpCode::Raise,
            OpCode::Raise => OpCode::Lower,
            other => other,
        }
    }

    /// Dense 2x2 matrix `m[row][col]`.
    pub fn matrix(self) -> [[C64; 2]; 2] {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        match self {
            OpCode::Z => [[l, o], [o, -l]],
            OpCode::P0 => [[l, o], [o, o]],
            OpCode::P1 => [[o, o], [o, l]],
            OpCode::X => [[o, l], [l, o]],
            OpCode::Y => [[o, -i], [i, o]],
            OpCode::Lower => [[o, l], [o, o]],
            OpCode::Raise => [[o, o], [l, o]],
        }
    }

    /// `<row|op|row ^ offdiag>` expressed as quarter turns of the unit phase,
    /// or `None` when the row bit makes the element vanish.
    #[inline]
    pub(crate) fn row_phase(self, row_bit: bool) -> Option<u8> {
        match (self, row_bit) {
            (OpCode::X, _) => Some(0),
            (OpCode::Y, false) => Some(3),
            (OpCode::Y, true) => Some(1),
            (OpCode::Z, false) => Some(0),
            (OpCode::Z, true) => Some(2),
            (OpCode::P0, false) | (OpCode::P1, true) => Some(0),
            (OpCode::Lower, false) | (OpCode::Raise, true) => Some(0),
            _ => None,
        }
    }
}

impl fmt::Display for OpCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OpCode::Z => "Z",
            OpCode::P0 => "P0",
            OpCode::P1 => "P1",
            OpCode::X => "X",
            OpCode::Y => "Y",
            OpCode::Lower => "-",
            OpCode::Raise => "+",
        };
        f.write_str(s)
    }
}

/// Multiply `c` by `i^quarter` without rounding.
#[inline]
pub(crate) fn rotate_quarter(c: C64, quarter: u8) -> C64 {
    match quarter & 3 {
        0 => c,
        1 => C64::new(-c.im, c.re),
        2 => C64::new(-c.re, -c.im),
        _ => C64::new(c.im, -c.re),
    }
}

/// One word of the Hamiltonian: a coefficient times a sparse product of
/// single-qubit operators on strictly ascending indices.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitTerm {
    coeff: C64,
    indices: Vec<usize>,
    codes: Vec<OpCode>,
}

impl QubitTerm {
    /// Build from `(index, code)` pairs in any order; repeated indices are rejected.
    pub fn new(coeff: C64, ops: impl IntoIterator<Item = (usize, OpCode)>) -> Result<Self> {
        let mut ops: Vec<(usize, OpCode)> = ops.into_iter().collect();
        ops.sort_by_key(|&(i, _)| i);
        if let Some(w) = ops.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateIndex(w[0].0));
        }
        let (indices, codes) = ops.into_iter().unzip();
        Ok(QubitTerm {
            coeff,
            indices,
            codes,
        })
    }

    /// Identity term carrying a constant.
    pub fn constant(coeff: C64) -> Self {
        QubitTerm {
            coeff,
            indices: Vec::new(),
            codes: Vec::new(),
        }
    }

    pub(crate) fn from_sorted(coeff: C64, indices: Vec<usize>, codes: Vec<OpCode>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(indices.len(), codes.len());
        QubitTerm {
            coeff,
            indices,
            codes,
        }
    }

    #[inline]
    pub fn coeff(&self) -> C64 {
        self.coeff
    }

    pub fn set_coeff(&mut self, coeff: C64) {
        self.coeff = coeff;
    }

    #[inline]
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    #[inline]
    pub fn codes(&self) -> &[OpCode] {
        &self.codes
    }

    pub fn ops(&self) -> impl Iterator<Item = (usize, OpCode)> + '_ {
        self.indices.iter().copied().zip(self.codes.iter().copied())
    }

    pub fn weight(&self) -> usize {
        self.codes.len()
    }

    pub fn off_diagonal_weight(&self) -> usize {
        self.codes.iter().filter(|c| !c.is_diagonal()).count()
    }

    pub fn is_diagonal(&self) -> bool {
        self.codes.iter().all(|c| c.is_diagonal())
    }

    /// Indices carrying an off-diagonal code (X, Y, Lower, Raise).
    pub fn off_diagonal_structure(&self) -> Vec<usize> {
        self.ops()
            .filter(|(_, c)| !c.is_diagonal())
            .map(|(i, _)| i)
            .collect()
    }

    /// Number of projector and ladder operators.
    pub fn constraint_count(&self) -> usize {
        self.codes.iter().filter(|c| c.is_constraining()).count()
    }

    /// True when every matrix element is real: real coefficient and an even
    /// number of `Y` factors.
    pub fn has_real_elements(&self) -> bool {
        self.coeff.im == 0.0 && self.codes.iter().filter(|&&c| c == OpCode::Y).count() % 2 == 0
    }

    pub fn adjoint(&self) -> QubitTerm {
        QubitTerm {
            coeff: self.coeff.conj(),
            indices: self.indices.clone(),
            codes: self.codes.iter().map(|c| c.adjoint()).collect(),
        }
    }

    /// The single matrix element `<row|c W|row ^ mask>` where `mask` covers
    /// the off-diagonal structure; `None` if a projector or ladder
    /// constraint rejects the row.
    #[inline]
    pub fn row_element(&self, row: &[u64]) -> Option<C64> {
        let mut quarter = 0u8;
        for (&i, &c) in self.indices.iter().zip(&self.codes) {
            quarter = (quarter + c.row_phase(get_bit(row, i))?) & 3;
        }
        Some(rotate_quarter(self.coeff, quarter))
    }

    /// Sort key without the coefficient.
    pub(crate) fn key_cmp(&self, other: &Self) -> Ordering {
        self.indices
            .cmp(&other.indices)
            .then_with(|| self.codes.cmp(&other.codes))
    }

    pub(crate) fn same_word(&self, other: &Self) -> bool {
        self.indices == other.indices && self.codes == other.codes
    }
}

/// A Hamiltonian `sum_i c_i W_i` over `num_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitOperator {
    num_qubits: usize,
    terms: Vec<QubitTerm>,
}

impl QubitOperator {
    pub fn new(num_qubits: usize) -> Self {
        QubitOperator {
            num_qubits,
            terms: Vec::new(),
        }
    }

    pub fn with_terms(num_qubits: usize, terms: Vec<QubitTerm>) -> Result<Self> {
        let mut op = QubitOperator::new(num_qubits);
        op.terms.reserve(terms.len());
        for t in terms {
            op.push(t)?;
        }
        Ok(op)
    }

    pub fn push(&mut self, term: QubitTerm) -> Result<()> {
        if let Some(&last) = term.indices.last() {
            if last >= self.num_qubits {
                return Err(Error::IndexOutOfRange {
                    index: last,
                    limit: self.num_qubits,
                });
            }
        }
        self.terms.push(term);
        Ok(())
    }

    /// Convenience for building terms inline.
    pub fn add(&mut self, coeff: impl Into<C64>, ops: &[(usize, OpCode)]) -> Result<()> {
        let t = QubitTerm::new(coeff.into(), ops.iter().copied())?;
        self.push(t)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn terms(&self) -> &[QubitTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn into_terms(self) -> Vec<QubitTerm> {
        self.terms
    }

    /// True when all matrix elements are real.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(QubitTerm::has_real_elements)
    }

    pub fn adjoint(&self) -> QubitOperator {
        QubitOperator {
            num_qubits: self.num_qubits,
            terms: self.terms.iter().map(QubitTerm::adjoint).collect(),
        }
    }

    /// Hermiticity check on the canonical term list, up to `tol` per coefficient.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let a = self.combine_like_terms(0.0);
        let b = self.adjoint().combine_like_terms(0.0);
        let (mut i, mut j) = (0, 0);
        let (ta, tb) = (a.terms(), b.terms());
        while i < ta.len() || j < tb.len() {
            let ord = match (ta.get(i), tb.get(j)) {
                (Some(x), Some(y)) => x
                    .weight()
                    .cmp(&y.weight())
                    .then_with(|| x.key_cmp(y)),
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => unreachable!(),
            };
            match ord {
                Ordering::Equal => {
                    if (ta[i].coeff - tb[j].coeff).norm() > tol {
                        return false;
                    }
                    i += 1;
                    j += 1;
                }
                Ordering::Less => {
                    if ta[i].coeff.norm() > tol {
                        return false;
                    }
                    i += 1;
                }
                Ordering::Greater => {
                    if tb[j].coeff.norm() > tol {
                        return false;
                    }
                    j += 1;
                }
            }
        }
        true
    }

    /// Sum terms with identical `(indices, codes)`.
    ///
    /// Terms are bucketed by weight and buckets are combined in parallel.
    /// Output is ordered by weight, then by word. A term is dropped when its
    /// combined magnitude is zero or below `drop_tol`. Contributions to one
    /// word are summed in value order so the result does not depend on
    /// input order.
    pub fn combine_like_terms(&self, drop_tol: f64) -> QubitOperator {
        let mut buckets: BTreeMap<usize, Vec<&QubitTerm>> = BTreeMap::new();
        for t in &self.terms {
            buckets.entry(t.weight()).or_default().push(t);
        }
        let combined: Vec<Vec<QubitTerm>> = buckets
            .into_par_iter()
            .map(|(_, mut bucket)| {
                bucket.sort_by(|a, b| a.key_cmp(b));
                let mut out = Vec::new();
                let mut start = 0;
                let mut parts: Vec<C64> = Vec::new();
                while start < bucket.len() {
                    let mut end = start + 1;
                    while end < bucket.len() && bucket[end].same_word(bucket[start]) {
                        end += 1;
                    }
                    parts.clear();
                    parts.extend(bucket[start..end].iter().map(|t| t.coeff));
                    parts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
                    let sum: C64 = parts.iter().sum();
                    let mag = sum.norm();
                    if mag != 0.0 && mag >= drop_tol {
                        let mut t = bucket[start].clone();
                        t.coeff = sum;
                        out.push(t);
                    }
                    start = end;
                }
                out
            })
            .collect();
        QubitOperator {
            num_qubits: self.num_qubits,
            terms: combined.into_iter().flatten().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn code_mapping_is_fixed() {
        let expected = [
            (OpCode::Z, 0),
            (OpCode::P0, 1),
            (OpCode::P1, 2),
            (OpCode::X, 3),
            (OpCode::Y, 4),
            (OpCode::Lower, 5),
            (OpCode::Raise, 6),
        ];
        for (op, code) in expected {
            assert_eq!(op.code(), code);
            assert_eq!(OpCode::from_code(code), Some(op));
            assert_eq!(op.is_diagonal(), code <= 2);
        }
        assert_eq!(OpCode::from_code(7), None);
    }

    #[test]
    fn row_phase_matches_dense_matrices() {
        for op in OpCode::ALL {
            let m = op.matrix();
            let flips = !op.is_diagonal();
            for row in 0..2usize {
                let col = if flips { row ^ 1 } else { row };
                let expected = m[row][col];
                let got = op
                    .row_phase(row == 1)
                    .map(|q| rotate_quarter(c(1.0), q))
                    .unwrap_or(c(0.0));
                assert_eq!(got, expected, "{op:?} row {row}");
            }
        }
    }

    #[test]
    fn term_sorts_and_rejects_duplicates() {
        let t = QubitTerm::new(c(1.0), [(3, OpCode::Z), (1, OpCode::X)]).unwrap();
        assert_eq!(t.indices(), &[1, 3]);
        assert_eq!(t.codes(), &[OpCode::X, OpCode::Z]);
        assert!(matches!(
            QubitTerm::new(c(1.0), [(1, OpCode::Z), (1, OpCode::X)]),
            Err(Error::DuplicateIndex(1))
        ));
    }

    #[test]
    fn off_diagonal_structure_examples() {
        let zz = QubitTerm::new(c(1.0), [(0, OpCode::Z), (1, OpCode::Z)]).unwrap();
        assert!(zz.off_diagonal_structure().is_empty());
        let xy = QubitTerm::new(c(1.0), [(0, OpCode::X), (2, OpCode::Y)]).unwrap();
        assert_eq!(xy.off_diagonal_structure(), vec![0, 2]);
        let rlz = QubitTerm::new(
            c(1.0),
            [(1, OpCode::Raise), (3, OpCode::Lower), (5, OpCode::Z)],
        )
        .unwrap();
        assert_eq!(rlz.off_diagonal_structure(), vec![1, 3]);
        assert_eq!(rlz.off_diagonal_weight(), 2);
        assert_eq!(rlz.weight(), 3);
    }

    #[test]
    fn push_validates_range() {
        let mut op = QubitOperator::new(2);
        assert!(op.add(1.0, &[(2, OpCode::Z)]).is_err());
        assert!(op.add(1.0, &[(1, OpCode::Z)]).is_ok());
    }

    #[test]
    fn combine_sums_and_cancels() {
        let mut op = QubitOperator::new(2);
        op.add(0.5, &[(0, OpCode::X), (1, OpCode::X)]).unwrap();
        op.add(0.25, &[(0, OpCode::X), (1, OpCode::X)]).unwrap();
        let out = op.combine_like_terms(0.0);
        assert_eq!(out.len(), 1);
        assert_eq!(out.terms()[0].coeff(), c(0.75));

        let mut op = QubitOperator::new(1);
        op.add(1.0, &[(0, OpCode::Z)]).unwrap();
        op.add(-1.0, &[(0, OpCode::Z)]).unwrap();
        assert!(op.combine_like_terms(0.0).is_empty());
    }

    #[test]
    fn combine_drop_tolerance() {
        let mut op = QubitOperator::new(1);
        op.add(1e-9, &[(0, OpCode::Z)]).unwrap();
        op.add(1.0, &[(0, OpCode::X)]).unwrap();
        assert_eq!(op.combine_like_terms(0.0).len(), 2);
        assert_eq!(op.combine_like_terms(1e-6).len(), 1);
    }

    #[test]
    fn hermiticity() {
        let mut op = QubitOperator::new(2);
        op.add(0.5, &[(0, OpCode::Raise), (1, OpCode::Lower)]).unwrap();
        assert!(!op.is_hermitian(0.0));
        op.add(0.5, &[(0, OpCode::Lower), (1, OpCode::Raise)]).unwrap();
        assert!(op.is_hermitian(0.0));
        let mut y = QubitOperator::new(1);
        y.add(C64::new(0.0, 1.0), &[(0, OpCode::Y)]).unwrap();
        assert!(!y.is_hermitian(0.0));
    }
}
