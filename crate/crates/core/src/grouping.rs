//! Partition an operator into its diagonal part and groups of off-diagonal
//! terms that share an off-diagonal structure.
//!
//! Terms in a group all map a row bit-string to the same column, so one
//! subspace lookup serves the whole group. In fermionic mode each group is
//! further sorted by ladder integer and `int_ptrs` delimits the terms for
//! each of the 16 possible values.

use std::cmp::Ordering;
use std::ops::Range;

use rayon::prelude::*;

use crate::bits::get_bit;
use crate::error::{Error, Result};
use crate::matrix::DiagonalCache;
use crate::operators::{OpCode, QubitOperator, QubitTerm};

/// Most ladder operators a fermionic group may carry.
pub const MAX_LADDER_OPS: usize = 4;
/// Length of each group's `int_ptrs` array.
pub const INT_PTRS_LEN: usize = (1 << MAX_LADDER_OPS) + 1;

#[derive(Clone, Debug)]
pub struct GroupedHamiltonian {
    num_qubits: usize,
    fermionic: bool,
    real: bool,
    hermitian: bool,
    diagonal: Vec<QubitTerm>,
    offdiag: Vec<QubitTerm>,
    group_ptrs: Vec<usize>,
    structures: Vec<Vec<usize>>,
    msob: Vec<usize>,
    int_ptrs: Vec<[usize; INT_PTRS_LEN]>,
}

/// Ladder integer of a term: bit `k` is set iff the operator at
/// `structure[k]` is `Raise`.
pub fn ladder_integer(term: &QubitTerm, structure: &[usize]) -> Result<usize> {
    if structure.len() > MAX_LADDER_OPS {
        return Err(Error::Alphabet(format!(
            "{} ladder operators exceed the supported {MAX_LADDER_OPS}",
            structure.len()
        )));
    }
    let mut value = 0;
    let mut k = 0;
    for (idx, code) in term.ops() {
        if code.is_diagonal() {
            continue;
        }
        if structure.get(k) != Some(&idx) {
            return Err(Error::Alphabet(format!(
                "term structure does not match group structure {structure:?}"
            )));
        }
        match code {
            OpCode::Raise => value |= 1 << k,
            OpCode::Lower => {}
            other => {
                return Err(Error::Alphabet(format!(
                    "{other} at index {idx} in a fermionic operator"
                )))
            }
        }
        k += 1;
    }
    if k != structure.len() {
        return Err(Error::Alphabet(format!(
            "term structure does not match group structure {structure:?}"
        )));
    }
    Ok(value)
}

/// Row bits read along `structure`; bit `k` is the row bit at `structure[k]`.
#[inline]
pub fn row_ladder_integer(row: &[u64], structure: &[usize]) -> usize {
    structure
        .iter()
        .enumerate()
        .fold(0, |acc, (k, &i)| acc | (get_bit(row, i) as usize) << k)
}

/// Order within a ladder bucket: the diagonal part of the word. A term and
/// its adjoint share this key, so mirrored elements sum in the same order.
fn diagonal_part_cmp(a: &QubitTerm, b: &QubitTerm) -> Ordering {
    let da = a.ops().filter(|(_, c)| c.is_diagonal());
    let db = b.ops().filter(|(_, c)| c.is_diagonal());
    da.cmp(db)
}

/// Split `op` into diagonal terms and off-diagonal groups.
///
/// Expects like terms already combined. With `fermionic`, off-diagonal
/// codes must be `Lower`/`Raise` and at most four per term.
pub fn group_terms(op: &QubitOperator, fermionic: bool) -> Result<GroupedHamiltonian> {
    let (diagonal, mut offdiag): (Vec<QubitTerm>, Vec<QubitTerm>) =
        op.terms().iter().cloned().partition(QubitTerm::is_diagonal);

    if fermionic {
        if let Some(t) = offdiag
            .iter()
            .find(|t| t.codes().iter().any(|c| matches!(c, OpCode::X | OpCode::Y)))
        {
            let (idx, code) = t
                .ops()
                .find(|(_, c)| matches!(c, OpCode::X | OpCode::Y))
                .unwrap();
            return Err(Error::Alphabet(format!(
                "{code}{idx} is not allowed in a fermionic operator"
            )));
        }
    }

    let mut keyed: Vec<(Vec<usize>, QubitTerm)> = offdiag
        .drain(..)
        .map(|t| (t.off_diagonal_structure(), t))
        .collect();
    keyed.par_sort_by(|(sa, _), (sb, _)| sa.len().cmp(&sb.len()).then_with(|| sa.cmp(sb)));

    let mut group_ptrs = vec![0];
    let mut structures: Vec<Vec<usize>> = Vec::new();
    for (k, (s, _)) in keyed.iter().enumerate() {
        if structures.last() != Some(s) {
            if k > 0 {
                group_ptrs.push(k);
            }
            structures.push(s.clone());
        }
    }
    if !keyed.is_empty() {
        group_ptrs.push(keyed.len());
    }
    let mut offdiag: Vec<QubitTerm> = keyed.into_iter().map(|(_, t)| t).collect();

    let mut int_ptrs = Vec::new();
    if fermionic {
        int_ptrs.reserve(structures.len());
        for (g, structure) in structures.iter().enumerate() {
            let range = group_ptrs[g]..group_ptrs[g + 1];
            let mut ladders = offdiag[range.clone()]
                .iter()
                .map(|t| ladder_integer(t, structure).map(|v| (v, t.clone())))
                .collect::<Result<Vec<_>>>()?;
            ladders.sort_by(|(va, ta), (vb, tb)| va.cmp(vb).then_with(|| diagonal_part_cmp(ta, tb)));
            let mut ptrs = [range.start; INT_PTRS_LEN];
            let mut counts = [0usize; INT_PTRS_LEN - 1];
            for (v, _) in &ladders {
                counts[*v] += 1;
            }
            for v in 0..INT_PTRS_LEN - 1 {
                ptrs[v + 1] = ptrs[v] + counts[v];
            }
            for (slot, (_, t)) in offdiag[range].iter_mut().zip(ladders) {
                *slot = t;
            }
            int_ptrs.push(ptrs);
        }
    }

    let msob = structures
        .iter()
        .map(|s| *s.last().expect("off-diagonal structure is nonempty"))
        .collect();
    Ok(GroupedHamiltonian {
        num_qubits: op.num_qubits(),
        fermionic,
        real: op.is_real(),
        hermitian: op.is_hermitian(1e-12),
        diagonal,
        offdiag,
        group_ptrs,
        structures,
        msob,
        int_ptrs,
    })
}

/// Result of [`GroupedHamiltonian::trim_groups`].
#[derive(Clone, Debug)]
pub struct TrimOutcome {
    pub hamiltonian: GroupedHamiltonian,
    pub removed: usize,
    /// Set when no nonzero diagonal splitting exists; nothing was removed.
    pub disabled: bool,
    pub min_splitting: Option<f64>,
}

impl GroupedHamiltonian {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn is_fermionic(&self) -> bool {
        self.fermionic
    }

    /// All matrix elements are real.
    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn num_groups(&self) -> usize {
        self.structures.len()
    }

    pub fn diagonal_terms(&self) -> &[QubitTerm] {
        &self.diagonal
    }

    pub fn offdiag_terms(&self) -> &[QubitTerm] {
        &self.offdiag
    }

    pub fn group_ptrs(&self) -> &[usize] {
        &self.group_ptrs
    }

    #[inline]
    pub fn group_range(&self, g: usize) -> Range<usize> {
        self.group_ptrs[g]..self.group_ptrs[g + 1]
    }

    #[inline]
    pub fn group(&self, g: usize) -> &[QubitTerm] {
        &self.offdiag[self.group_range(g)]
    }

    #[inline]
    pub fn structure(&self, g: usize) -> &[usize] {
        &self.structures[g]
    }

    pub fn structures(&self) -> &[Vec<usize>] {
        &self.structures
    }

    #[inline]
    pub fn msob(&self, g: usize) -> usize {
        self.msob[g]
    }

    /// Per-group ladder pointers; empty unless fermionic.
    pub fn int_ptrs(&self) -> &[[usize; INT_PTRS_LEN]] {
        &self.int_ptrs
    }

    /// Terms of group `g` whose ladder integer equals `value` (fermionic only).
    #[inline]
    pub fn ladder_bucket(&self, g: usize, value: usize) -> Range<usize> {
        let p = &self.int_ptrs[g];
        p[value]..p[value + 1]
    }

    /// Reassemble into a plain operator (diagonal terms first).
    pub fn to_operator(&self) -> QubitOperator {
        let terms = self.diagonal.iter().chain(&self.offdiag).cloned().collect();
        QubitOperator::with_terms(self.num_qubits, terms).expect("terms were validated on input")
    }

    /// Drop whole groups whose largest coefficient, relative to the smallest
    /// nonzero diagonal splitting over the subspace, is below `tol`.
    pub fn trim_groups(&self, diag: &DiagonalCache, tol: f64) -> TrimOutcome {
        let mut values: Vec<f64> = diag.values().iter().map(|v| v.re).collect();
        values.sort_by(f64::total_cmp);
        let min_splitting = values
            .windows(2)
            .map(|w| w[1] - w[0])
            .filter(|&d| d > 0.0)
            .min_by(f64::total_cmp);

        let Some(split) = min_splitting else {
            if tol > 0.0 {
                log::warn!("all diagonal entries are equal; group trimming disabled");
            }
            return TrimOutcome {
                hamiltonian: self.clone(),
                removed: 0,
                disabled: true,
                min_splitting: None,
            };
        };

        let keep: Vec<usize> = (0..self.num_groups())
            .filter(|&g| {
                let mag = self
                    .group(g)
                    .iter()
                    .map(|t| t.coeff().norm())
                    .fold(0.0, f64::max);
                mag / split >= tol
            })
            .collect();

        let mut out = GroupedHamiltonian {
            num_qubits: self.num_qubits,
            fermionic: self.fermionic,
            real: self.real,
            hermitian: self.hermitian,
            diagonal: self.diagonal.clone(),
            offdiag: Vec::new(),
            group_ptrs: vec![0],
            structures: Vec::with_capacity(keep.len()),
            msob: Vec::with_capacity(keep.len()),
            int_ptrs: Vec::new(),
        };
        for &g in &keep {
            let base = out.offdiag.len();
            let start = self.group_ptrs[g];
            out.offdiag.extend_from_slice(self.group(g));
            out.group_ptrs.push(out.offdiag.len());
            out.structures.push(self.structures[g].clone());
            out.msob.push(self.msob[g]);
            if self.fermionic {
                let mut p = self.int_ptrs[g];
                for x in p.iter_mut() {
                    *x = *x - start + base;
                }
                out.int_ptrs.push(p);
            }
        }
        if keep.is_empty() {
            out.group_ptrs.clear();
            out.group_ptrs.push(0);
        }
        TrimOutcome {
            removed: self.num_groups() - keep.len(),
            hamiltonian: out,
            disabled: false,
            min_splitting: Some(split),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::heisenberg;
    use crate::operators::{jordan_wigner, FermionOperator, FermionTerm};
    use crate::C64;

    #[test]
    fn heisenberg_bond_groups() {
        let op = heisenberg(2, 0.3).combine_like_terms(0.0);
        let gh = group_terms(&op, false).unwrap();
        assert_eq!(gh.diagonal_terms().len(), 1);
        assert_eq!(gh.num_groups(), 1);
        assert_eq!(gh.structure(0), &[0, 1]);
        assert_eq!(gh.group(0).len(), 2);
        assert_eq!(gh.group_ptrs(), &[0, 2]);
        assert_eq!(gh.msob(0), 1);
        assert!(gh.int_ptrs().is_empty());
    }

    #[test]
    fn empty_operator() {
        let gh = group_terms(&QubitOperator::new(3), false).unwrap();
        assert_eq!(gh.num_groups(), 0);
        assert_eq!(gh.group_ptrs(), &[0]);
        assert!(gh.offdiag_terms().is_empty());
    }

    #[test]
    fn hopping_pair_fills_two_ladder_buckets() {
        let mut f = FermionOperator::new(2);
        f.push(FermionTerm::ladder(1.0, &[(0, true), (1, false)])).unwrap();
        f.push(FermionTerm::ladder(1.0, &[(1, true), (0, false)])).unwrap();
        let gh = group_terms(&jordan_wigner(&f).unwrap(), true).unwrap();
        assert_eq!(gh.num_groups(), 1);
        assert_eq!(gh.structure(0), &[0, 1]);
        let ptrs = gh.int_ptrs()[0];
        assert_eq!(ptrs.len(), 17);
        // Raise_0 Lower_1 -> 0b01, Lower_0 Raise_1 -> 0b10
        assert_eq!(gh.ladder_bucket(0, 0b01), 0..1);
        assert_eq!(gh.ladder_bucket(0, 0b10), 1..2);
        for v in [0, 3] {
            assert!(gh.ladder_bucket(0, v).is_empty());
        }
        assert_eq!(ptrs[16], 2);
    }

    #[test]
    fn ladder_integer_examples() {
        let t = QubitTerm::new(C64::new(1.0, 0.0), [(0, OpCode::Lower), (2, OpCode::Raise)]).unwrap();
        assert_eq!(ladder_integer(&t, &[0, 2]).unwrap(), 2);
        let t = QubitTerm::new(C64::new(1.0, 0.0), [(1, OpCode::Raise)]).unwrap();
        assert_eq!(ladder_integer(&t, &[1]).unwrap(), 1);
        let t = QubitTerm::new(C64::new(1.0, 0.0), [(0, OpCode::Lower), (1, OpCode::Lower)]).unwrap();
        assert_eq!(ladder_integer(&t, &[0, 1]).unwrap(), 0);
    }

    #[test]
    fn row_ladder_integer_examples() {
        let row = "0110".parse::<crate::BitString>().unwrap();
        assert_eq!(row_ladder_integer(row.words(), &[1, 2]), 3);
        let zero = crate::BitString::zeros(4);
        assert_eq!(row_ladder_integer(zero.words(), &[0, 3]), 0);
        let neel = "0101".parse::<crate::BitString>().unwrap();
        assert_eq!(row_ladder_integer(neel.words(), &[0, 1]), 1);
    }

    #[test]
    fn fermionic_mode_rejects_paulis() {
        let op = heisenberg(2, 0.3);
        assert!(matches!(group_terms(&op, true), Err(Error::Alphabet(_))));
    }

    #[test]
    fn structures_are_ordered_by_weight_then_lexicographic() {
        let mut op = QubitOperator::new(4);
        op.add(1.0, &[(1, OpCode::X), (3, OpCode::X)]).unwrap();
        op.add(1.0, &[(2, OpCode::X)]).unwrap();
        op.add(1.0, &[(0, OpCode::X), (3, OpCode::Y)]).unwrap();
        op.add(1.0, &[(0, OpCode::Y)]).unwrap();
        let gh = group_terms(&op, false).unwrap();
        let s: Vec<Vec<usize>> = gh.structures().to_vec();
        assert_eq!(s, vec![vec![0], vec![2], vec![0, 3], vec![1, 3]]);
    }
}
