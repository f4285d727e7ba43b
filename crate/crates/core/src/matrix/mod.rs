//! Matrix elements of a grouped Hamiltonian over a subspace.

mod build;
mod csr;
mod matrix_free;

pub use build::{build_csr, build_csr_with_diagonal, BuildMode, BuildOptions, IndexWidth};
pub use csr::{ColumnIndex, Csr, CsrMatrix, Scalar};
pub use matrix_free::MatrixFreeOperator;

use rayon::prelude::*;

use crate::bits::get_bit;
use crate::grouping::{row_ladder_integer, GroupedHamiltonian};
use crate::subspace::{column_words, Subspace};
use crate::C64;

/// `y = A x` over complex vectors.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[C64], y: &mut [C64]);
}

/// Diagonal matrix elements over a subspace, one per row.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalCache {
    values: Vec<C64>,
}

impl DiagonalCache {
    pub fn from_values(values: Vec<C64>) -> Self {
        DiagonalCache { values }
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index and real value of the lowest diagonal entry.
    pub fn argmin(&self) -> Option<(usize, f64)> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.re))
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
    }
}

/// `<row|H_diag|row>` for any bit-string, member of a subspace or not.
/// Projector failures short-circuit the term to zero.
#[inline]
pub fn diagonal_value(gh: &GroupedHamiltonian, row: &[u64]) -> C64 {
    gh.diagonal_terms()
        .iter()
        .filter_map(|t| t.row_element(row))
        .sum()
}

pub fn compute_diagonal(gh: &GroupedHamiltonian, s: &Subspace) -> DiagonalCache {
    DiagonalCache {
        values: s.par_rows().map(|row| diagonal_value(gh, row)).collect(),
    }
}

/// Row bit at the group's most-significant off-diagonal index. With an
/// integer-sorted subspace, `true` means the element sits below the
/// diagonal.
#[inline]
pub fn msob_is_lower(row: &[u64], msob: usize) -> bool {
    get_bit(row, msob)
}

/// Sum of group `g`'s terms at `(row, row ^ structure)`.
///
/// In fermionic mode with `bucket_skip`, only the terms whose ladder
/// integer matches the row are visited; the result is the same either way.
#[inline]
pub fn group_element(gh: &GroupedHamiltonian, g: usize, row: &[u64], bucket_skip: bool) -> C64 {
    let range = if gh.is_fermionic() && bucket_skip {
        gh.ladder_bucket(g, row_ladder_integer(row, gh.structure(g)))
    } else {
        gh.group_range(g)
    };
    sum_terms(gh, range, row)
}

#[inline]
fn sum_terms(gh: &GroupedHamiltonian, range: std::ops::Range<usize>, row: &[u64]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for t in &gh.offdiag_terms()[range] {
        if let Some(v) = t.row_element(row) {
            acc += v;
        }
    }
    acc
}

/// Shared per-row evaluation used by CSR builds, matrix-free products and
/// the perturbative pruning.
pub(crate) struct RowEvaluator<'a> {
    pub gh: &'a GroupedHamiltonian,
    pub bucket_skip: bool,
}

impl RowEvaluator<'_> {
    /// Visit every nonzero off-diagonal element of `row` whose column
    /// `lookup` accepts. With `lower_only`, groups whose MSOB row bit is
    /// clear are skipped before any other work. `col` is scratch space of
    /// the row's word length.
    #[inline]
    pub fn for_each<F, L, R>(&self, row: &[u64], lower_only: bool, col: &mut [u64], lookup: L, mut f: F)
    where
        L: Fn(&[u64]) -> Option<R>,
        F: FnMut(R, C64),
    {
        let gh = self.gh;
        let fermionic_skip = gh.is_fermionic() && self.bucket_skip;
        for g in 0..gh.num_groups() {
            if lower_only && !msob_is_lower(row, gh.msob(g)) {
                continue;
            }
            let structure = gh.structure(g);
            let range = if fermionic_skip {
                let r = gh.ladder_bucket(g, row_ladder_integer(row, structure));
                if r.is_empty() {
                    continue;
                }
                r
            } else {
                gh.group_range(g)
            };
            column_words(row, structure, col);
            let Some(target) = lookup(col) else {
                continue;
            };
            let v = sum_terms(gh, range, row);
            if v.re != 0.0 || v.im != 0.0 {
                f(target, v);
            }
        }
    }
}
