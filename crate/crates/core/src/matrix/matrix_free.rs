use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grouping::GroupedHamiltonian;
use crate::matrix::{compute_diagonal, DiagonalCache, LinearOperator, RowEvaluator};
use crate::subspace::Subspace;
use crate::C64;

/// `y = H x` with every off-diagonal element recomputed on each call.
///
/// Each output row gathers its own contributions in fixed group order, so
/// results do not depend on the thread count.
pub struct MatrixFreeOperator<'a> {
    gh: &'a GroupedHamiltonian,
    s: &'a Subspace,
    diag: DiagonalCache,
    bucket_skip: bool,
}

impl<'a> MatrixFreeOperator<'a> {
    pub fn new(gh: &'a GroupedHamiltonian, s: &'a Subspace) -> Result<Self> {
        let diag = compute_diagonal(gh, s);
        Self::with_diagonal(gh, s, diag)
    }

    pub fn with_diagonal(gh: &'a GroupedHamiltonian, s: &'a Subspace, diag: DiagonalCache) -> Result<Self> {
        if gh.num_qubits() != s.num_qubits() {
            return Err(Error::WidthMismatch {
                expected: gh.num_qubits(),
                found: s.num_qubits(),
            });
        }
        if diag.len() != s.dim() {
            return Err(Error::Dimension(format!(
                "diagonal has {} entries for a subspace of dimension {}",
                diag.len(),
                s.dim()
            )));
        }
        Ok(MatrixFreeOperator {
            gh,
            s,
            diag,
            bucket_skip: true,
        })
    }

    pub fn set_bucket_skip(&mut self, on: bool) {
        self.bucket_skip = on;
    }

    pub fn diagonal(&self) -> &DiagonalCache {
        &self.diag
    }
}

impl LinearOperator for MatrixFreeOperator<'_> {
    fn dim(&self) -> usize {
        self.s.dim()
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.s.dim());
        assert_eq!(y.len(), self.s.dim());
        let eval = RowEvaluator {
            gh: self.gh,
            bucket_skip: self.bucket_skip,
        };
        let s = self.s;
        let d = self.diag.values();
        y.par_iter_mut().enumerate().for_each_init(
            || vec![0u64; s.stride()],
            |col, (i, yi)| {
                let mut acc = d[i] * x[i];
                eval.for_each(s.row(i), false, col, |c| s.lookup(c), |j, v| acc += v * x[j]);
                *yi = acc;
            },
        );
    }
}
