//! CSR construction.
//!
//! Both modes evaluate rows independently in parallel. `TwoPass` counts
//! nonzeros per row, allocates the final arrays once and evaluates every
//! row again to fill them. `Fast` evaluates each row once into a per-row
//! buffer and copies the buffers into CSR arrays. With `lower_only`, only
//! elements below the diagonal are evaluated; each one is also written,
//! conjugated, into the mirrored upper slot by a serial sweep over rows in
//! ascending order, which keeps columns sorted without a second sort.
//!
//! Every row stores its diagonal entry, even when it is zero.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grouping::GroupedHamiltonian;
use crate::matrix::csr::{ColumnIndex, Csr, CsrMatrix, Scalar};
use crate::matrix::{compute_diagonal, DiagonalCache, RowEvaluator};
use crate::subspace::Subspace;
use crate::C64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BuildMode {
    TwoPass,
    #[default]
    Fast,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IndexWidth {
    /// 32-bit when both the dimension and nnz fit, else 64-bit.
    #[default]
    Auto,
    W32,
    W64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    pub mode: BuildMode,
    /// `None` enables lower-triangle evaluation for Hermitian operators over
    /// integer-sorted subspaces.
    pub lower_only: Option<bool>,
    /// Skip fermionic group terms whose ladder integer cannot match the row.
    pub bucket_skip: bool,
    pub index_width: IndexWidth,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            mode: BuildMode::Fast,
            lower_only: None,
            bucket_skip: true,
            index_width: IndexWidth::Auto,
        }
    }
}

impl BuildOptions {
    pub fn resolve_lower_only(&self, gh: &GroupedHamiltonian, s: &Subspace) -> Result<bool> {
        match self.lower_only {
            None => Ok(gh.is_hermitian() && s.is_sorted_by_value()),
            Some(false) => Ok(false),
            Some(true) => {
                if !s.is_sorted_by_value() {
                    return Err(Error::Config(
                        "lower-triangle evaluation needs an integer-sorted subspace".into(),
                    ));
                }
                if !gh.is_hermitian() {
                    return Err(Error::Config(
                        "lower-triangle evaluation needs a Hermitian operator".into(),
                    ));
                }
                Ok(true)
            }
        }
    }
}

pub fn build_csr(gh: &GroupedHamiltonian, s: &Subspace, opts: &BuildOptions) -> Result<CsrMatrix> {
    let diag = compute_diagonal(gh, s);
    build_csr_with_diagonal(gh, s, &diag, opts)
}

pub fn build_csr_with_diagonal(
    gh: &GroupedHamiltonian,
    s: &Subspace,
    diag: &DiagonalCache,
    opts: &BuildOptions,
) -> Result<CsrMatrix> {
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
    let lower_only = opts.resolve_lower_only(gh, s)?;
    let eval = RowEvaluator {
        gh,
        bucket_skip: opts.bucket_skip,
    };
    let dim = s.dim();
    let stride = s.stride();

    let collect = |i: usize, out: &mut Vec<(usize, C64)>, col: &mut [u64]| {
        out.clear();
        eval.for_each(s.row(i), lower_only, col, |c| s.lookup(c), |j, v| out.push((j, v)));
        out.sort_unstable_by_key(|e| e.0);
    };

    let upper: Vec<AtomicUsize> = (0..if lower_only { dim } else { 0 })
        .map(|_| AtomicUsize::new(0))
        .collect();
    let count_mirrors = |entries: &[(usize, C64)]| {
        if lower_only {
            for &(j, _) in entries {
                upper[j].fetch_add(1, Ordering::Relaxed);
            }
        }
    };

    let (own, buffers): (Vec<usize>, Option<Vec<Vec<(usize, C64)>>>) = match opts.mode {
        BuildMode::TwoPass => {
            let own = (0..dim)
                .into_par_iter()
                .map_init(
                    || (Vec::new(), vec![0u64; stride]),
                    |(buf, col), i| {
                        collect(i, buf, col);
                        count_mirrors(buf);
                        buf.len()
                    },
                )
                .collect();
            (own, None)
        }
        BuildMode::Fast => {
            let bufs: Vec<Vec<(usize, C64)>> = (0..dim)
                .into_par_iter()
                .map_init(
                    || vec![0u64; stride],
                    |col, i| {
                        let mut buf = Vec::new();
                        collect(i, &mut buf, col);
                        count_mirrors(&buf);
                        buf
                    },
                )
                .collect();
            (bufs.iter().map(Vec::len).collect(), Some(bufs))
        }
    };

    let upper: Vec<usize> = upper.into_iter().map(AtomicUsize::into_inner).collect();
    let row_len: Vec<usize> = (0..dim)
        .map(|i| own[i] + 1 + upper.get(i).copied().unwrap_or(0))
        .collect();
    let nnz: usize = row_len.iter().sum();

    let wide = match opts.index_width {
        IndexWidth::W64 => true,
        IndexWidth::W32 => {
            if nnz > i32::MAX as usize || dim > i32::MAX as usize {
                return Err(Error::IndexOverflow { nnz, bits: 32 });
            }
            false
        }
        IndexWidth::Auto => nnz > i32::MAX as usize || dim > i32::MAX as usize,
    };

    let fill = |i: usize, out: &mut Vec<(usize, C64)>, col: &mut [u64]| match &buffers {
        Some(bufs) => {
            out.clear();
            out.extend_from_slice(&bufs[i]);
        }
        None => collect(i, out, col),
    };
    let plan = Plan {
        stride,
        row_len: &row_len,
        own: &own,
        diag: diag.values(),
        lower_only,
    };
    Ok(match (gh.is_real(), wide) {
        (true, false) => CsrMatrix::RealI32(plan.assemble(fill)),
        (true, true) => CsrMatrix::RealI64(plan.assemble(fill)),
        (false, false) => CsrMatrix::ComplexI32(plan.assemble(fill)),
        (false, true) => CsrMatrix::ComplexI64(plan.assemble(fill)),
    })
}

struct Plan<'a> {
    stride: usize,
    row_len: &'a [usize],
    own: &'a [usize],
    diag: &'a [C64],
    lower_only: bool,
}

impl Plan<'_> {
    fn assemble<I, T, F>(&self, fill: F) -> Csr<I, T>
    where
        I: ColumnIndex,
        T: Scalar,
        F: Fn(usize, &mut Vec<(usize, C64)>, &mut [u64]) + Sync,
    {
        let dim = self.row_len.len();
        let mut indptr = Vec::with_capacity(dim + 1);
        let mut offsets = Vec::with_capacity(dim + 1);
        let mut acc = 0usize;
        indptr.push(I::from_usize(0));
        offsets.push(0);
        for &len in self.row_len {
            acc += len;
            indptr.push(I::from_usize(acc));
            offsets.push(acc);
        }
        let nnz = acc;
        let mut indices = vec![I::from_usize(0); nnz];
        let mut data = vec![T::from_c64(C64::new(0.0, 0.0)); nnz];

        let mut rows: Vec<(&mut [I], &mut [T])> = Vec::with_capacity(dim);
        {
            let (mut ri, mut rd) = (&mut indices[..], &mut data[..]);
            for &len in self.row_len {
                let (a, rest_i) = std::mem::take(&mut ri).split_at_mut(len);
                let (b, rest_d) = std::mem::take(&mut rd).split_at_mut(len);
                rows.push((a, b));
                ri = rest_i;
                rd = rest_d;
            }
        }

        let lower_only = self.lower_only;
        rows.into_par_iter().enumerate().for_each_init(
            || (Vec::new(), vec![0u64; self.stride]),
            |(buf, col), (i, (idx, dat))| {
                fill(i, buf, col);
                let d = (i, self.diag[i]);
                let split = buf.partition_point(|e| e.0 < i);
                let (before, after) = buf.split_at(split);
                let after = if lower_only { &[][..] } else { after };
                debug_assert!(!lower_only || after.is_empty());
                for (k, &(j, v)) in before
                    .iter()
                    .chain(std::iter::once(&d))
                    .chain(after)
                    .enumerate()
                {
                    idx[k] = I::from_usize(j);
                    dat[k] = T::from_c64(v);
                }
            },
        );

        if lower_only {
            let mut cursor: Vec<usize> = (0..dim).map(|j| offsets[j] + self.own[j] + 1).collect();
            for i in 0..dim {
                for k in offsets[i]..offsets[i] + self.own[i] {
                    let j = indices[k].index();
                    let v = data[k].conj();
                    let c = cursor[j];
                    indices[c] = I::from_usize(i);
                    data[c] = v;
                    cursor[j] += 1;
                }
            }
            debug_assert!((0..dim).all(|j| cursor[j] == offsets[j + 1]));
        }

        Csr {
            dim,
            indptr,
            indices,
            data,
        }
    }
}
