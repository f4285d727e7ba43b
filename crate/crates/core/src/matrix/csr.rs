use std::fmt::Debug;

use rayon::prelude::*;

use crate::matrix::LinearOperator;
use crate::C64;

/// Matrix value type: `f64` when every element is real, else `C64`.
pub trait Scalar: Copy + Send + Sync + PartialEq + Debug + 'static {
    const IS_COMPLEX: bool;
    /// Callers guarantee a zero imaginary part for real scalars.
    fn from_c64(c: C64) -> Self;
    fn to_c64(self) -> C64;
    fn conj(self) -> Self;
}

impl Scalar for f64 {
    const IS_COMPLEX: bool = false;
    #[inline]
    fn from_c64(c: C64) -> Self {
        debug_assert_eq!(c.im, 0.0);
        c.re
    }
    #[inline]
    fn to_c64(self) -> C64 {
        C64::new(self, 0.0)
    }
    #[inline]
    fn conj(self) -> Self {
        self
    }
}

impl Scalar for C64 {
    const IS_COMPLEX: bool = true;
    #[inline]
    fn from_c64(c: C64) -> Self {
        c
    }
    #[inline]
    fn to_c64(self) -> C64 {
        self
    }
    #[inline]
    fn conj(self) -> Self {
        num_complex::Complex::conj(&self)
    }
}

/// Signed CSR index type (`i32` or `i64`), matching common sparse libraries.
pub trait ColumnIndex: Copy + Send + Sync + PartialEq + Debug + 'static {
    const BITS: u32;
    const MAX: usize;
    fn from_usize(v: usize) -> Self;
    fn index(self) -> usize;
}

impl ColumnIndex for i32 {
    const BITS: u32 = 32;
    const MAX: usize = i32::MAX as usize;
    #[inline]
    fn from_usize(v: usize) -> Self {
        debug_assert!(v <= <Self as ColumnIndex>::MAX);
        v as i32
    }
    #[inline]
    fn index(self) -> usize {
        self as usize
    }
}

impl ColumnIndex for i64 {
    const BITS: u32 = 64;
    const MAX: usize = i64::MAX as usize;
    #[inline]
    fn from_usize(v: usize) -> Self {
        v as i64
    }
    #[inline]
    fn index(self) -> usize {
        self as usize
    }
}

/// Canonical CSR storage: column indices strictly ascending per row.
#[derive(Clone, Debug, PartialEq)]
pub struct Csr<I, T> {
    pub dim: usize,
    pub indptr: Vec<I>,
    pub indices: Vec<I>,
    pub data: Vec<T>,
}

impl<I: ColumnIndex, T: Scalar> Csr<I, T> {
    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        self.indptr[i].index()..self.indptr[i + 1].index()
    }

    fn spmv(&self, x: &[C64], y: &mut [C64]) {
        y.par_iter_mut().enumerate().for_each(|(i, yi)| {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.row_range(i) {
                acc += self.data[k].to_c64() * x[self.indices[k].index()];
            }
            *yi = acc;
        });
    }
}

/// A Hamiltonian in CSR form with the narrowest index and value types.
#[derive(Clone, Debug, PartialEq)]
pub enum CsrMatrix {
    RealI32(Csr<i32, f64>),
    RealI64(Csr<i64, f64>),
    ComplexI32(Csr<i32, C64>),
    ComplexI64(Csr<i64, C64>),
}

macro_rules! dispatch {
    ($self:expr, $m:ident => $body:expr) => {
        match $self {
            CsrMatrix::RealI32($m) => $body,
            CsrMatrix::RealI64($m) => $body,
            CsrMatrix::ComplexI32($m) => $body,
            CsrMatrix::ComplexI64($m) => $body,
        }
    };
}

impl CsrMatrix {
    pub fn dim(&self) -> usize {
        dispatch!(self, m => m.dim)
    }

    pub fn nnz(&self) -> usize {
        dispatch!(self, m => m.nnz())
    }

    pub fn is_real(&self) -> bool {
        matches!(self, CsrMatrix::RealI32(_) | CsrMatrix::RealI64(_))
    }

    pub fn index_bits(&self) -> u32 {
        match self {
            CsrMatrix::RealI32(_) | CsrMatrix::ComplexI32(_) => 32,
            _ => 64,
        }
    }

    pub fn indptr(&self) -> Vec<usize> {
        dispatch!(self, m => m.indptr.iter().map(|v| v.index()).collect())
    }

    pub fn indices(&self) -> Vec<usize> {
        dispatch!(self, m => m.indices.iter().map(|v| v.index()).collect())
    }

    pub fn values(&self) -> Vec<C64> {
        dispatch!(self, m => m.data.iter().map(|v| v.to_c64()).collect())
    }

    /// `(column, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> Vec<(usize, C64)> {
        dispatch!(self, m => m
            .row_range(i)
            .map(|k| (m.indices[k].index(), m.data[k].to_c64()))
            .collect())
    }

    /// Visit every stored entry in row-major order.
    pub fn for_each_entry(&self, mut f: impl FnMut(usize, usize, C64)) {
        dispatch!(self, m => {
            for i in 0..m.dim {
                for k in m.row_range(i) {
                    f(i, m.indices[k].index(), m.data[k].to_c64());
                }
            }
        })
    }

    /// Element `(i, j)`; zero when not stored.
    pub fn get(&self, i: usize, j: usize) -> C64 {
        dispatch!(self, m => {
            let r = m.row_range(i);
            match m.indices[r.clone()].binary_search_by(|c| c.index().cmp(&j)) {
                Ok(k) => m.data[r.start + k].to_c64(),
                Err(_) => C64::new(0.0, 0.0),
            }
        })
    }

    /// Dense row-major copy. Intended for small matrices.
    pub fn to_dense(&self) -> Vec<Vec<C64>> {
        let n = self.dim();
        let mut out = vec![vec![C64::new(0.0, 0.0); n]; n];
        self.for_each_entry(|i, j, v| out[i][j] = v);
        out
    }

    /// Largest `|A_ij - conj(A_ji)|` over stored entries.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        self.for_each_entry(|i, j, v| {
            worst = worst.max((v - self.get(j, i).conj()).norm());
        });
        worst
    }

    pub fn spmv(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.dim());
        assert_eq!(y.len(), self.dim());
        dispatch!(self, m => m.spmv(x, y))
    }
}

impl LinearOperator for CsrMatrix {
    fn dim(&self) -> usize {
        CsrMatrix::dim(self)
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        self.spmv(x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_by_two() -> CsrMatrix {
        CsrMatrix::RealI32(Csr {
            dim: 2,
            indptr: vec![0, 2, 4],
            indices: vec![0, 1, 0, 1],
            data: vec![-1.0, 0.6, 0.6, -1.0],
        })
    }

    #[test]
    fn spmv_small() {
        let m = two_by_two();
        let x = [C64::new(1.0, 0.0); 2];
        let mut y = [C64::new(0.0, 0.0); 2];
        m.spmv(&x, &mut y);
        for v in y {
            assert!((v - C64::new(-0.4, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn identity_spmv() {
        let m = CsrMatrix::ComplexI64(Csr {
            dim: 3,
            indptr: vec![0, 1, 2, 3],
            indices: vec![0, 1, 2],
            data: vec![C64::new(1.0, 0.0); 3],
        });
        let x = [C64::new(1.0, 2.0), C64::new(-3.0, 0.5), C64::new(0.0, 1.0)];
        let mut y = [C64::new(0.0, 0.0); 3];
        m.spmv(&x, &mut y);
        assert_eq!(x, y);
        assert_eq!(m.index_bits(), 64);
        assert!(!m.is_real());
    }

    #[test]
    fn element_access() {
        let m = two_by_two();
        assert_eq!(m.get(1, 0), C64::new(0.6, 0.0));
        assert_eq!(m.nnz(), 4);
        assert_eq!(m.hermiticity_error(), 0.0);
        assert_eq!(m.row(1), vec![(0, C64::new(0.6, 0.0)), (1, C64::new(-1.0, 0.0))]);
    }
}
