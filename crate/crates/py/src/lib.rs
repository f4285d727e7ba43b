//! Python bindings: operators, subspaces, matrix construction, the
//! eigensolver and perturbative subspace selection.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use qsd_core::io;
use qsd_core::matrix::IndexWidth;
use qsd_core::models::{self, FlipCorrection};
use qsd_core::ramps::default_target_energy;
use qsd_core::{
    compute_diagonal, group_terms, BuildMode, BuildOptions, Error, GroupedHamiltonian,
    MatrixFreeOperator, RampsConfig, SolveOptions, C64,
};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Qubit operator over the extended alphabet.
#[pyclass(module = "qsd", frozen)]
struct QubitOperator {
    inner: qsd_core::QubitOperator,
}

#[pymethods]
impl QubitOperator {
    /// Parse the term-list text format.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        let inner = io::parse_term_list(text).map_err(to_py)?;
        Ok(QubitOperator { inner })
    }

    /// Jordan-Wigner image of the Hamiltonian in an FCIDUMP text.
    #[staticmethod]
    #[pyo3(signature = (text, pauli = false))]
    fn from_fcidump(text: &str, pauli: bool) -> PyResult<Self> {
        let f = io::parse_fcidump(text).map_err(to_py)?;
        let mut inner = qsd_core::jordan_wigner(&f.to_fermion_operator()).map_err(to_py)?;
        if pauli {
            inner = qsd_core::pauli_decompose(&inner);
        }
        Ok(QubitOperator { inner: inner.combine_like_terms(0.0) })
    }

    /// Open Heisenberg chain with in-plane coupling `j`.
    #[staticmethod]
    fn heisenberg(sites: usize, j: f64) -> Self {
        QubitOperator { inner: models::heisenberg(sites, j) }
    }

    fn to_text(&self) -> String {
        io::write_term_list(&self.inner)
    }

    #[getter]
    fn num_qubits(&self) -> usize {
        self.inner.num_qubits()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("QubitOperator(num_qubits={}, terms={})", self.inner.num_qubits(), self.inner.len())
    }
}

/// Ordered set of bit-strings, most-significant bit first in text form.
#[pyclass(module = "qsd", frozen)]
struct Subspace {
    inner: qsd_core::Subspace,
}

#[pymethods]
impl Subspace {
    #[new]
    fn new(strings: Vec<String>) -> PyResult<Self> {
        let inner = qsd_core::Subspace::from_strs(&strings).map_err(to_py)?;
        Ok(Subspace { inner })
    }

    #[staticmethod]
    fn full(num_qubits: usize) -> PyResult<Self> {
        Ok(Subspace { inner: qsd_core::Subspace::full(num_qubits).map_err(to_py)? })
    }

    /// Neel state plus its magnetization-preserving single-flip neighbours.
    #[staticmethod]
    #[pyo3(signature = (sites, hamming = 1, discard = false))]
    fn neel(sites: usize, hamming: usize, discard: bool) -> PyResult<Self> {
        let correction = if discard { FlipCorrection::Discard } else { FlipCorrection::PairFlip };
        let inner = models::neel_subspace(sites, hamming, correction).map_err(to_py)?;
        Ok(Subspace { inner })
    }

    #[getter]
    fn num_qubits(&self) -> usize {
        self.inner.num_qubits()
    }

    fn strings(&self) -> Vec<String> {
        self.inner.iter().map(|b| b.to_string()).collect()
    }

    fn index(&self, bits: &str) -> PyResult<Option<usize>> {
        let b = qsd_core::BitString::parse_msb(bits).map_err(to_py)?;
        Ok(self.inner.contains(&b))
    }

    fn sorted(&self) -> Self {
        Subspace { inner: self.inner.sort_by_integer_value() }
    }

    fn __len__(&self) -> usize {
        self.inner.dim()
    }

    fn __repr__(&self) -> String {
        format!("Subspace(num_qubits={}, dim={})", self.inner.num_qubits(), self.inner.dim())
    }
}

fn grouped(op: &QubitOperator, fermionic: bool) -> PyResult<GroupedHamiltonian> {
    group_terms(&op.inner.combine_like_terms(0.0), fermionic).map_err(to_py)
}

fn build_options(mode: &str, lower_only: Option<bool>) -> PyResult<BuildOptions> {
    let mode = match mode {
        "fast" => BuildMode::Fast,
        "two-pass" => BuildMode::TwoPass,
        other => return Err(PyValueError::new_err(format!("unknown build mode {other:?}"))),
    };
    Ok(BuildOptions { mode, lower_only, index_width: IndexWidth::Auto, ..Default::default() })
}

/// Subspace matrix as CSR arrays `(indptr, indices, data)`.
#[pyfunction]
#[pyo3(signature = (op, subspace, fermionic = false, mode = "fast", lower_only = None))]
fn build_csr(
    py: Python<'_>,
    op: &QubitOperator,
    subspace: &Subspace,
    fermionic: bool,
    mode: &str,
    lower_only: Option<bool>,
) -> PyResult<(Vec<usize>, Vec<usize>, Vec<C64>)> {
    let gh = grouped(op, fermionic)?;
    let opts = build_options(mode, lower_only)?;
    let m = py
        .detach(|| qsd_core::build_csr(&gh, &subspace.inner, &opts))
        .map_err(to_py)?;
    Ok((m.indptr(), m.indices(), m.values()))
}

/// Lowest eigenpair: `(eigenvalue, eigenvector, residual, iterations, converged)`.
#[pyfunction]
#[pyo3(signature = (op, subspace, fermionic = false, matrix_free = false, tol = 1e-9, max_iter = 1000, seed = 0))]
#[allow(clippy::too_many_arguments)]
fn solve(
    py: Python<'_>,
    op: &QubitOperator,
    subspace: &Subspace,
    fermionic: bool,
    matrix_free: bool,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> PyResult<(f64, Vec<C64>, f64, usize, bool)> {
    let gh = grouped(op, fermionic)?;
    let s = &subspace.inner;
    let opts = SolveOptions { tol, max_iter, seed, ..Default::default() };
    let sol = py
        .detach(|| {
            let diag = compute_diagonal(&gh, s);
            if matrix_free {
                let a = MatrixFreeOperator::with_diagonal(&gh, s, diag.clone())?;
                qsd_core::solve_lowest(&a, &diag, &opts)
            } else {
                let m = qsd_core::build_csr(&gh, s, &BuildOptions::default())?;
                qsd_core::solve_lowest(&m, &diag, &opts)
            }
        })
        .map_err(to_py)?;
    Ok((sol.eigenvalue, sol.eigenvector, sol.residual, sol.iterations, sol.converged))
}

/// Perturbative subspace grown from `seeds`; the target energy defaults to
/// the lowest seed diagonal element.
#[pyfunction]
#[pyo3(signature = (op, seeds, tol, energy = None, max_depth = 4, restrict_to = None, fermionic = false))]
fn ramps(
    op: &QubitOperator,
    seeds: &Subspace,
    tol: f64,
    energy: Option<f64>,
    max_depth: usize,
    restrict_to: Option<&Subspace>,
    fermionic: bool,
) -> PyResult<Subspace> {
    let gh = grouped(op, fermionic)?;
    let e = match energy {
        Some(e) => e,
        None => default_target_energy(&gh, &seeds.inner)
            .ok_or_else(|| PyValueError::new_err("no seed bit-strings"))?,
    };
    let mut cfg = RampsConfig::new(e, tol);
    cfg.max_depth = max_depth;
    let out = qsd_core::ramps(&gh, &seeds.inner, restrict_to.map(|r| &r.inner), &cfg).map_err(to_py)?;
    Ok(Subspace { inner: out.subspace })
}

#[pymodule]
fn qsd(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<QubitOperator>()?;
    m.add_class::<Subspace>()?;
    m.add_function(wrap_pyfunction!(build_csr, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(ramps, m)?)?;
    Ok(())
}
