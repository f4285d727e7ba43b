//! Subspace Hamiltonian construction for sampled bit-string subspaces.
//!
//! Qubit and fermionic Hamiltonians are expressed over an extended
//! single-qubit alphabet (Pauli operators plus projectors and ladder
//! operators), grouped by off-diagonal structure, and evaluated over a
//! [`Subspace`] of bit-strings as a CSR matrix or as a matrix-free
//! operator. A built-in Davidson solver finds the lowest eigenpair, and
//! [`ramps`] prunes a subspace perturbatively around a seed set.

pub mod bits;
pub mod eigensolver;
pub mod error;
pub mod grouping;
pub mod io;
pub mod matrix;
pub mod models;
pub mod operators;
pub mod ramps;
pub mod subspace;

pub use num_complex::Complex64 as C64;

pub use bits::BitString;
pub use eigensolver::{solve_lowest, InitialVector, Preconditioner, SolveOptions, Solution};
pub use error::{Error, Result};
pub use grouping::{group_terms, GroupedHamiltonian};
pub use matrix::{
    build_csr, compute_diagonal, BuildMode, BuildOptions, CsrMatrix, DiagonalCache,
    LinearOperator, MatrixFreeOperator,
};
pub use operators::{
    jordan_wigner, merge_pair, pauli_decompose, FermionOperator, FermionSymbol, FermionTerm,
    OpCode, QubitOperator, QubitTerm,
};
pub use ramps::{ramps, RampsConfig, RampsOutcome};
pub use subspace::{column_bitstring, Subspace};
