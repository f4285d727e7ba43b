//! Dense reference implementations used as test oracles. Nothing here calls
//! into the evaluation code under test; matrices are assembled from 2x2
//! blocks by Kronecker products and explicit matrix multiplication.
#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use qsd_core::{FermionOperator, FermionSymbol, OpCode, QubitOperator, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Dense = DMatrix<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// 2x2 matrix `m[row][col]` written out independently of the library.
pub fn single(code: OpCode) -> Dense {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    let rows = match code {
        OpCode::Z => [o + l, o, o, -l],
        OpCode::P0 => [l, o, o, o],
        OpCode::P1 => [o, o, o, l],
        OpCode::X => [o, l, l, o],
        OpCode::Y => [o, -i, i, o],
        OpCode::Lower => [o, l, o, o],
        OpCode::Raise => [o, o, l, o],
    };
    DMatrix::from_row_slice(2, 2, &rows)
}

pub fn identity(n: usize) -> Dense {
    DMatrix::identity(n, n)
}

/// `ops[n-1] (x) ... (x) ops[0]`, so qubit 0 is the least significant bit of
/// the basis index.
pub fn kron_chain(per_qubit: &[Dense]) -> Dense {
    let mut m = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for q in per_qubit.iter().rev() {
        m = m.kronecker(q);
    }
    m
}

pub fn dense_word(n: usize, ops: &[(usize, OpCode)]) -> Dense {
    let mut per: Vec<Dense> = (0..n).map(|_| identity(2)).collect();
    for &(q, code) in ops {
        per[q] = single(code);
    }
    kron_chain(&per)
}

pub fn dense_qubit(op: &QubitOperator) -> Dense {
    let n = op.num_qubits();
    let mut m = DMatrix::zeros(1 << n, 1 << n);
    for t in op.terms() {
        let ops: Vec<(usize, OpCode)> = t.ops().collect();
        m += dense_word(n, &ops) * t.coeff();
    }
    m
}

/// Textbook Jordan-Wigner annihilator `f_j = Z_0 ... Z_{j-1} |0><1|_j`.
pub fn annihilator(n: usize, j: usize) -> Dense {
    let mut per: Vec<Dense> = (0..n).map(|_| identity(2)).collect();
    for p in per.iter_mut().take(j) {
        *p = single(OpCode::Z);
    }
    per[j] = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    kron_chain(&per)
}

pub fn dense_symbol(n: usize, mode: usize, s: FermionSymbol) -> Dense {
    let f = annihilator(n, mode);
    let fd = f.adjoint();
    match s {
        FermionSymbol::Lower => f,
        FermionSymbol::Raise => fd,
        FermionSymbol::P0 => &f * &fd,
        FermionSymbol::P1 => &fd * &f,
    }
}

/// Sum of coefficient times ordered products of dense fermion matrices.
pub fn dense_fermion(op: &FermionOperator) -> Dense {
    let n = op.num_modes();
    let dim = 1 << n;
    let mut m = identity(dim) * c(op.constant(), 0.0);
    for t in op.terms() {
        let mut p = identity(dim);
        for &(mode, s) in t.ops() {
            p *= dense_symbol(n, mode, s);
        }
        m += p * t.coeff();
    }
    m
}

pub fn max_abs_diff(a: &Dense, b: &Dense) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Lowest eigenvalue of a Hermitian dense matrix.
pub fn lowest_eigenvalue(m: &Dense) -> f64 {
    let real = m.iter().all(|v| v.im == 0.0);
    if real {
        let r = m.map(|v| v.re);
        SymmetricEigen::new(r).eigenvalues.min()
    } else {
        SymmetricEigen::new(m.clone()).eigenvalues.min()
    }
}

/// Rows and columns of `m` at `idx`.
pub fn slice(m: &Dense, idx: &[usize]) -> Dense {
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

/// Open chain `J (XX + YY) + ZZ` on each bond, built without library helpers.
pub fn heisenberg_terms(sites: usize, j: f64) -> QubitOperator {
    let mut op = QubitOperator::new(sites);
    for i in 0..sites.saturating_sub(1) {
        op.add(j, &[(i, OpCode::X), (i + 1, OpCode::X)]).unwrap();
        op.add(j, &[(i, OpCode::Y), (i + 1, OpCode::Y)]).unwrap();
        op.add(1.0, &[(i, OpCode::Z), (i + 1, OpCode::Z)]).unwrap();
    }
    op
}

/// Random Hermitian fermionic operator: each random term comes with its
/// adjoint. Terms use up to `max_ops` symbols on arbitrary (possibly
/// repeated) modes.
pub fn random_fermion(r: &mut ChaCha8Rng, modes: usize, terms: usize, max_ops: usize) -> FermionOperator {
    use qsd_core::FermionTerm;
    let mut op = FermionOperator::new(modes);
    op.set_constant(r.random_range(-1.0..1.0));
    for _ in 0..terms {
        let k = r.random_range(1..=max_ops);
        let ops: Vec<(usize, FermionSymbol)> = (0..k)
            .map(|_| {
                let s = FermionSymbol::ALL[r.random_range(0..4)];
                (r.random_range(0..modes), s)
            })
            .collect();
        let coeff = c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
        let adj: Vec<(usize, FermionSymbol)> = ops
            .iter()
            .rev()
            .map(|&(m, s)| {
                let a = match s {
                    FermionSymbol::Lower => FermionSymbol::Raise,
                    FermionSymbol::Raise => FermionSymbol::Lower,
                    other => other,
                };
                (m, a)
            })
            .collect();
        op.push(FermionTerm::new(coeff, ops)).unwrap();
        op.push(FermionTerm::new(coeff.conj(), adj)).unwrap();
    }
    op
}

/// Random Hermitian qubit operator over the full extended alphabet: random
/// words plus their adjoints, and real diagonal words.
pub fn random_qubit(r: &mut ChaCha8Rng, n: usize, terms: usize, max_weight: usize, complex: bool) -> QubitOperator {
    let mut op = QubitOperator::new(n);
    for _ in 0..terms {
        let w = r.random_range(1..=max_weight.min(n));
        let mut qubits: Vec<usize> = (0..n).collect();
        for i in 0..w {
            let j = r.random_range(i..n);
            qubits.swap(i, j);
        }
        let ops: Vec<(usize, OpCode)> = qubits[..w]
            .iter()
            .map(|&q| (q, OpCode::ALL[r.random_range(0..7)]))
            .collect();
        let coeff = if complex {
            c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
        } else {
            c(r.random_range(-1.0..1.0), 0.0)
        };
        let adj: Vec<(usize, OpCode)> = ops.iter().map(|&(q, s)| (q, s.adjoint())).collect();
        op.add(coeff, &ops).unwrap();
        op.add(coeff.conj(), &adj).unwrap();
    }
    op
}

/// Random fermionic-alphabet qubit operator (Z, P0, P1, Lower, Raise) with
/// adjoint pairs, as produced by Jordan-Wigner.
pub fn random_fermionic_qubit(r: &mut ChaCha8Rng, n: usize, terms: usize) -> QubitOperator {
    const CODES: [OpCode; 5] = [OpCode::Z, OpCode::P0, OpCode::P1, OpCode::Lower, OpCode::Raise];
    let mut op = QubitOperator::new(n);
    for _ in 0..terms {
        let w = r.random_range(1..=n.min(6));
        let mut qubits: Vec<usize> = (0..n).collect();
        for i in 0..w {
            let j = r.random_range(i..n);
            qubits.swap(i, j);
        }
        let mut ops: Vec<(usize, OpCode)> = Vec::new();
        let mut ladders = 0;
        for &q in &qubits[..w] {
            let mut code = CODES[r.random_range(0..5)];
            if code.is_ladder() {
                if ladders == 4 {
                    code = OpCode::Z;
                } else {
                    ladders += 1;
                }
            }
            ops.push((q, code));
        }
        let coeff = c(r.random_range(-1.0..1.0), 0.0);
        let adj: Vec<(usize, OpCode)> = ops.iter().map(|&(q, s)| (q, s.adjoint())).collect();
        op.add(coeff, &ops).unwrap();
        op.add(coeff, &adj).unwrap();
    }
    op
}

/// Distinct random basis indices in random order.
pub fn random_indices(r: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..1usize << n).collect();
    for i in 0..k {
        let j = r.random_range(i..all.len());
        all.swap(i, j);
    }
    all.truncate(k);
    all
}

pub fn random_vector(r: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))).collect()
}

/// Strong random diagonal from Z and ZZ fields, weak random off-diagonal
/// terms from the extended alphabet.
pub fn diagonally_dominant(r: &mut ChaCha8Rng, n: usize) -> QubitOperator {
    let mut op = QubitOperator::new(n);
    for q in 0..n {
        op.add(r.random_range(0.5..2.0), &[(q, OpCode::Z)]).unwrap();
        if q + 1 < n {
            op.add(r.random_range(-0.5..0.5), &[(q, OpCode::Z), (q + 1, OpCode::Z)]).unwrap();
        }
    }
    for _ in 0..(2 * n) {
        let a = r.random_range(0..n);
        let b = (a + 1 + r.random_range(0..n - 1)) % n;
        let v = r.random_range(-0.08..0.08);
        match r.random_range(0..3) {
            0 => op.add(v, &[(a, OpCode::X)]).unwrap(),
            1 => op.add(v, &[(a, OpCode::X), (b, OpCode::X)]).unwrap(),
            _ => {
                op.add(v, &[(a, OpCode::Raise), (b, OpCode::Lower)]).unwrap();
                op.add(v, &[(a, OpCode::Lower), (b, OpCode::Raise)]).unwrap();
            }
        }
    }
    op.combine_like_terms(0.0)
}

/// Basis index of the smallest diagonal entry and its value.
pub fn lowest_diagonal(m: &Dense) -> (usize, f64) {
    (0..m.nrows())
        .map(|i| (i, m[(i, i)].re))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap()
}
