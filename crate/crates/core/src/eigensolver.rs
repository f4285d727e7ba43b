//! Lowest eigenpair of a Hermitian operator by Davidson iteration.
//!
//! Block size one, thick restart keeping the lowest Ritz vectors. Without a
//! preconditioner the correction is the residual itself and the search
//! space is a Krylov space; the shifted Jacobi preconditioner divides the
//! residual by `diag - theta` using the current Ritz value as the shift.
//!
//! Inner products use fixed-size chunks summed in order, so results are
//! identical for any thread count.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{DiagonalCache, LinearOperator};
use crate::C64;

const CHUNK: usize = 4096;
const KEEP_ON_RESTART: usize = 2;

#[derive(Clone, Debug, Default, PartialEq)]
pub enum InitialVector {
    #[default]
    Uniform,
    /// 1.0 at the lowest diagonal entry, 0 elsewhere.
    SpikeAtMinDiagonal,
    User(Vec<C64>),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Preconditioner {
    None,
    #[default]
    ShiftedJacobi,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    /// Converged when `||Hv - lv|| <= tol * max(1, |l|)`.
    pub tol: f64,
    pub max_iter: usize,
    pub max_basis: usize,
    pub initial_vector: InitialVector,
    pub preconditioner: Preconditioner,
    /// Relative size of the seeded perturbation added to the start vector.
    /// Keeps a symmetric start from missing the ground state's sector.
    pub jitter: f64,
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-9,
            max_iter: 1000,
            max_basis: 40,
            initial_vector: InitialVector::Uniform,
            preconditioner: Preconditioner::ShiftedJacobi,
            jitter: 1e-3,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub eigenvalue: f64,
    pub eigenvector: Vec<C64>,
    /// `||Hv - lv||` recomputed from a fresh product.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(x, y)| x.iter().zip(y).map(|(u, v)| u.conj() * v).sum::<C64>())
        .collect::<Vec<_>>()
        .into_iter()
        .sum()
}

pub fn norm(a: &[C64]) -> f64 {
    a.par_chunks(CHUNK)
        .map(|x| x.iter().map(|u| u.norm_sqr()).sum::<f64>())
        .collect::<Vec<_>>()
        .into_iter()
        .sum::<f64>()
        .sqrt()
}

fn axpy(alpha: C64, x: &[C64], y: &mut [C64]) {
    y.par_iter_mut().zip(x.par_iter()).for_each(|(yi, xi)| *yi += alpha * xi);
}

fn scale(alpha: f64, x: &mut [C64]) {
    x.par_iter_mut().for_each(|v| *v *= alpha);
}

/// Two rounds of Gram-Schmidt against `basis`; returns the remaining norm.
fn orthogonalize(basis: &[Vec<C64>], t: &mut [C64]) -> f64 {
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, t);
            axpy(-c, b, t);
        }
    }
    norm(t)
}

/// `sum_k coef[k] * vs[k]`.
fn combine(vs: &[Vec<C64>], coef: &[C64], n: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); n];
    out.par_iter_mut().enumerate().for_each(|(i, o)| {
        *o = vs.iter().zip(coef).map(|(v, c)| c * v[i]).sum();
    });
    out
}

fn start_vector(dim: usize, diag: &DiagonalCache, opts: &SolveOptions) -> Result<Vec<C64>> {
    let mut v = match &opts.initial_vector {
        InitialVector::Uniform => vec![C64::new(1.0, 0.0); dim],
        InitialVector::SpikeAtMinDiagonal => {
            let (k, _) = diag
                .argmin()
                .ok_or_else(|| Error::Dimension("empty diagonal".into()))?;
            let mut v = vec![C64::new(0.0, 0.0); dim];
            v[k] = C64::new(1.0, 0.0);
            v
        }
        InitialVector::User(u) => {
            if u.len() != dim {
                return Err(Error::Dimension(format!(
                    "initial vector has length {}, operator dimension is {dim}",
                    u.len()
                )));
            }
            u.clone()
        }
    };
    let n0 = norm(&v);
    if !(n0 > 0.0) || !n0.is_finite() {
        return Err(Error::Config("initial vector must be finite and nonzero".into()));
    }
    scale(1.0 / n0, &mut v);
    if opts.jitter > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let amp = opts.jitter / (dim as f64).sqrt();
        for x in v.iter_mut() {
            x.re += amp * rng.random_range(-1.0..1.0);
        }
        let n1 = norm(&v);
        scale(1.0 / n1, &mut v);
    }
    Ok(v)
}

fn lowest_of_projection(v: &[Vec<C64>], av: &[Vec<C64>]) -> SymmetricEigen<C64, nalgebra::Dyn> {
    let k = v.len();
    let mut h = DMatrix::<C64>::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let x = dot(&v[i], &av[j]);
            if i == j {
                h[(i, i)] = C64::new(x.re, 0.0);
            } else {
                h[(i, j)] = x;
                h[(j, i)] = x.conj();
            }
        }
    }
    SymmetricEigen::new(h)
}

/// Ritz indices by ascending eigenvalue.
fn order(eig: &SymmetricEigen<C64, nalgebra::Dyn>) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    idx
}

/// Lowest eigenvalue and eigenvector of a Hermitian operator.
pub fn solve_lowest<A: LinearOperator + ?Sized>(
    a: &A,
    diag: &DiagonalCache,
    opts: &SolveOptions,
) -> Result<Solution> {
    let n = a.dim();
    if n == 0 {
        return Err(Error::Dimension("cannot solve an empty operator".into()));
    }
    if diag.len() != n {
        return Err(Error::Dimension(format!(
            "diagonal has {} entries, operator dimension is {n}",
            diag.len()
        )));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Config("tol must be positive".into()));
    }
    let max_basis = opts.max_basis.clamp(KEEP_ON_RESTART + 1, n.max(KEEP_ON_RESTART + 1));
    let d = diag.values();

    let mut v0 = start_vector(n, diag, opts)?;
    if n == 1 {
        v0[0] = C64::new(1.0, 0.0);
    }
    let mut basis = vec![v0];
    let mut abasis = vec![{
        let mut y = vec![C64::new(0.0, 0.0); n];
        a.apply(&basis[0], &mut y);
        y
    }];

    let mut best: Option<(Vec<C64>, f64)> = None;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        let eig = lowest_of_projection(&basis, &abasis);
        let ord = order(&eig);
        let theta = eig.eigenvalues[ord[0]];
        let y0 = eig.eigenvectors.column(ord[0]).clone_owned();
        let u = combine(&basis, y0.as_slice(), n);
        let au = combine(&abasis, y0.as_slice(), n);
        let mut r = au.clone();
        axpy(C64::new(-theta, 0.0), &u, &mut r);
        let rnorm = norm(&r);
        best = Some((u.clone(), theta));

        let threshold = opts.tol * theta.abs().max(1.0);
        if rnorm <= threshold {
            let s = finish(a, u.clone());
            if s.residual <= opts.tol * s.eigenvalue.abs().max(1.0) {
                return Ok(Solution {
                    iterations,
                    converged: true,
                    ..s
                });
            }
            // drift in the accumulated products; restart from u exactly
            let mut au = vec![C64::new(0.0, 0.0); n];
            a.apply(&s.eigenvector, &mut au);
            basis = vec![s.eigenvector];
            abasis = vec![au];
            continue;
        }
        if basis.len() == n {
            // the basis spans the whole space; the Ritz pair is exact up to rounding
            let s = finish(a, u);
            return Ok(Solution {
                iterations,
                converged: s.residual <= opts.tol * s.eigenvalue.abs().max(1.0),
                ..s
            });
        }

        if basis.len() >= max_basis {
            let keep: Vec<usize> = ord.iter().copied().take(KEEP_ON_RESTART).collect();
            let mut nb = Vec::with_capacity(max_basis);
            let mut nab = Vec::with_capacity(max_basis);
            for &k in &keep {
                let y = eig.eigenvectors.column(k).clone_owned();
                nb.push(combine(&basis, y.as_slice(), n));
                nab.push(combine(&abasis, y.as_slice(), n));
            }
            basis = nb;
            abasis = nab;
        }

        let mut t = r.clone();
        if opts.preconditioner == Preconditioner::ShiftedJacobi {
            t.par_iter_mut().zip(d.par_iter()).for_each(|(ti, di)| {
                let mut den = di.re - theta;
                if den.abs() < 1e-8 {
                    den = if den < 0.0 { -1e-8 } else { 1e-8 };
                }
                *ti /= den;
            });
        }
        let mut tn = orthogonalize(&basis, &mut t);
        if tn < 1e-10 * norm(&r).max(f64::MIN_POSITIVE) && opts.preconditioner != Preconditioner::None {
            t = r;
            tn = orthogonalize(&basis, &mut t);
        }
        if !(tn > 1e-14) {
            // no new direction: the current Ritz pair is as good as it gets
            let s = finish(a, u);
            return Ok(Solution {
                iterations,
                converged: s.residual <= opts.tol * s.eigenvalue.abs().max(1.0),
                ..s
            });
        }
        scale(1.0 / tn, &mut t);
        let mut at = vec![C64::new(0.0, 0.0); n];
        a.apply(&t, &mut at);
        basis.push(t);
        abasis.push(at);
    }

    let (u, _) = best.expect("at least one iteration ran");
    let s = finish(a, u);
    let converged = s.residual <= opts.tol * s.eigenvalue.abs().max(1.0);
    if !converged {
        log::warn!(
            "eigensolver stopped after {iterations} iterations with residual {:e}",
            s.residual
        );
    }
    Ok(Solution {
        iterations,
        converged,
        ..s
    })
}

/// Normalize `v`, recompute `Av`, and report the Rayleigh quotient and residual.
fn finish<A: LinearOperator + ?Sized>(a: &A, mut v: Vec<C64>) -> Solution {
    let nv = norm(&v);
    scale(1.0 / nv, &mut v);
    let mut av = vec![C64::new(0.0, 0.0); v.len()];
    a.apply(&v, &mut av);
    let lambda = dot(&v, &av).re;
    axpy(C64::new(-lambda, 0.0), &v, &mut av);
    Solution {
        eigenvalue: lambda,
        residual: norm(&av),
        eigenvector: v,
        iterations: 0,
        converged: false,
    }
}
