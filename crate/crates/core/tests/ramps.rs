mod common;

use common::*;
use qsd_core::{group_terms, ramps, BitString, OpCode, QubitOperator, RampsConfig, Subspace};

/// Two-qubit operator whose matrix in the basis order 00, 01, 10, 11 is
/// tridiagonal with the given diagonal and couplings.
fn tridiagonal(h: [f64; 4], t: [f64; 3]) -> QubitOperator {
    let mut op = QubitOperator::new(2);
    let proj = [OpCode::P0, OpCode::P1];
    for (k, v) in h.into_iter().enumerate() {
        op.add(v, &[(0, proj[k & 1]), (1, proj[k >> 1])]).unwrap();
    }
    op.add(t[0], &[(0, OpCode::X), (1, OpCode::P0)]).unwrap();
    op.add(t[1], &[(0, OpCode::Lower), (1, OpCode::Raise)]).unwrap();
    op.add(t[1], &[(0, OpCode::Raise), (1, OpCode::Lower)]).unwrap();
    op.add(t[2], &[(0, OpCode::X), (1, OpCode::P1)]).unwrap();
    op
}

fn members(s: &Subspace) -> Vec<String> {
    let mut v: Vec<String> = s.iter().map(|b| b.to_string()).collect();
    v.sort();
    v
}

#[test]
fn tridiagonal_recursion_thresholds() {
    let h = [-4.0, -1.0, 0.5, 2.0];
    let t = [0.3, 0.2, 0.1];
    let op = tridiagonal(h, t);
    let dense = dense_qubit(&op);
    for (i, j, v) in [(0, 1, 0.3), (1, 2, 0.2), (2, 3, 0.1)] {
        assert_eq!(dense[(i, j)].re, v);
        assert_eq!(dense[(j, i)].re, v);
    }
    let gh = group_terms(&op, false).unwrap();
    let seeds = Subspace::from_strs(&["00"]).unwrap();
    let e = h[0];

    // first order: |H01|^2 / (H00 (H00 - H11))
    let a1 = (t[0] * t[0] / (e * (e - h[1]))).abs();
    // second order: a1 / (H00 - H11) * |H12|^2 / (H00 - H22)
    let a2 = (a1 / (e - h[1]) * t[1] * t[1] / (e - h[2])).abs();
    let a3 = (a2 / (e - h[2]) * t[2] * t[2] / (e - h[3])).abs();

    let run = |tau: f64| members(&ramps(&gh, &seeds, None, &RampsConfig::new(e, tau)).unwrap().subspace);
    assert_eq!(run(a1 * 1.01), vec!["00"]);
    assert_eq!(run(a1 * 0.99), vec!["00", "01"]);
    assert_eq!(run(a2 * 0.99), vec!["00", "01", "10"]);
    assert_eq!(run(a3 * 0.99), vec!["00", "01", "10", "11"]);
    assert_eq!(run(a3 * 1.01), vec!["00", "01", "10"]);
}

#[test]
fn energy_converges_with_tolerance() {
    let mut r = rng(31);
    for case in 0..6 {
        let n = 5 + case % 4;
        let op = diagonally_dominant(&mut r, n);
        let dense = dense_qubit(&op);
        let exact = lowest_eigenvalue(&dense);
        let gh = group_terms(&op, false).unwrap();
        let full = Subspace::full(n).unwrap();
        let (seed, e) = lowest_diagonal(&dense);
        let seeds = Subspace::from_bitstrings([BitString::from_u64(n, seed as u64)], n).unwrap();

        let mut previous: Option<(Vec<usize>, f64)> = None;
        for k in 2..=12 {
            let tau = 10f64.powi(-k);
            let out = ramps(&gh, &seeds, Some(&full), &RampsConfig::new(e, tau)).unwrap();
            let idx: Vec<usize> = out.subspace.iter().map(|b| b.low_u64() as usize).collect();
            let energy = lowest_eigenvalue(&slice(&dense, &idx));
            if let Some((prev_idx, prev_e)) = &previous {
                assert!(prev_idx.iter().all(|i| idx.contains(i)), "nested subspaces");
                assert!(energy <= prev_e + 1e-12, "monotone energy");
            }
            previous = Some((idx, energy));
        }
        let (_, last) = previous.unwrap();
        assert!((last - exact).abs() <= 1e-8, "case {case}: {last} vs {exact}");
    }
}
