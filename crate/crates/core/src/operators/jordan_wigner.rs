use crate::error::Result;
use crate::operators::fermion::FermionTerm;
use crate::operators::{FermionOperator, OpCode, QubitOperator, QubitTerm};
use crate::C64;

/// Map a fermionic operator to an extended-alphabet qubit operator.
///
/// Uses `f_j = Lower_j Z_{j-1} ... Z_0`. Each normalized term maps to a
/// single qubit word over `{Z, P0, P1, Lower, Raise}`: parity strings of
/// paired ladder operators cancel, and a string landing on a mode that
/// already carries a symbol is absorbed into it (`P1 Z = -P1`,
/// `Lower Z = -Lower`). Like terms are combined and the constant becomes
/// an identity term.
pub fn jordan_wigner(op: &FermionOperator) -> Result<QubitOperator> {
    let mut terms: Vec<QubitTerm> = op
        .terms()
        .iter()
        .filter_map(FermionTerm::normalize)
        .map(|t| map_term(&t))
        .collect();
    if op.constant() != 0.0 {
        terms.push(QubitTerm::constant(C64::new(op.constant(), 0.0)));
    }
    let out = QubitOperator::with_terms(op.num_modes(), terms)?;
    Ok(out.combine_like_terms(0.0))
}

fn map_term(term: &FermionTerm) -> QubitTerm {
    let mut ops: Vec<(usize, OpCode)> = Vec::with_capacity(term.ops().len() * 2);
    let mut negate = false;
    let mut odd_above = false;
    let mut prev: Option<usize> = None;
    for &(mode, sym) in term.ops().iter().rev() {
        if odd_above {
            let top = prev.expect("parity string implies a higher mode");
            ops.extend((mode + 1..top).rev().map(|q| (q, OpCode::Z)));
        }
        let code = sym.to_opcode();
        if odd_above && matches!(code, OpCode::P1 | OpCode::Lower) {
            negate = !negate;
        }
        ops.push((mode, code));
        if sym.is_odd() {
            odd_above = !odd_above;
        }
        prev = Some(mode);
    }
    if odd_above {
        let lowest = prev.expect("nonempty term");
        ops.extend((0..lowest).rev().map(|q| (q, OpCode::Z)));
    }
    ops.reverse();
    let coeff = if negate { -term.coeff() } else { term.coeff() };
    let (indices, codes) = ops.into_iter().unzip();
    QubitTerm::from_sorted(coeff, indices, codes)
}

/// Expand projectors and ladder operators into Pauli words:
/// `P0 = (I+Z)/2`, `P1 = (I-Z)/2`, `Lower = (X+iY)/2`, `Raise = (X-iY)/2`.
pub fn pauli_decompose(op: &QubitOperator) -> QubitOperator {
    let half = C64::new(0.5, 0.0);
    let ihalf = C64::new(0.0, 0.5);
    let mut terms = Vec::new();
    for t in op.terms() {
        let mut partial: Vec<(C64, Vec<usize>, Vec<OpCode>)> =
            vec![(t.coeff(), Vec::new(), Vec::new())];
        for (idx, code) in t.ops() {
            let factors: &[(Option<OpCode>, C64)] = match code {
                OpCode::Z => &[(Some(OpCode::Z), C64::new(1.0, 0.0))],
                OpCode::X => &[(Some(OpCode::X), C64::new(1.0, 0.0))],
                OpCode::Y => &[(Some(OpCode::Y), C64::new(1.0, 0.0))],
                OpCode::P0 => &[(None, half), (Some(OpCode::Z), half)],
                OpCode::P1 => &[(None, half), (Some(OpCode::Z), -half)],
                OpCode::Lower => &[(Some(OpCode::X), half), (Some(OpCode::Y), ihalf)],
                OpCode::Raise => &[(Some(OpCode::X), half), (Some(OpCode::Y), -ihalf)],
            };
            let mut next = Vec::with_capacity(partial.len() * factors.len());
            for (c, idxs, codes) in &partial {
                for &(f, w) in factors {
                    let (mut i2, mut c2) = (idxs.clone(), codes.clone());
                    if let Some(f) = f {
                        i2.push(idx);
                        c2.push(f);
                    }
                    next.push((c * w, i2, c2));
                }
            }
            partial = next;
        }
        terms.extend(
            partial
                .into_iter()
                .map(|(c, i, k)| QubitTerm::from_sorted(c, i, k)),
        );
    }
    QubitOperator::with_terms(op.num_qubits(), terms)
        .expect("indices inherited from a valid operator")
        .combine_like_terms(0.0)
}
