use std::fmt;

use crate::error::{Error, Result};
use crate::operators::OpCode;
use crate::C64;

/// Single-mode fermionic symbol: a ladder operator or a projector
/// (`P0 = f f^+`, `P1 = f^+ f`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FermionSymbol {
    Lower,
    Raise,
    P0,
    P1,
}

impl FermionSymbol {
    pub const ALL: [FermionSymbol; 4] = [
        FermionSymbol::Lower,
        FermionSymbol::Raise,
        FermionSymbol::P0,
        FermionSymbol::P1,
    ];

    /// Ladder operators are odd under fermion parity.
    #[inline]
    pub fn is_odd(self) -> bool {
        matches!(self, FermionSymbol::Lower | FermionSymbol::Raise)
    }

    pub fn to_opcode(self) -> OpCode {
        match self {
            FermionSymbol::Lower => OpCode::Lower,
            FermionSymbol::Raise => OpCode::Raise,
            FermionSymbol::P0 => OpCode::P0,
            FermionSymbol::P1 => OpCode::P1,
        }
    }

    pub fn from_opcode(code: OpCode) -> Option<Self> {
        match code {
            OpCode::Lower => Some(FermionSymbol::Lower),
            OpCode::Raise => Some(FermionSymbol::Raise),
            OpCode::P0 => Some(FermionSymbol::P0),
            OpCode::P1 => Some(FermionSymbol::P1),
            _ => None,
        }
    }
}

impl fmt::Display for FermionSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_opcode(), f)
    }
}

/// Product `left * right` of two symbols acting on the same mode.
/// `None` means the product vanishes.
pub fn merge_pair(left: FermionSymbol, right: FermionSymbol) -> Option<FermionSymbol> {
    use FermionSymbol::*;
    match (left, right) {
        (Lower, Lower) => None,
        (Raise, Lower) => Some(P1),
        (P0, Lower) => Some(Lower),
        (P1, Lower) => None,
        (Lower, Raise) => Some(P0),
        (Raise, Raise) => None,
        (P0, Raise) => None,
        (P1, Raise) => Some(Raise),
        (Lower, P0) => None,
        (Raise, P0) => Some(Raise),
        (P0, P0) => Some(P0),
        (P1, P0) => None,
        (Lower, P1) => Some(Lower),
        (Raise, P1) => None,
        (P0, P1) => None,
        (P1, P1) => Some(P1),
    }
}

/// A coefficient times an ordered product of single-mode symbols; the
/// leftmost factor acts last.
#[derive(Clone, Debug, PartialEq)]
pub struct FermionTerm {
    coeff: C64,
    ops: Vec<(usize, FermionSymbol)>,
}

impl FermionTerm {
    pub fn new(coeff: C64, ops: Vec<(usize, FermionSymbol)>) -> Self {
        FermionTerm { coeff, ops }
    }

    /// Build from `(mode, dagger)` pairs; `dagger = true` is a creation operator.
    pub fn ladder(coeff: impl Into<C64>, ops: &[(usize, bool)]) -> Self {
        FermionTerm {
            coeff: coeff.into(),
            ops: ops
                .iter()
                .map(|&(m, d)| {
                    (
                        m,
                        if d {
                            FermionSymbol::Raise
                        } else {
                            FermionSymbol::Lower
                        },
                    )
                })
                .collect(),
        }
    }

    pub fn coeff(&self) -> C64 {
        self.coeff
    }

    pub fn ops(&self) -> &[(usize, FermionSymbol)] {
        &self.ops
    }

    pub fn mode_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.ops.iter().map(|&(m, _)| m)
    }

    /// Strictly ascending modes, one symbol each.
    pub fn is_normalized(&self) -> bool {
        self.ops.windows(2).all(|w| w[0].0 < w[1].0)
    }

    /// Reorder into ascending mode order and merge repeated modes.
    ///
    /// Moving a ladder operator past another ladder operator on a different
    /// mode flips the sign. Operators on the same mode keep their relative
    /// order and are merged left to right with [`merge_pair`]. Returns `None`
    /// when the product vanishes.
    pub fn normalize(&self) -> Option<FermionTerm> {
        let mut sign_flips = 0usize;
        for (a, &(ma, sa)) in self.ops.iter().enumerate() {
            if !sa.is_odd() {
                continue;
            }
            sign_flips += self.ops[a + 1..]
                .iter()
                .filter(|&&(mb, sb)| sb.is_odd() && mb < ma)
                .count();
        }
        let mut sorted = self.ops.clone();
        sorted.sort_by_key(|&(m, _)| m);

        let mut merged: Vec<(usize, FermionSymbol)> = Vec::with_capacity(sorted.len());
        for (m, s) in sorted {
            match merged.last_mut() {
                Some((lm, ls)) if *lm == m => *ls = merge_pair(*ls, s)?,
                _ => merged.push((m, s)),
            }
        }
        let coeff = if sign_flips % 2 == 1 {
            -self.coeff
        } else {
            self.coeff
        };
        Some(FermionTerm { coeff, ops: merged })
    }
}

/// `constant + sum_i c_i T_i` over `num_modes` fermionic modes.
#[derive(Clone, Debug, PartialEq)]
pub struct FermionOperator {
    num_modes: usize,
    constant: f64,
    terms: Vec<FermionTerm>,
}

impl FermionOperator {
    pub fn new(num_modes: usize) -> Self {
        FermionOperator {
            num_modes,
            constant: 0.0,
            terms: Vec::new(),
        }
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn set_constant(&mut self, value: f64) {
        self.constant = value;
    }

    pub fn terms(&self) -> &[FermionTerm] {
        &self.terms
    }

    pub fn push(&mut self, term: FermionTerm) -> Result<()> {
        if let Some(m) = term.mode_indices().find(|&m| m >= self.num_modes) {
            return Err(Error::IndexOutOfRange {
                index: m,
                limit: self.num_modes,
            });
        }
        self.terms.push(term);
        Ok(())
    }

    /// Normalize every term, dropping the ones that vanish.
    pub fn normalized(&self) -> FermionOperator {
        FermionOperator {
            num_modes: self.num_modes,
            constant: self.constant,
            terms: self.terms.iter().filter_map(FermionTerm::normalize).collect(),
        }
    }
}
