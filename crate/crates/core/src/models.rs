//! Reference spin-chain models and subspaces built around the Neel state.

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::operators::{OpCode, QubitOperator};
use crate::subspace::Subspace;

/// Open XXZ chain `sum_i J (X_i X_{i+1} + Y_i Y_{i+1}) + Z_i Z_{i+1}`.
pub fn heisenberg(sites: usize, coupling: f64) -> QubitOperator {
    let mut op = QubitOperator::new(sites);
    for i in 0..sites.saturating_sub(1) {
        for (code, c) in [(OpCode::X, coupling), (OpCode::Y, coupling), (OpCode::Z, 1.0)] {
            op.add(c, &[(i, code), (i + 1, code)])
                .expect("indices below the site count");
        }
    }
    op
}

/// `|..0101>`: qubit 0 (rightmost) is up, alternating upward.
pub fn neel(sites: usize) -> BitString {
    let ones: Vec<usize> = (0..sites).step_by(2).collect();
    BitString::from_indices(sites, &ones).expect("indices below the site count")
}

/// How single-bit-flip samples are folded back into the fixed
/// magnetization sector of the Neel state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlipCorrection {
    /// Repair each flip with one opposite flip elsewhere, which yields every
    /// magnetization-preserving single up/down exchange of the Neel state.
    PairFlip,
    /// Drop samples with the wrong magnetization.
    Discard,
}

/// Neel state plus, for `hamming = 1`, its corrected single-flip neighbours.
pub fn neel_subspace(sites: usize, hamming: usize, correction: FlipCorrection) -> Result<Subspace> {
    if sites == 0 {
        return Err(Error::Config("chain needs at least one site".into()));
    }
    let reference = neel(sites);
    let mut states = vec![reference.clone()];
    match hamming {
        0 => {}
        1 => {
            if correction == FlipCorrection::PairFlip {
                let ones: Vec<usize> = (0..sites).filter(|&i| reference.bit(i)).collect();
                let zeros: Vec<usize> = (0..sites).filter(|&i| !reference.bit(i)).collect();
                for &up in &ones {
                    for &down in &zeros {
                        let mut b = reference.clone();
                        b.flip(up);
                        b.flip(down);
                        states.push(b);
                    }
                }
            }
        }
        other => {
            return Err(Error::Config(format!(
                "hamming distance {other} not supported (0 or 1)"
            )))
        }
    }
    states.sort();
    Subspace::from_bitstrings(states, sites)
}
