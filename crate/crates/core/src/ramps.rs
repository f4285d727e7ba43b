//! Perturbative subspace selection around a seed set.
//!
//! Starting from each seed with prefactor `1/E`, every row `b_j` on the
//! frontier is coupled through each off-diagonal group to `b_k`, giving
//! `amp = pre * |H_jk|^2 / (E - H_kk)`. A column is admitted when
//! `|amp| > tol` and becomes part of the next frontier with prefactor
//! `amp / (E - H_kk)`.
//!
//! Expansion proceeds one level at a time. Within a level each bit-string
//! keeps the largest prefactor over all paths reaching it, and strings may
//! reappear at later levels. The output is therefore exactly the set of
//! strings reachable within `max_depth` steps along a path whose every step
//! passes the tolerance, independent of iteration order and monotone in
//! `tol`.

use std::collections::{BTreeMap, BTreeSet};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::grouping::GroupedHamiltonian;
use crate::matrix::{diagonal_value, group_element};
use crate::subspace::{column_bitstring, Subspace};

#[derive(Clone, Debug, PartialEq)]
pub struct RampsConfig {
    pub target_energy: f64,
    pub tolerance: f64,
    pub max_depth: usize,
    /// Candidates with `|E - H_kk|` below this are skipped. `None` uses
    /// `1e-10 * max(|E|, max |H_kk| over the seeds)`.
    pub degeneracy_floor: Option<f64>,
}

impl RampsConfig {
    pub fn new(target_energy: f64, tolerance: f64) -> Self {
        RampsConfig {
            target_energy,
            tolerance,
            max_depth: 4,
            degeneracy_floor: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RampsOutcome {
    /// Seeds first in their given order, then admitted strings in ascending
    /// integer order.
    pub subspace: Subspace,
    pub admitted: usize,
    /// Candidates rejected because `E - H_kk` fell below the floor.
    pub degenerate_skips: usize,
    /// Number of levels that admitted at least one string.
    pub depth_reached: usize,
    pub degeneracy_floor: f64,
}

/// Lowest diagonal energy over the seeds, the customary target.
pub fn default_target_energy(gh: &GroupedHamiltonian, seeds: &Subspace) -> Option<f64> {
    seeds
        .iter()
        .map(|b| diagonal_value(gh, b.words()).re)
        .min_by(f64::total_cmp)
}

pub fn ramps(
    gh: &GroupedHamiltonian,
    seeds: &Subspace,
    restrict_to: Option<&Subspace>,
    cfg: &RampsConfig,
) -> Result<RampsOutcome> {
    let e = cfg.target_energy;
    if !(cfg.tolerance > 0.0) {
        return Err(Error::Config("tolerance must be positive".into()));
    }
    if cfg.max_depth == 0 {
        return Err(Error::Config("max_depth must be at least 1".into()));
    }
    if !e.is_finite() || e == 0.0 {
        return Err(Error::Config("target energy must be finite and nonzero".into()));
    }
    if seeds.num_qubits() != gh.num_qubits() {
        return Err(Error::WidthMismatch {
            expected: gh.num_qubits(),
            found: seeds.num_qubits(),
        });
    }
    if let Some(r) = restrict_to {
        if r.num_qubits() != gh.num_qubits() {
            return Err(Error::WidthMismatch {
                expected: gh.num_qubits(),
                found: r.num_qubits(),
            });
        }
        if let Some(b) = seeds.iter().find(|b| r.contains(b).is_none()) {
            return Err(Error::Config(format!("seed {b} is outside the restricting subspace")));
        }
    }

    let floor = cfg.degeneracy_floor.unwrap_or_else(|| {
        let hmax = seeds
            .iter()
            .map(|b| diagonal_value(gh, b.words()).norm())
            .fold(e.abs(), f64::max);
        1e-10 * hmax
    });

    let mut frontier: BTreeMap<BitString, f64> = seeds.iter().map(|b| (b, 1.0 / e.abs())).collect();
    let mut found: BTreeSet<BitString> = BTreeSet::new();
    let mut degenerate_skips = 0usize;
    let mut depth_reached = 0usize;

    for _ in 0..cfg.max_depth {
        let mut next: BTreeMap<BitString, f64> = BTreeMap::new();
        for (row, &pre) in &frontier {
            for g in 0..gh.num_groups() {
                let h = group_element(gh, g, row.words(), true);
                if h.re == 0.0 && h.im == 0.0 {
                    continue;
                }
                let col = column_bitstring(row, gh.structure(g));
                if let Some(r) = restrict_to {
                    if r.contains(&col).is_none() {
                        continue;
                    }
                }
                let denom = (e - diagonal_value(gh, col.words()).re).abs();
                if denom < floor {
                    degenerate_skips += 1;
                    continue;
                }
                let amp = pre * h.norm_sqr() / denom;
                if amp > cfg.tolerance {
                    let p = amp / denom;
                    next.entry(col)
                        .and_modify(|q| *q = q.max(p))
                        .or_insert(p);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        depth_reached += 1;
        found.extend(next.keys().cloned());
        frontier = next;
    }

    if degenerate_skips > 0 {
        log::warn!(
            "{degenerate_skips} candidates skipped: |E - H_kk| below {floor:e}; \
             consider a multi-string seed set with its own eigenvalue as target"
        );
    }

    let seed_list: Vec<BitString> = seeds.iter().collect();
    let admitted: Vec<BitString> = found
        .into_iter()
        .filter(|b| seeds.contains(b).is_none())
        .collect();
    let count = admitted.len();
    let subspace = Subspace::from_bitstrings(seed_list.into_iter().chain(admitted), gh.num_qubits())?;
    Ok(RampsOutcome {
        subspace,
        admitted: count,
        degenerate_skips,
        depth_reached,
        degeneracy_floor: floor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouping::group_terms;
    use crate::operators::{OpCode, QubitOperator};

    /// `00` coupled to `01` by X0, with projector fields on both qubits.
    fn chain() -> GroupedHamiltonian {
        let mut op = QubitOperator::new(2);
        op.add(-2.0, &[(0, OpCode::P0)]).unwrap();
        op.add(-2.0, &[(1, OpCode::P0)]).unwrap();
        op.add(0.1, &[(0, OpCode::X)]).unwrap();
        group_terms(&op, false).unwrap()
    }

    #[test]
    fn huge_tolerance_returns_seeds() {
        let gh = chain();
        let seeds = Subspace::from_strs(&["00"]).unwrap();
        let out = ramps(&gh, &seeds, None, &RampsConfig::new(-4.0, 1e9)).unwrap();
        assert_eq!(out.subspace.dim(), 1);
        assert_eq!(out.admitted, 0);
        assert_eq!(out.depth_reached, 0);
    }

    #[test]
    fn first_order_admission_threshold() {
        let gh = chain();
        let seeds = Subspace::from_strs(&["00"]).unwrap();
        // |amp| = (1/4) * 0.01 / 2 = 1.25e-3
        let out = ramps(&gh, &seeds, None, &RampsConfig::new(-4.0, 1.2e-3)).unwrap();
        assert_eq!(out.subspace.dim(), 2);
        assert_eq!(out.subspace.get(1).to_string(), "01");
        let out = ramps(&gh, &seeds, None, &RampsConfig::new(-4.0, 1.3e-3)).unwrap();
        assert_eq!(out.subspace.dim(), 1);
    }

    #[test]
    fn restriction_limits_search() {
        let gh = chain();
        let seeds = Subspace::from_strs(&["00"]).unwrap();
        let only = Subspace::from_strs(&["00", "10"]).unwrap();
        let out = ramps(&gh, &seeds, Some(&only), &RampsConfig::new(-4.0, 1e-12)).unwrap();
        assert_eq!(out.subspace.dim(), 1);
        let bad = Subspace::from_strs(&["10"]).unwrap();
        assert!(ramps(&gh, &seeds, Some(&bad), &RampsConfig::new(-4.0, 1e-3)).is_err());
    }

    #[test]
    fn degenerate_candidates_are_skipped() {
        let mut op = QubitOperator::new(1);
        op.add(0.1, &[(0, OpCode::X)]).unwrap();
        let gh = group_terms(&op, false).unwrap();
        let seeds = Subspace::from_strs(&["0"]).unwrap();
        let mut cfg = RampsConfig::new(1.0, 1e-12);
        cfg.degeneracy_floor = Some(2.0);
        let out = ramps(&gh, &seeds, None, &cfg).unwrap();
        assert_eq!(out.degenerate_skips, 1);
        assert_eq!(out.subspace.dim(), 1);
    }

    #[test]
    fn invalid_configuration() {
        let gh = chain();
        let seeds = Subspace::from_strs(&["00"]).unwrap();
        assert!(ramps(&gh, &seeds, None, &RampsConfig::new(0.0, 1e-3)).is_err());
        assert!(ramps(&gh, &seeds, None, &RampsConfig::new(-4.0, 0.0)).is_err());
        let mut cfg = RampsConfig::new(-4.0, 1e-3);
        cfg.max_depth = 0;
        assert!(ramps(&gh, &seeds, None, &cfg).is_err());
    }

    #[test]
    fn default_target_is_lowest_seed_diagonal() {
        let gh = chain();
        let seeds = Subspace::from_strs(&["01", "00"]).unwrap();
        assert_eq!(default_target_energy(&gh, &seeds), Some(-4.0));
    }
}
