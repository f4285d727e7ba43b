//! JSON run reports. Field order is fixed by declaration order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub format: u32,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvalue: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nnz: Option<usize>,
    pub num_groups: usize,
    pub num_groups_after_trim: usize,
    pub timings_ms: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ramps_subspace_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ramps_degenerate_skips: Option<usize>,
}

impl Report {
    pub fn new(mode: impl Into<String>) -> Self {
        Report {
            format: super::FORMAT_VERSION,
            mode: mode.into(),
            ..Default::default()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields serialize")
    }

    /// The report without wall-clock fields, for reproducibility checks.
    pub fn without_timings(&self) -> Report {
        Report {
            timings_ms: BTreeMap::new(),
            ..self.clone()
        }
    }
}
