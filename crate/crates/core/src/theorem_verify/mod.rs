//! Executable checks of the quantitative inequalities: concavity of the
//! X-rays and of the conic function under Minkowski combination, area
//! superadditivity, the dilation and tube-area bounds, the stability bound
//! in terms of the Hausdorff distance, and uniform convergence of minimal
//! coverings.
//!
//! Every checker returns a [`CheckReport`]. Checkers refuse with
//! [`Error::PreconditionViolated`](crate::Error::PreconditionViolated) when
//! the hypotheses of the inequality are not met.

mod checks;
mod concavity;

pub use checks::{
    check_convergence, check_dilation_bound, check_polyline_bound, check_stability_bound, convergence_subsamples,
};
pub use concavity::{check_area_superadditivity, check_concavity, reproduce_remark2, DEFAULT_LATTICE};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::parallel::Execution;

/// Where a margin is attained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Witness {
    Point { x: f64, y: f64 },
    Interval { axis: String, lo: f64, hi: f64 },
    Set { label: String },
}

/// Outcome of one check. `margin` is the bound minus the measured quantity in
/// absolute units; `holds` is `margin ≥ −bracket_error`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub holds: bool,
    pub margin: f64,
    pub witness: Option<Witness>,
    pub bracket_error: f64,
    pub quantities: BTreeMap<String, f64>,
    #[serde(rename = "inputs-digest")]
    pub inputs_digest: String,
}

impl CheckReport {
    pub(crate) fn new(name: &str, margin: f64, bracket_error: f64, inputs: &[&str]) -> Self {
        CheckReport {
            name: name.to_string(),
            holds: margin >= -bracket_error,
            margin,
            witness: None,
            bracket_error,
            quantities: BTreeMap::new(),
            inputs_digest: digest(inputs),
        }
    }

    pub(crate) fn with_witness(mut self, witness: Witness) -> Self {
        self.witness = Some(witness);
        self
    }

    pub(crate) fn with(mut self, key: &str, value: f64) -> Self {
        self.quantities.insert(key.to_string(), value);
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

/// First 16 hex digits of the SHA-256 of the newline-joined inputs.
pub fn digest(inputs: &[&str]) -> String {
    let mut h = Sha256::new();
    for part in inputs {
        h.update(part.as_bytes());
        h.update(b"\n");
    }
    hex::encode(&h.finalize()[..8])
}

/// Runs `check` for every seed, possibly concurrently, and returns the
/// reports in seed order.
pub fn run_batch<F>(seeds: std::ops::Range<u64>, exec: Execution, check: F) -> Result<Vec<CheckReport>>
where
    F: Fn(u64) -> Result<CheckReport> + Sync + Send,
{
    let seeds: Vec<u64> = seeds.collect();
    exec.map_slice(&seeds, |&s| check(s)).into_iter().collect()
}
