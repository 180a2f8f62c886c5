//! JSON problem files and result summaries.
//!
//! ```json
//! {
//!   "target": {"hvset": "target.hv"},
//!   "norm": "sup",
//!   "feasibility": "hv_connected",
//!   "steps": 20000, "restarts": 3, "seed": 1,
//!   "output": "result"
//! }
//! ```
//!
//! The target is either an `HVSET` generator or a pair of profile CSV files,
//! `{"profiles": {"vertical": "p.vertical.csv", "horizontal": "p.horizontal.csv"}}`.
//! `box` (`[a, b, c, d]`) and `dims` (`"MxN"`) default to the generator's grid
//! and are required with profiles. The result is written to `<output>.hv` and
//! `<output>.json`.

use std::fs::File;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{AnnealingParams, Feasibility, Norm, ReconstructionProblem, ReconstructionResult};
use crate::error::{Error, Result};
use crate::grid_geometry::{read_hvset, write_hvset, GridGeometry, GridSet, Rect};
use crate::xray_conic::{read_profile_csv, Axis, ConicEvaluator};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum TargetSpec {
    Hvset(PathBuf),
    Profiles { vertical: PathBuf, horizontal: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum NormName {
    Sup,
    L1,
}

fn default_refine() -> usize {
    4
}

fn default_feasibility() -> Feasibility {
    Feasibility::HvConnected
}

fn default_norm() -> NormName {
    NormName::Sup
}

/// On-disk problem description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub target: TargetSpec,
    #[serde(rename = "box", default)]
    pub bounds: Option<[f64; 4]>,
    #[serde(default)]
    pub dims: Option<String>,
    #[serde(default = "default_norm")]
    norm: NormName,
    #[serde(default = "default_refine")]
    pub l1_refine: usize,
    #[serde(default = "default_feasibility")]
    pub feasibility: Feasibility,
    #[serde(default)]
    pub steps: Option<u64>,
    #[serde(default)]
    pub restarts: Option<u32>,
    #[serde(default)]
    pub initial_temperature: Option<f64>,
    #[serde(default)]
    pub cooling: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
    pub output: PathBuf,
}

/// Everything needed to run and store one reconstruction.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub problem: ReconstructionProblem,
    pub params: AnnealingParams,
    pub output: PathBuf,
    /// The generator set, when the target was given as one.
    pub generator: Option<GridSet>,
}

/// Parses `"MxN"`.
pub fn parse_dims(text: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidParameter(format!("dimensions '{text}' are not of the form MxN"));
    let (m, n) = text.split_once('x').ok_or_else(bad)?;
    let m = m.trim().parse().map_err(|_| bad())?;
    let n = n.trim().parse().map_err(|_| bad())?;
    Ok((m, n))
}

fn json_error(e: serde_json::Error) -> Error {
    Error::parse(e.line(), e.to_string())
}

pub fn load_problem(path: impl AsRef<Path>) -> Result<RunSpec> {
    let text = std::fs::read_to_string(path)?;
    let file: ProblemFile = serde_json::from_str(&text).map_err(json_error)?;
    file.into_run()
}

impl ProblemFile {
    pub fn into_run(self) -> Result<RunSpec> {
        let (target, mut geometry, generator) = match &self.target {
            TargetSpec::Hvset(path) => {
                let g = read_hvset(path)?;
                (crate::xray_conic::conic_of(&g), Some(g.geometry()), Some(g))
            }
            TargetSpec::Profiles { vertical, horizontal } => {
                let y = read_profile_csv(File::open(vertical)?, Axis::Vertical)?;
                let x = read_profile_csv(File::open(horizontal)?, Axis::Horizontal)?;
                (ConicEvaluator::from_profiles(y, x)?, None, None)
            }
        };
        if self.bounds.is_some() || self.dims.is_some() {
            let rect = match (self.bounds, geometry) {
                (Some([a, b, c, d]), _) => Rect::new(a, b, c, d)?,
                (None, Some(g)) => g.rect(),
                (None, None) => return Err(Error::InvalidParameter("'box' is required with profile targets".into())),
            };
            let (m, n) = match (&self.dims, geometry) {
                (Some(d), _) => parse_dims(d)?,
                (None, Some(g)) => (g.m(), g.n()),
                (None, None) => return Err(Error::InvalidParameter("'dims' is required with profile targets".into())),
            };
            geometry = Some(GridGeometry::new(rect, m, n)?);
        }
        let geometry = geometry.ok_or_else(|| Error::InvalidParameter("'box' and 'dims' are required".into()))?;
        let norm = match self.norm {
            NormName::Sup => Norm::Sup,
            NormName::L1 => Norm::L1 { refine: self.l1_refine },
        };
        let defaults = AnnealingParams::default();
        let params = AnnealingParams {
            initial_temperature: self.initial_temperature.unwrap_or(defaults.initial_temperature),
            cooling: self.cooling.unwrap_or(defaults.cooling),
            steps: self.steps.unwrap_or(defaults.steps),
            restarts: self.restarts.unwrap_or(defaults.restarts),
            seed: self.seed.unwrap_or(defaults.seed),
        };
        params.validate()?;
        Ok(RunSpec {
            problem: ReconstructionProblem::new(target, geometry, norm, self.feasibility)?,
            params,
            output: self.output,
            generator: generator.filter(|g| g.geometry() == geometry),
        })
    }
}

/// JSON summary written next to the result set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultSummary {
    pub objective: f64,
    pub steps: u64,
    pub thin_contact: bool,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optima: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xrays_match_generator: Option<bool>,
    pub trace: Vec<(u64, f64)>,
}

/// Writes `<prefix>.hv` and `<prefix>.json`; returns the summary.
pub fn write_result(result: &ReconstructionResult, run: &RunSpec, oracle: bool) -> Result<ResultSummary> {
    let summary = ResultSummary {
        objective: result.objective,
        steps: result.steps,
        thin_contact: result.thin_contact,
        mode: if oracle { "exhaustive" } else { "local_search" }.into(),
        optima: result.optima.as_ref().map(Vec::len),
        xrays_match_generator: match &run.generator {
            Some(g) => Some(crate::xray_conic::xrays_equal_ae(g, &result.best)?),
            None => None,
        },
        trace: result.trace.clone(),
    };
    let with_ext = |ext: &str| {
        let mut name = run.output.clone().into_os_string();
        name.push(ext);
        PathBuf::from(name)
    };
    write_hvset(&result.best, with_ext(".hv"))?;
    let json = serde_json::to_string_pretty(&summary).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    std::fs::write(with_ext(".json"), json + "\n")?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_parsing() {
        assert_eq!(parse_dims("4x3").unwrap(), (4, 3));
        assert!(parse_dims("4by3").is_err());
        assert!(parse_dims("x3").is_err());
    }

    #[test]
    fn problem_file_defaults() {
        let file: ProblemFile = serde_json::from_str(r#"{"target": {"hvset": "t.hv"}, "output": "out"}"#).unwrap();
        assert_eq!(file.target, TargetSpec::Hvset("t.hv".into()));
        assert_eq!(file.feasibility, Feasibility::HvConnected);
        assert_eq!(file.l1_refine, 4);
        let err = serde_json::from_str::<ProblemFile>(r#"{"target": {"hvset": "t.hv"}, "output": "o", "x": 1}"#);
        assert!(err.is_err());
    }

    #[test]
    fn profile_targets_need_geometry() {
        let file: ProblemFile = serde_json::from_str(
            r#"{"target": {"profiles": {"vertical": "/nonexistent/v.csv", "horizontal": "/nonexistent/h.csv"}},
                "output": "o"}"#,
        )
        .unwrap();
        assert!(matches!(file.into_run(), Err(Error::Io(_))));
    }
}
