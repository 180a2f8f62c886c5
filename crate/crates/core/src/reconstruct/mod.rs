//! Recovery of an hv-convex connected grid set from a target conic function
//! by minimizing `‖f_L − f_K‖` over the feasible sets of a grid.

mod problem;

pub use problem::{load_problem, parse_dims, write_result, ProblemFile, ResultSummary, RunSpec, TargetSpec};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid_geometry::{enumerate_hv_connected, sample_hv_convex, GridGeometry, GridSet};
use crate::parallel::Execution;
use crate::xray_conic::{conic_of, l1_norm_diff, sup_norm_diff, ConicEvaluator};

/// Largest `m·n` accepted by [`exhaustive`].
pub const EXHAUSTIVE_LIMIT: usize = 16;

/// Norm on the reference box used as objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    /// Exact supremum norm.
    Sup,
    /// Upper end of the L1 bracket at the given quadrature refinement.
    L1 { refine: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feasibility {
    HvConnected,
    /// Additionally, the bounding box must be the whole reference box.
    HvConnectedFullBox,
}

#[derive(Debug, Clone)]
pub struct ReconstructionProblem {
    target: ConicEvaluator,
    geometry: GridGeometry,
    norm: Norm,
    feasibility: Feasibility,
}

impl ReconstructionProblem {
    pub fn new(target: ConicEvaluator, geometry: GridGeometry, norm: Norm, feasibility: Feasibility) -> Result<Self> {
        if let Norm::L1 { refine: 0 } = norm {
            return Err(Error::InvalidParameter("L1 refinement must be positive".into()));
        }
        if target.mass().is_nan() || target.mass() <= 0.0 {
            return Err(Error::ZeroMass);
        }
        Ok(ReconstructionProblem {
            target,
            geometry,
            norm,
            feasibility,
        })
    }

    /// Problem whose target is the conic function of `generator`, on the
    /// generator's own grid.
    pub fn from_generator(generator: &GridSet, norm: Norm, feasibility: Feasibility) -> Result<Self> {
        ReconstructionProblem::new(conic_of(generator), generator.geometry(), norm, feasibility)
    }

    pub fn target(&self) -> &ConicEvaluator {
        &self.target
    }

    pub fn geometry(&self) -> GridGeometry {
        self.geometry
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    pub fn feasibility(&self) -> Feasibility {
        self.feasibility
    }

    pub fn is_feasible(&self, l: &GridSet) -> bool {
        l.geometry() == self.geometry
            && l.cell_count() > 0
            && l.is_hv_convex()
            && l.is_connected()
            && (self.feasibility == Feasibility::HvConnected || l.in_level_set(&self.geometry.rect()))
    }
}

/// `‖f_L − f_K‖` over the reference box.
pub fn objective(l: &GridSet, p: &ReconstructionProblem) -> Result<f64> {
    if l.geometry() != p.geometry {
        return Err(Error::GeometryMismatch);
    }
    let b = p.geometry.rect();
    let e = conic_of(l);
    Ok(match p.norm {
        Norm::Sup => sup_norm_diff(&e, &p.target, &b),
        Norm::L1 { refine } => l1_norm_diff(&e, &p.target, &b, refine)?.upper,
    })
}

fn objective_bracket(l: &GridSet, p: &ReconstructionProblem) -> Result<(f64, f64)> {
    match p.norm {
        Norm::Sup => objective(l, p).map(|v| (v, v)),
        Norm::L1 { refine } => {
            let b = l1_norm_diff(&conic_of(l), &p.target, &p.geometry.rect(), refine)?;
            Ok((b.lower, b.upper))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnealingParams {
    pub initial_temperature: f64,
    pub cooling: f64,
    /// Steps per chain.
    pub steps: u64,
    /// Additional chains after the first.
    pub restarts: u32,
    pub seed: u64,
}

impl Default for AnnealingParams {
    fn default() -> Self {
        AnnealingParams {
            initial_temperature: 1.0,
            cooling: 0.9995,
            steps: 20_000,
            restarts: 3,
            seed: 0,
        }
    }
}

impl AnnealingParams {
    pub fn validate(&self) -> Result<()> {
        if !self.initial_temperature.is_finite() || self.initial_temperature <= 0.0 {
            return Err(Error::InvalidParameter("initial temperature must be positive".into()));
        }
        if !(self.cooling > 0.0 && self.cooling < 1.0) {
            return Err(Error::InvalidParameter("cooling factor must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult {
    pub best: GridSet,
    pub objective: f64,
    /// Every global optimum in lexicographic order (exhaustive search only).
    pub optima: Option<Vec<GridSet>>,
    /// `(step, best objective so far)`, recorded whenever the best improves.
    pub trace: Vec<(u64, f64)>,
    /// The best set has a corner-only contact between cells.
    pub thin_contact: bool,
    /// Proposals evaluated, or candidates enumerated.
    pub steps: u64,
}

fn audited(best: GridSet, claimed: f64, p: &ReconstructionProblem) -> Result<(GridSet, f64)> {
    let value = objective(&best, p)?;
    if value != claimed {
        return Err(Error::InvalidParameter(format!(
            "objective audit failed: {claimed} recorded, {value} recomputed"
        )));
    }
    Ok((best, value))
}

/// All global optima over the feasible sets of the grid, by enumeration.
///
/// For the sup norm optima share the exact minimal objective. For the L1
/// norm every set whose bracket overlaps the best bracket is an optimum.
pub fn exhaustive(p: &ReconstructionProblem) -> Result<ReconstructionResult> {
    exhaustive_with(p, Execution::default())
}

pub fn exhaustive_with(p: &ReconstructionProblem, exec: Execution) -> Result<ReconstructionResult> {
    let cells = p.geometry.cell_count();
    if cells > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            cells,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let full = p.feasibility == Feasibility::HvConnectedFullBox;
    let sets = enumerate_hv_connected(p.geometry, full)?;
    if sets.is_empty() {
        return Err(Error::InvalidParameter("no feasible set on this grid".into()));
    }
    let brackets = exec
        .map_slice(&sets, |s| objective_bracket(s, p))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let best_upper = brackets.iter().map(|b| b.1).fold(f64::INFINITY, f64::min);
    let optima: Vec<GridSet> = sets
        .iter()
        .zip(&brackets)
        .filter(|(_, b)| b.0 <= best_upper)
        .map(|(s, _)| s.clone())
        .collect();
    let mut trace = Vec::new();
    let mut running = f64::INFINITY;
    for (k, b) in brackets.iter().enumerate() {
        if b.1 < running {
            running = b.1;
            trace.push((k as u64, running));
        }
    }
    let best_index = brackets.iter().position(|b| b.1 == best_upper).expect("non-empty");
    let (best, objective) = audited(sets[best_index].clone(), best_upper, p)?;
    Ok(ReconstructionResult {
        thin_contact: best.has_thin_contact(),
        best,
        objective,
        optima: Some(optima),
        trace,
        steps: sets.len() as u64,
    })
}

struct Chain {
    best: GridSet,
    best_objective: f64,
    trace: Vec<(u64, f64)>,
    steps: u64,
}

fn chain_seed(seed: u64, index: u64) -> u64 {
    seed.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn run_chain(p: &ReconstructionProblem, params: &AnnealingParams, index: u64) -> Result<Chain> {
    let seed = chain_seed(params.seed, index);
    let full = p.feasibility == Feasibility::HvConnectedFullBox;
    let mut current = sample_hv_convex(p.geometry, seed, full);
    let mut current_objective = objective(&current, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // keep proposals independent of the stream that drew the initial set
    rng.set_stream(1);
    let mut best = current.clone();
    let mut best_objective = current_objective;
    let mut trace = vec![(0, best_objective)];
    let mut temperature = params.initial_temperature;
    let (m, n) = (p.geometry.m(), p.geometry.n());
    let mut steps = 0;
    for step in 1..=params.steps {
        if best_objective == 0.0 {
            break;
        }
        steps = step;
        let cell = rng.gen_range(0..m * n);
        let candidate = current.toggled(cell % m, cell / m);
        if p.is_feasible(&candidate) {
            let value = objective(&candidate, p)?;
            let delta = value - current_objective;
            if delta <= 0.0 || rng.gen::<f64>() < (-delta / temperature).exp() {
                current = candidate;
                current_objective = value;
                if value < best_objective {
                    best = current.clone();
                    best_objective = value;
                    trace.push((step, value));
                }
            }
        }
        temperature *= params.cooling;
    }
    Ok(Chain {
        best,
        best_objective,
        trace,
        steps,
    })
}

/// Simulated annealing over feasible sets with single-cell toggles.
///
/// Runs `restarts + 1` independent chains, each seeded from `seed` and its
/// index and started from a random feasible set. A chain stops early once it
/// reaches objective 0. Chains are merged in index order, and the trace uses
/// global step numbers `index·(steps + 1) + step`.
pub fn local_search(p: &ReconstructionProblem, params: &AnnealingParams) -> Result<ReconstructionResult> {
    local_search_with(p, params, Execution::default())
}

pub fn local_search_with(
    p: &ReconstructionProblem,
    params: &AnnealingParams,
    exec: Execution,
) -> Result<ReconstructionResult> {
    params.validate()?;
    let chains = exec
        .map_range(params.restarts as usize + 1, |c| run_chain(p, params, c as u64))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut best: Option<(GridSet, f64)> = None;
    let mut trace = Vec::new();
    let mut running = f64::INFINITY;
    let mut steps = 0;
    for (c, chain) in chains.into_iter().enumerate() {
        for (step, value) in chain.trace {
            if value < running {
                running = value;
                trace.push((c as u64 * (params.steps + 1) + step, value));
            }
        }
        steps += chain.steps;
        if best.as_ref().is_none_or(|b| chain.best_objective < b.1) {
            best = Some((chain.best, chain.best_objective));
        }
    }
    let (best, claimed) = best.expect("at least one chain");
    let (best, objective) = audited(best, claimed, p)?;
    Ok(ReconstructionResult {
        thin_contact: best.has_thin_contact(),
        best,
        objective,
        optima: None,
        trace,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xray_conic::xrays_equal_ae;

    fn square() -> GridGeometry {
        GridGeometry::unit(2, 2).unwrap()
    }

    fn problem(cells: &[(usize, usize)]) -> ReconstructionProblem {
        let target = GridSet::from_cells(square(), cells.iter().copied()).unwrap();
        ReconstructionProblem::from_generator(&target, Norm::Sup, Feasibility::HvConnected).unwrap()
    }

    #[test]
    fn objective_of_generator_is_zero() {
        let p = problem(&[(0, 0), (1, 0), (1, 1)]);
        let l = GridSet::from_cells(square(), [(0, 0), (1, 0), (1, 1)]).unwrap();
        assert_eq!(objective(&l, &p).unwrap(), 0.0);
        let other = GridSet::full(GridGeometry::unit(3, 3).unwrap());
        assert!(matches!(objective(&other, &p), Err(Error::GeometryMismatch)));
    }

    #[test]
    fn oracle_unique_optima() {
        let full = exhaustive(&problem(&[(0, 0), (1, 0), (0, 1), (1, 1)])).unwrap();
        assert_eq!(full.optima.as_ref().unwrap().len(), 1);
        assert_eq!(full.best, GridSet::full(square()));
        let cell = exhaustive(&problem(&[(0, 0)])).unwrap();
        assert_eq!(cell.optima.unwrap(), vec![GridSet::from_cells(square(), [(0, 0)]).unwrap()]);
    }

    #[test]
    fn oracle_reports_switching_pair() {
        let r = exhaustive(&problem(&[(0, 0), (1, 1)])).unwrap();
        let optima = r.optima.unwrap();
        assert_eq!(optima.len(), 2);
        assert_eq!(r.objective, 0.0);
        assert!(xrays_equal_ae(&optima[0], &optima[1]).unwrap());
        assert!(r.thin_contact);
    }

    #[test]
    fn oracle_size_guard() {
        let g = GridGeometry::unit(5, 4).unwrap();
        let p = ReconstructionProblem::from_generator(&GridSet::full(g), Norm::Sup, Feasibility::HvConnected).unwrap();
        assert!(matches!(exhaustive(&p), Err(Error::TooLarge { cells: 20, limit: 16 })));
    }

    #[test]
    fn l1_oracle_finds_generator() {
        let target = GridSet::from_cells(square(), [(0, 0), (1, 0)]).unwrap();
        let p = ReconstructionProblem::from_generator(&target, Norm::L1 { refine: 2 }, Feasibility::HvConnected).unwrap();
        let r = exhaustive(&p).unwrap();
        assert!(r.optima.unwrap().contains(&target));
    }

    #[test]
    fn zero_steps_returns_initial_sample() {
        let p = problem(&[(0, 0), (1, 1)]);
        let params = AnnealingParams {
            steps: 0,
            restarts: 0,
            seed: 7,
            ..AnnealingParams::default()
        };
        let r = local_search(&p, &params).unwrap();
        let initial = sample_hv_convex(square(), chain_seed(7, 0), false);
        assert_eq!(r.best, initial);
        assert_eq!(r.objective, objective(&initial, &p).unwrap());
        assert_eq!(r.steps, 0);
    }

    #[test]
    fn local_search_is_deterministic_and_monotone() {
        let g = GridGeometry::unit(3, 3).unwrap();
        let target = sample_hv_convex(g, 4, false);
        let p = ReconstructionProblem::from_generator(&target, Norm::Sup, Feasibility::HvConnected).unwrap();
        let params = AnnealingParams {
            steps: 3000,
            seed: 1,
            ..AnnealingParams::default()
        };
        let a = local_search_with(&p, &params, Execution::Sequential).unwrap();
        let b = local_search_with(&p, &params, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(a.trace.windows(2).all(|w| w[1].1 < w[0].1 && w[1].0 > w[0].0));
        assert!(p.is_feasible(&a.best));
        assert_eq!(a.objective, 0.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        let p = problem(&[(0, 0)]);
        for params in [
            AnnealingParams {
                cooling: 1.0,
                ..AnnealingParams::default()
            },
            AnnealingParams {
                initial_temperature: 0.0,
                ..AnnealingParams::default()
            },
        ] {
            assert!(local_search(&p, &params).is_err());
        }
    }
}
