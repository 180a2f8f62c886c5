use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use hvconic::grid_geometry::sample_hv_convex;
use hvconic::metrics::parse_polyline;
use hvconic::theorem_verify::{
    check_area_superadditivity, check_concavity, check_convergence, check_dilation_bound, check_polyline_bound,
    check_stability_bound, reproduce_remark2, run_batch, CheckReport,
};
use hvconic::{Error, Execution, Fraction, GridGeometry, Result};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Concavity,
    Superadd,
    Dilation,
    Stability,
    Convergence,
    Polyline,
    Remark2,
}

#[derive(Args)]
pub struct VerifyArgs {
    check: Check,
    /// Number of random instances; each check has its own default.
    #[arg(long)]
    seeds: Option<u64>,
    /// First seed of the batch.
    #[arg(long, default_value_t = 0)]
    first_seed: u64,
    /// Grid of the random sets (unit cells); 8x8, or 16x16 for convergence.
    #[arg(long, value_name = "MxN")]
    dims: Option<String>,
    /// Combination weight for concavity and superadd.
    #[arg(long, default_value = "1/2")]
    t: Fraction,
    /// Radius for dilation (default 0.25) and polyline (default 0.1).
    #[arg(long)]
    eps: Option<f64>,
    /// Raster refinement for dilation (default 8) and polyline (default 256).
    #[arg(long)]
    refine: Option<usize>,
    #[arg(long, default_value_t = hvconic::metrics::DEFAULT_SUBSAMPLES)]
    subsamples: usize,
    /// Sample points per axis for the conic concavity inequality.
    #[arg(long, default_value_t = hvconic::theorem_verify::DEFAULT_LATTICE)]
    lattice: usize,
    /// Chain file for the polyline check.
    #[arg(long)]
    polyline: Option<PathBuf>,
}

/// Coarse resolutions `m/2^j × n/2^j`, from the coarsest with at least two
/// cells per axis up to the grid itself.
fn halving_resolutions(g: GridGeometry) -> Result<Vec<GridGeometry>> {
    let mut levels = vec![(g.m(), g.n())];
    let (mut m, mut n) = (g.m(), g.n());
    while m % 2 == 0 && n % 2 == 0 && m >= 4 && n >= 4 {
        m /= 2;
        n /= 2;
        levels.push((m, n));
    }
    levels
        .into_iter()
        .rev()
        .map(|(m, n)| GridGeometry::new(g.rect(), m, n))
        .collect()
}

fn default_seeds(check: Check) -> u64 {
    match check {
        Check::Concavity => 200,
        Check::Stability => 500,
        Check::Convergence => 20,
        _ => 100,
    }
}

pub fn run(args: VerifyArgs) -> Result<bool> {
    let count = args.seeds.unwrap_or_else(|| default_seeds(args.check));
    let seeds = args.first_seed..args.first_seed + count;
    let dims = args.dims.clone().unwrap_or_else(|| {
        if args.check == Check::Convergence { "16x16" } else { "8x8" }.to_string()
    });
    let g = crate::unit_geometry(&dims)?;
    let exec = Execution::default();
    let pair = |s: u64, full: bool| (sample_hv_convex(g, 2 * s, full), sample_hv_convex(g, 2 * s + 1, full));

    let reports: Vec<CheckReport> = match args.check {
        Check::Concavity => run_batch(seeds, exec, |s| {
            let (a, b) = pair(s, true);
            check_concavity(&a, &b, args.t, args.lattice)
        })?,
        Check::Superadd => run_batch(seeds, exec, |s| {
            let (a, b) = pair(s, true);
            check_area_superadditivity(&a, &b, args.t)
        })?,
        Check::Dilation => {
            let eps = args.eps.unwrap_or(0.25);
            let refine = args.refine.unwrap_or(8);
            run_batch(seeds, exec, |s| check_dilation_bound(&sample_hv_convex(g, s, false), eps, refine))?
        }
        Check::Stability => run_batch(seeds, exec, |s| {
            let (a, b) = pair(s, false);
            check_stability_bound(&a, &b, args.subsamples)
        })?,
        Check::Convergence => {
            let levels = halving_resolutions(g)?;
            run_batch(seeds, exec, |s| {
                check_convergence(&sample_hv_convex(g, s, false), &levels, args.subsamples)
            })?
        }
        Check::Polyline => {
            let path = args
                .polyline
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter("--polyline FILE is required".into()))?;
            let chain = parse_polyline(&std::fs::read_to_string(path)?)?;
            vec![check_polyline_bound(
                &chain,
                args.eps.unwrap_or(0.1),
                args.refine.unwrap_or(256),
            )?]
        }
        Check::Remark2 => vec![reproduce_remark2()?],
    };

    let mut out = std::io::stdout().lock();
    for r in &reports {
        writeln!(out, "{}", r.to_json_line())?;
    }
    let all_hold = reports.iter().all(|r| r.holds);
    Ok(if args.check == Check::Remark2 {
        reports.iter().all(|r| !r.holds)
    } else {
        all_hold
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halving_levels() {
        let levels = halving_resolutions(GridGeometry::unit(16, 16).unwrap()).unwrap();
        let dims: Vec<_> = levels.iter().map(|g| g.m()).collect();
        assert_eq!(dims, vec![2, 4, 8, 16]);
        let odd = halving_resolutions(GridGeometry::unit(3, 5).unwrap()).unwrap();
        assert_eq!(odd.len(), 1);
    }
}
