use super::{CheckReport, Witness};
use crate::error::{Error, Result};
use crate::grid_geometry::{dilate, min_cover, to_hvset_string, GridGeometry, GridSet};
use crate::metrics::{hausdorff, tube_area, Polyline};
use crate::xray_conic::{conic_of, sup_norm_diff, sup_norm_diff_witness};

fn require_hv_connected(l: &GridSet, what: &str) -> Result<()> {
    if !l.is_hv_convex() || !l.is_connected() {
        return Err(Error::PreconditionViolated(format!("{what} must be hv-convex and connected")));
    }
    Ok(())
}

/// `(k/2 + 2r)·2kr`.
fn stability_envelope(k: f64, r: f64) -> f64 {
    (0.5 * k + 2.0 * r) * 2.0 * k * r
}

/// Checks `λ(L^ε) − λ(L) ≤ 2kε` with `k` the perimeter of the bounding box
/// of `L`, using the outer raster bracket of `L^ε` on the grid refined by
/// `refine`. The bracket width is reported as `bracket_error`.
///
/// When the boundary of `L` is a simple closed chain, the upper tube-area
/// bracket of that chain is reported as `boundary_tube_upper`; the excess is
/// contained in that tube.
pub fn check_dilation_bound(l: &GridSet, eps: f64, refine: usize) -> Result<CheckReport> {
    require_hv_connected(l, "the set")?;
    let d = dilate(l, eps, refine)?;
    let k = l.bounding_box().perimeter();
    let excess_upper = d.outer_area() - l.area();
    let bound = 2.0 * k * eps;
    let width = d.outer_area() - d.inner_area();
    let mut report = CheckReport::new(
        "dilation",
        bound - excess_upper,
        width,
        &[&to_hvset_string(l), &eps.to_string(), &refine.to_string()],
    )
    .with("eps", eps)
    .with("perimeter", k)
    .with("bound", bound)
    .with("excess_lower", d.inner_area() - l.area())
    .with("excess_upper", excess_upper);
    let loops = Polyline::boundary_loops(l);
    if let [only] = loops.as_slice() {
        if let Ok(chain) = Polyline::new(only.clone(), true) {
            report = report.with("boundary_tube_upper", tube_area(&chain, eps, refine)?.upper);
        }
    }
    Ok(report)
}

/// Checks `sup_B |f_L − f_K| ≤ (k/2 + 2r)·2kr` with `k` the perimeter of the
/// reference box and `r` the upper end of the Hausdorff bracket.
pub fn check_stability_bound(k_set: &GridSet, l: &GridSet, subsamples: usize) -> Result<CheckReport> {
    if k_set.geometry() != l.geometry() {
        return Err(Error::GeometryMismatch);
    }
    require_hv_connected(k_set, "K")?;
    require_hv_connected(l, "L")?;
    let b = l.geometry().rect();
    let h = hausdorff(l, k_set, subsamples)?;
    let (measured, (x, y)) = sup_norm_diff_witness(&conic_of(l), &conic_of(k_set), &b);
    let bound = stability_envelope(b.perimeter(), h.upper);
    Ok(CheckReport::new(
        "stability",
        bound - measured,
        0.0,
        &[&to_hvset_string(k_set), &to_hvset_string(l), &subsamples.to_string()],
    )
    .with_witness(Witness::Point { x, y })
    .with("sup_norm", measured)
    .with("bound", bound)
    .with("hausdorff_lower", h.lower)
    .with("hausdorff_upper", h.upper))
}

/// Per-cell sample count for a covering on `coarse` so that its sample
/// lattice has the spacing of `base` samples per cell of `fine`.
pub fn convergence_subsamples(fine: &GridGeometry, coarse: &GridGeometry, base: usize) -> usize {
    let ratio = (fine.m() / coarse.m()).max(fine.n() / coarse.n()).max(1);
    (base - 1) * ratio + 1
}

/// Builds the minimal coverings `L_n` of `L` on each resolution and checks
/// that every `L_n` is hv-convex and connected, that the upper Hausdorff
/// brackets `H(L_n, L)` do not increase, and that
/// `sup_B |f_{L_n} − f_L| ≤ (k/2 + 2r_n)·2k·r_n` at every step, where `B` is
/// the box of `L`'s grid and `r_n` the upper bracket.
///
/// Resolutions must share the box of `L` and each must subdivide the
/// previous one. Coarse levels are sampled with proportionally more points
/// per cell (see [`convergence_subsamples`]) so all levels share one sample
/// lattice. The margin is the smallest envelope slack or bracket decrease.
pub fn check_convergence(l: &GridSet, resolutions: &[GridGeometry], base_subsamples: usize) -> Result<CheckReport> {
    require_hv_connected(l, "the set")?;
    if resolutions.is_empty() {
        return Err(Error::InvalidParameter("no resolutions given".into()));
    }
    let g = l.geometry();
    for (k, r) in resolutions.iter().enumerate() {
        if r.rect() != g.rect() {
            return Err(Error::PreconditionViolated(format!("resolution {k} uses a different box")));
        }
        if k > 0 {
            let prev = resolutions[k - 1];
            let refines = r.m() % prev.m() == 0 && r.n() % prev.n() == 0 && r.cell_count() > prev.cell_count();
            if !refines {
                return Err(Error::PreconditionViolated(format!("resolution {k} does not refine its predecessor")));
            }
        }
    }
    let b = g.rect();
    let perimeter = b.perimeter();
    let target = conic_of(l);
    let mut margin = f64::INFINITY;
    let mut witness = None;
    let mut prev_upper = f64::INFINITY;
    let mut last = (0.0, 0.0);
    let mut digest_inputs = vec![to_hvset_string(l)];
    for (step, res) in resolutions.iter().enumerate() {
        digest_inputs.push(format!("{}x{}", res.m(), res.n()));
        let cover = min_cover(l, res)?;
        if !cover.is_hv_convex() || !cover.is_connected() {
            margin = -1.0;
            witness = Some(Witness::Set {
                label: format!("step {step}: covering is not hv-convex and connected"),
            });
            break;
        }
        let h = hausdorff(&cover, l, convergence_subsamples(&g, res, base_subsamples))?;
        let sup = sup_norm_diff(&conic_of(&cover), &target, &b);
        let envelope = stability_envelope(perimeter, h.upper);
        let slack = (envelope - sup).min(prev_upper - h.upper);
        if slack < margin {
            margin = slack;
            witness = Some(Witness::Set {
                label: format!("step {step}: {}x{}", res.m(), res.n()),
            });
        }
        prev_upper = h.upper;
        last = (h.upper, sup);
    }
    let refs: Vec<&str> = digest_inputs.iter().map(String::as_str).collect();
    let mut report = CheckReport::new("convergence", margin, 0.0, &refs)
        .with("steps", resolutions.len() as f64)
        .with("final_hausdorff_upper", last.0)
        .with("final_sup_norm", last.1);
    report.witness = witness;
    Ok(report)
}

/// Checks the tube bound `λ(P^ε) ≤ 2lε + πε²`, or `≤ 2lε` for closed chains,
/// against the upper tube-area bracket.
pub fn check_polyline_bound(chain: &Polyline, eps: f64, refine: usize) -> Result<CheckReport> {
    let area = tube_area(chain, eps, refine)?;
    let l = chain.length();
    let bound = if chain.is_closed() {
        2.0 * l * eps
    } else {
        2.0 * l * eps + std::f64::consts::PI * eps * eps
    };
    Ok(CheckReport::new(
        "polyline",
        bound - area.upper,
        area.width(),
        &[&chain.to_text(), &eps.to_string(), &refine.to_string()],
    )
    .with("length", l)
    .with("bound", bound)
    .with("area_lower", area.lower)
    .with("area_upper", area.upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid_geometry::{sample_hv_convex, Rect};

    #[test]
    fn dilation_of_unit_square() {
        let l = GridSet::full(GridGeometry::unit(1, 1).unwrap());
        let r = check_dilation_bound(&l, 0.5, 16).unwrap();
        assert!(r.holds && r.margin > 1.0);
        let steiner = 4.0 * 0.5 + std::f64::consts::PI * 0.25;
        assert!(r.quantities["excess_lower"] <= steiner && steiner <= r.quantities["excess_upper"]);
        assert!(r.quantities["boundary_tube_upper"] >= r.quantities["excess_lower"]);
    }

    #[test]
    fn dilation_bound_fails_for_large_radius() {
        // πε > k: the disk term dominates and the bound is violated
        let l = GridSet::full(GridGeometry::unit(1, 1).unwrap());
        let r = check_dilation_bound(&l, 2.0, 8).unwrap();
        assert!(!r.holds);
    }

    #[test]
    fn dilation_refuses_disconnected_sets() {
        let g = GridGeometry::unit(3, 1).unwrap();
        let l = GridSet::from_cells(g, [(0, 0), (2, 0)]).unwrap();
        assert!(matches!(check_dilation_bound(&l, 0.1, 4), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn stability_of_identical_sets() {
        let l = sample_hv_convex(GridGeometry::unit(4, 4).unwrap(), 1, false);
        let r = check_stability_bound(&l, &l, 4).unwrap();
        assert_eq!((r.margin, r.quantities["bound"]), (0.0, 0.0));
        assert!(r.holds);
    }

    #[test]
    fn stability_cell_versus_square() {
        let g = GridGeometry::unit(2, 2).unwrap();
        let cell = GridSet::from_cells(g, [(0, 0)]).unwrap();
        let r = check_stability_bound(&cell, &GridSet::full(g), 4).unwrap();
        assert!(r.holds && r.quantities["sup_norm"] > 0.0);
    }

    #[test]
    fn convergence_on_own_grid_is_exact() {
        let g = GridGeometry::unit(4, 4).unwrap();
        let l = sample_hv_convex(g, 5, false);
        let r = check_convergence(&l, &[g], 4).unwrap();
        assert_eq!(r.quantities["final_sup_norm"], 0.0);
        assert_eq!(r.quantities["final_hausdorff_upper"], 0.0);
        assert!(r.holds);
    }

    #[test]
    fn convergence_sequence() {
        let g = GridGeometry::new(Rect::new(0.0, 8.0, 0.0, 8.0).unwrap(), 8, 8).unwrap();
        let l = sample_hv_convex(g, 11, false);
        let res: Vec<_> = [1, 2, 4, 8].iter().map(|&k| GridGeometry::new(g.rect(), k, k).unwrap()).collect();
        let r = check_convergence(&l, &res, 4).unwrap();
        assert!(r.holds, "{r:?}");
        assert_eq!(r.quantities["final_sup_norm"], 0.0);
        let bad = [res[2], res[1]];
        assert!(matches!(check_convergence(&l, &bad, 4), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn polyline_bounds() {
        let seg = Polyline::new(vec![(0.0, 0.0), (2.0, 0.0)], false).unwrap();
        let r = check_polyline_bound(&seg, 0.25, 64).unwrap();
        assert!(r.holds && r.margin.abs() <= r.bracket_error);
        let square = Polyline::new(vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)], true).unwrap();
        let r = check_polyline_bound(&square, 0.1, 256).unwrap();
        assert!(r.holds && r.margin > 0.0, "{r:?}");
    }

    #[test]
    fn closed_bound_fails_for_wide_tubes() {
        // area 9 − (4 − π) = 5 + π > 8 for the unit square at ε = 1
        let square = Polyline::new(vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)], true).unwrap();
        let r = check_polyline_bound(&square, 1.0, 256).unwrap();
        assert!(!r.holds);
    }
}
