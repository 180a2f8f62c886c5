//! Point distances, Hausdorff brackets between grid sets and tube areas of
//! polygonal chains.

mod polyline;

pub use polyline::{parse_polyline, tube_area, tube_area_with, Polyline};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid_geometry::{distance_to_rects, lerp_frac, GridSet};
use crate::parallel::Execution;

/// Certified two-sided enclosure `lower ≤ value ≤ upper`. The midpoint carries
/// no meaning of its own.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceBracket {
    pub lower: f64,
    pub upper: f64,
}

impl DistanceBracket {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(0.0 <= lower && lower <= upper) {
            return Err(Error::InvalidParameter(format!("invalid bracket [{lower}, {upper}]")));
        }
        Ok(DistanceBracket { lower, upper })
    }

    pub fn exact(value: f64) -> Self {
        DistanceBracket {
            lower: value,
            upper: value,
        }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

/// `(|x−α|^p + |y−β|^p)^(1/p)` for `p ≥ 1`.
pub fn dist_p(u: (f64, f64), v: (f64, f64), p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidParameter(format!("p = {p} must be at least 1")));
    }
    let (dx, dy) = ((u.0 - v.0).abs(), (u.1 - v.1).abs());
    Ok(if p == 1.0 {
        dx + dy
    } else if p == 2.0 {
        dx.hypot(dy)
    } else if p.is_infinite() {
        dx.max(dy)
    } else {
        (dx.powf(p) + dy.powf(p)).powf(1.0 / p)
    })
}

/// Default number of sample points per cell edge.
pub const DEFAULT_SUBSAMPLES: usize = 4;

/// Certified bracket for the Hausdorff distance `H(K, L)`.
///
/// Each occupied cell of one set that is not covered by the other is sampled
/// on an `s × s` lattice (corners included); the exact distance to the other
/// set at the samples gives the lower bound and adding half the lattice-cell
/// diagonal gives the upper bound. Covered cells contribute exactly zero.
pub fn hausdorff(k: &GridSet, l: &GridSet, subsamples: usize) -> Result<DistanceBracket> {
    hausdorff_with(k, l, subsamples, Execution::default())
}

pub fn hausdorff_with(k: &GridSet, l: &GridSet, subsamples: usize, exec: Execution) -> Result<DistanceBracket> {
    if subsamples < 2 {
        return Err(Error::InvalidParameter("need at least 2 samples per cell edge".into()));
    }
    let (a_lo, a_hi) = directed(k, l, subsamples, exec);
    let (b_lo, b_hi) = directed(l, k, subsamples, exec);
    Ok(DistanceBracket {
        lower: a_lo.max(b_lo),
        upper: a_hi.max(b_hi),
    })
}

/// Bracket of `sup_{p ∈ from} d(p, to)`.
fn directed(from: &GridSet, to: &GridSet, s: usize, exec: Execution) -> (f64, f64) {
    let g = from.geometry();
    let r = g.rect();
    let rects = to.rects();
    let (mx, ny) = (g.m() * (s - 1), g.n() * (s - 1));
    let half_diag = 0.5 * (g.cell_width() / (s - 1) as f64).hypot(g.cell_height() / (s - 1) as f64);
    let cells: Vec<(usize, usize)> = from.occupied().collect();
    let per_cell = exec.map_slice(&cells, |&(i, j)| {
        if to.covers_rect(&g.cell_rect(i, j)) {
            return (0.0, 0.0);
        }
        let mut best = 0.0f64;
        for kj in 0..s {
            let y = lerp_frac(r.c, r.d, j * (s - 1) + kj, ny);
            for ki in 0..s {
                let x = lerp_frac(r.a, r.b, i * (s - 1) + ki, mx);
                best = best.max(distance_to_rects(&rects, x, y));
            }
        }
        (best, best + half_diag)
    });
    per_cell
        .into_iter()
        .fold((0.0f64, 0.0f64), |(lo, hi), (a, b)| (lo.max(a), hi.max(b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid_geometry::{GridGeometry, Rect};

    #[test]
    fn p_distances() {
        assert_eq!(dist_p((0.0, 0.0), (3.0, 4.0), 2.0).unwrap(), 5.0);
        assert_eq!(dist_p((0.0, 0.0), (3.0, 4.0), 1.0).unwrap(), 7.0);
        assert!((dist_p((0.0, 0.0), (3.0, 4.0), 3.0).unwrap() - 91f64.cbrt()).abs() < 1e-12);
        for p in [1.0, 1.5, 2.0, 7.0] {
            assert_eq!(dist_p((1.5, -2.0), (1.5, -2.0), p).unwrap(), 0.0);
        }
        assert!(dist_p((0.0, 0.0), (1.0, 1.0), 0.5).is_err());
    }

    #[test]
    fn hausdorff_of_identical_sets_is_zero() {
        let g = GridGeometry::unit(4, 3).unwrap();
        let l = GridSet::from_cells(g, [(0, 0), (1, 0), (1, 1), (2, 1)]).unwrap();
        assert_eq!(hausdorff(&l, &l, 4).unwrap(), DistanceBracket::exact(0.0));
    }

    #[test]
    fn hausdorff_to_domino() {
        let g = GridGeometry::unit(2, 1).unwrap();
        let k = GridSet::from_cells(g, [(0, 0)]).unwrap();
        let l = GridSet::full(g);
        let h = hausdorff(&k, &l, 4).unwrap();
        assert!(h.contains(1.0));
        assert_eq!(h.lower, 1.0);
    }

    #[test]
    fn hausdorff_of_translate() {
        let g = GridGeometry::unit(4, 5).unwrap();
        let k = GridSet::from_cells(g, [(0, 0)]).unwrap();
        let l = GridSet::from_cells(g, [(3, 4)]).unwrap();
        let h = hausdorff(&k, &l, 4).unwrap();
        assert!(h.contains(5.0));
        assert_eq!(h.lower, 5.0);
        let tight = hausdorff(&k, &l, 64).unwrap();
        assert!(tight.width() < h.width());
    }

    #[test]
    fn hausdorff_across_geometries() {
        let fine = GridGeometry::new(Rect::new(0.0, 4.0, 0.0, 4.0).unwrap(), 4, 4).unwrap();
        let coarse = GridGeometry::new(fine.rect(), 2, 2).unwrap();
        let l = GridSet::from_cells(fine, [(0, 0), (1, 0), (0, 1), (1, 1)]).unwrap();
        let same = GridSet::from_cells(coarse, [(0, 0)]).unwrap();
        assert_eq!(hausdorff(&l, &same, 4).unwrap(), DistanceBracket::exact(0.0));
    }

    #[test]
    fn rejects_too_few_samples() {
        let l = GridSet::full(GridGeometry::unit(1, 1).unwrap());
        assert!(hausdorff(&l, &l, 1).is_err());
    }
}
