use super::set::{distance_to_rects, overlapping_range, touching_range};
use super::{Fraction, GridGeometry, GridSet, Rect};
use crate::error::{Error, Result};
use crate::parallel::Execution;

/// Exact Minkowski combination `t·L1 + (1−t)·L2` for `t = p/q`.
///
/// The result lives on the same box refined by `q` per axis. For a vertical
/// run of `L1` in column `i1` (rows `r1..=s1`) and one of `L2` in column `i2`
/// (rows `r2..=s2`), the combination is the refined rectangle with columns
/// `p·i1 + (q−p)·i2 ..+q` and rows `p·r1 + (q−p)·r2 .. p·(s1+1) + (q−p)·(s2+1)`.
pub fn combine(l1: &GridSet, l2: &GridSet, t: Fraction) -> Result<GridSet> {
    if l1.geometry() != l2.geometry() {
        return Err(Error::GeometryMismatch);
    }
    let (p, q) = (t.num() as usize, t.den() as usize);
    let refined = l1.geometry().refine(q)?;
    let mut out = GridSet::empty(refined);
    let runs2 = l2.column_runs();
    for (i1, r1, s1) in l1.column_runs() {
        for &(i2, r2, s2) in &runs2 {
            let col0 = p * i1 + (q - p) * i2;
            let row0 = p * r1 + (q - p) * r2;
            let row1 = p * (s1 + 1) + (q - p) * (s2 + 1);
            for j in row0..row1 {
                for i in col0..col0 + q {
                    out.cells[refined.index(i, j)] = true;
                }
            }
        }
    }
    Ok(out)
}

/// Two-sided raster bracket `inner ⊆ L^ε ⊆ outer` of the outer parallel body.
#[derive(Debug, Clone, PartialEq)]
pub struct Dilation {
    /// `None` when no refined cell is certainly inside `L^ε`.
    pub inner: Option<GridSet>,
    pub outer: GridSet,
}

impl Dilation {
    pub fn inner_area(&self) -> f64 {
        self.inner.as_ref().map_or(0.0, GridSet::area)
    }

    pub fn outer_area(&self) -> f64 {
        self.outer.area()
    }
}

/// Rasterized bracket of `L^ε` on the grid refined by `refine`, extended by
/// `ε` on every side (rounded outward to whole refined cells).
///
/// A refined cell with centre `c` and half-diagonal `δ` is in `outer` iff
/// `d(c, L) ≤ ε + δ` and in `inner` iff `d(c, L) ≤ ε − δ`.
pub fn dilate(l: &GridSet, eps: f64, refine: usize) -> Result<Dilation> {
    dilate_with(l, eps, refine, Execution::default())
}

pub fn dilate_with(l: &GridSet, eps: f64, refine: usize, exec: Execution) -> Result<Dilation> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::InvalidParameter(format!("dilation radius {eps} must be positive")));
    }
    if refine == 0 {
        return Err(Error::InvalidParameter("refinement factor must be positive".into()));
    }
    let g = l.geometry();
    let fine = g.refine(refine)?;
    let (wr, hr) = (fine.cell_width(), fine.cell_height());
    let ex = (eps / wr - 1e-9).ceil().max(1.0) as usize;
    let ey = (eps / hr - 1e-9).ceil().max(1.0) as usize;
    let r = g.rect();
    let rect = Rect::new(
        r.a - ex as f64 * wr,
        r.b + ex as f64 * wr,
        r.c - ey as f64 * hr,
        r.d + ey as f64 * hr,
    )?;
    let ext = GridGeometry::new(rect, fine.m() + 2 * ex, fine.n() + 2 * ey)?;
    let half_diag = 0.5 * ext.cell_diameter();
    let slack = 1e-12 * (rect.diameter() + eps);
    let rects = l.rects();

    let rows = exec.map_range(ext.n(), |j| {
        let cy = 0.5 * (ext.y_line(j) + ext.y_line(j + 1));
        (0..ext.m())
            .map(|i| {
                let cx = 0.5 * (ext.x_line(i) + ext.x_line(i + 1));
                let dist = distance_to_rects(&rects, cx, cy);
                (dist <= eps - half_diag - slack, dist <= eps + half_diag + slack)
            })
            .collect::<Vec<_>>()
    });

    let mut inner = GridSet::empty(ext);
    let mut outer = GridSet::empty(ext);
    for (j, row) in rows.into_iter().enumerate() {
        for (i, (is_in, is_out)) in row.into_iter().enumerate() {
            inner.cells[ext.index(i, j)] = is_in;
            outer.cells[ext.index(i, j)] = is_out;
        }
    }
    let inner = inner.check_non_empty().ok().map(|_| inner);
    Ok(Dilation { inner, outer })
}

/// Minimal covering by coarse cells whose interior meets `L`.
///
/// Since `L` is a union of closed cells with non-empty interior, this still
/// satisfies `L ⊆ cover` and `H(cover, L) ≤` coarse cell diameter, and it
/// reproduces `L` exactly when `coarse` is the geometry of `L`.
pub fn min_cover(l: &GridSet, coarse: &GridGeometry) -> Result<GridSet> {
    cover(l, coarse, overlapping_range)
}

/// Minimal covering by coarse cells whose closed rectangle meets `L`; a shared
/// edge or corner point counts as intersection.
pub fn min_cover_closed(l: &GridSet, coarse: &GridGeometry) -> Result<GridSet> {
    cover(l, coarse, touching_range)
}

type RangeFn = fn(f64, f64, f64, f64, usize) -> (usize, usize);

fn cover(l: &GridSet, coarse: &GridGeometry, range: RangeFn) -> Result<GridSet> {
    if !coarse.rect().contains_rect(&l.bounding_box()) {
        return Err(Error::CoverageError);
    }
    let cr = coarse.rect();
    let mut out = GridSet::empty(*coarse);
    for r in l.rects() {
        let (i0, i1) = range(r.a, r.b, cr.a, coarse.cell_width(), coarse.m());
        let (j0, j1) = range(r.c, r.d, cr.c, coarse.cell_height(), coarse.n());
        for j in j0..j1 {
            for i in i0..i1 {
                out.cells[coarse.index(i, j)] = true;
            }
        }
    }
    out.check_non_empty()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(m: usize, n: usize) -> GridGeometry {
        GridGeometry::unit(m, n).unwrap()
    }

    fn frac(p: u32, q: u32) -> Fraction {
        Fraction::new(p, q).unwrap()
    }

    #[test]
    fn combine_with_zero_weight_is_second_operand() {
        let g = unit(3, 3);
        let l1 = GridSet::from_cells(g, [(0, 0), (1, 0)]).unwrap();
        let l2 = GridSet::from_cells(g, [(2, 2), (2, 1)]).unwrap();
        assert_eq!(combine(&l1, &l2, frac(0, 1)).unwrap(), l2);
        let refined = combine(&l1, &l2, frac(0, 2)).unwrap();
        assert_eq!(refined.geometry().m(), 6);
        assert_eq!(refined.area(), l2.area());
        assert_eq!(combine(&l1, &l2, frac(1, 1)).unwrap(), l1);
    }

    #[test]
    fn combine_of_squares_matches_minkowski_midpoint() {
        // [-3,3]² and [-1,1]² on a unit grid; the midpoint combination is [-2,2]²
        let g = GridGeometry::new(Rect::new(-3.0, 3.0, -3.0, 3.0).unwrap(), 6, 6).unwrap();
        let big = GridSet::full(g);
        let small = GridSet::from_cells(g, [(2, 2), (3, 2), (2, 3), (3, 3)]).unwrap();
        let mid = combine(&big, &small, frac(1, 2)).unwrap();
        assert_eq!(mid.area(), 16.0);
        assert_eq!(mid.bounding_box(), Rect::new(-2.0, 2.0, -2.0, 2.0).unwrap());
        assert_eq!(0.5 * big.area() + 0.5 * small.area(), 20.0);
    }

    #[test]
    fn combine_rejects_mismatched_geometry() {
        let a = GridSet::full(unit(2, 2));
        let b = GridSet::full(unit(2, 3));
        assert!(matches!(combine(&a, &b, frac(1, 2)), Err(Error::GeometryMismatch)));
    }

    #[test]
    fn dilation_brackets_steiner_area() {
        let l = GridSet::full(unit(1, 1));
        let exact = 1.0 + 4.0 * 0.5 + std::f64::consts::PI * 0.25;
        let mut prev_width = f64::INFINITY;
        for refine in [4, 8, 16, 32] {
            let d = dilate(&l, 0.5, refine).unwrap();
            assert!(d.inner_area() <= exact && exact <= d.outer_area());
            let width = d.outer_area() - d.inner_area();
            assert!(width <= prev_width);
            prev_width = width;
        }
        assert!(prev_width < 0.5);
    }

    #[test]
    fn coarse_dilation_may_have_empty_inner() {
        let l = GridSet::full(unit(1, 1));
        let d = dilate(&l, 0.1, 1).unwrap();
        assert!(d.inner.is_none());
        assert!(d.outer.area() >= l.area());
    }

    #[test]
    fn dilation_rejects_bad_parameters() {
        let l = GridSet::full(unit(1, 1));
        assert!(dilate(&l, 0.0, 4).is_err());
        assert!(dilate(&l, -1.0, 4).is_err());
        assert!(dilate(&l, 0.5, 0).is_err());
    }

    #[test]
    fn cover_on_own_geometry_is_identity() {
        let g = unit(4, 4);
        let l = GridSet::from_cells(g, [(1, 1), (2, 1), (2, 2)]).unwrap();
        assert_eq!(min_cover(&l, &g).unwrap(), l);
    }

    #[test]
    fn cover_by_single_cell_is_whole_box() {
        let g = unit(4, 4);
        let l = GridSet::from_cells(g, [(1, 1)]).unwrap();
        let coarse = GridGeometry::new(g.rect(), 1, 1).unwrap();
        assert_eq!(min_cover(&l, &coarse).unwrap(), GridSet::full(coarse));
        assert_eq!(min_cover_closed(&l, &coarse).unwrap(), GridSet::full(coarse));
    }

    #[test]
    fn closed_cover_counts_corner_contacts() {
        let g = unit(2, 2);
        let diag = GridSet::from_cells(g, [(0, 0), (1, 1)]).unwrap();
        assert_eq!(min_cover_closed(&diag, &g).unwrap(), GridSet::full(g));
        assert_eq!(min_cover(&diag, &g).unwrap(), diag);
    }

    #[test]
    fn cover_with_misaligned_grid() {
        let g = unit(2, 2);
        let diag = GridSet::from_cells(g, [(0, 0), (1, 1)]).unwrap();
        let coarse = GridGeometry::new(g.rect(), 3, 3).unwrap();
        let cover = min_cover(&diag, &coarse).unwrap();
        assert_eq!(cover.cell_count(), 7);
        assert!(!cover.contains(2, 0) && !cover.contains(0, 2));
        assert!(cover.is_hv_convex() && cover.is_connected());
    }

    #[test]
    fn cover_requires_containing_box() {
        let l = GridSet::full(unit(2, 2));
        let small = GridGeometry::new(Rect::new(0.0, 1.0, 0.0, 2.0).unwrap(), 2, 2).unwrap();
        assert!(matches!(min_cover(&l, &small), Err(Error::CoverageError)));
    }
}
