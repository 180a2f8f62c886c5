use super::evaluator::{ConicEvaluator, PiecewiseQuadratic};
use crate::error::{Error, Result};
use crate::grid_geometry::{GridSet, Rect};
use crate::metrics::DistanceBracket;
use crate::parallel::{compensated_sum, Execution};

/// Knots of either function strictly inside `(lo, hi)`, with both ends.
fn merged_partition(p: &PiecewiseQuadratic, q: &PiecewiseQuadratic, lo: f64, hi: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = p
        .knots()
        .iter()
        .chain(q.knots())
        .copied()
        .filter(|t| *t > lo && *t < hi)
        .collect();
    pts.push(lo);
    pts.push(hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Extremes of `p − q` over `[lo, hi]`: `((max, argmax), (min, argmin))`.
fn difference_extremes(p: &PiecewiseQuadratic, q: &PiecewiseQuadratic, lo: f64, hi: f64) -> ((f64, f64), (f64, f64)) {
    let diff = |t: f64| p.eval(t) - q.eval(t);
    let mut max = (diff(lo), lo);
    let mut min = max;
    let mut consider = |t: f64| {
        let d = diff(t);
        if d > max.0 {
            max = (d, t);
        }
        if d < min.0 {
            min = (d, t);
        }
    };
    let pts = merged_partition(p, q, lo, hi);
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        consider(b);
        // on (a, b) the difference is one quadratic A s² + D s + const
        let curv = p.curvature_at(a) - q.curvature_at(a);
        let slope = p.slope(a) - q.slope(a);
        if curv != 0.0 {
            let s = -slope / (2.0 * curv);
            if s > 0.0 && s < b - a {
                consider(a + s);
            }
        }
    }
    (max, min)
}

/// `sup_B |f1 − f2|`, computed from the separable parts without sampling.
pub fn sup_norm_diff(e1: &ConicEvaluator, e2: &ConicEvaluator, b: &Rect) -> f64 {
    sup_norm_diff_witness(e1, e2, b).0
}

/// Same as [`sup_norm_diff`], plus a point of `B` where the sup is attained.
pub fn sup_norm_diff_witness(e1: &ConicEvaluator, e2: &ConicEvaluator, b: &Rect) -> (f64, (f64, f64)) {
    let ((ux, uxa), (un, una)) = difference_extremes(e1.u(), e2.u(), b.a, b.b);
    let ((vx, vxa), (vn, vna)) = difference_extremes(e1.v(), e2.v(), b.c, b.d);
    let above = ux + vx;
    let below = -(un + vn);
    if above >= below {
        (above.max(0.0), (uxa, vxa))
    } else {
        (below.max(0.0), (una, vna))
    }
}

/// One quadrature sub-interval on which the difference of two pieces is a
/// single quadratic.
struct Piece {
    width: f64,
    /// Difference at the midpoint.
    mid: f64,
    /// Bound on the derivative of the difference.
    lipschitz: f64,
    /// Mean of the difference minus its midpoint value, `A·w²/12`.
    correction: f64,
}

/// Sub-intervals of the merged partition, each split into `refine` pieces.
fn quadrature_pieces(p: &PiecewiseQuadratic, q: &PiecewiseQuadratic, lo: f64, hi: f64, refine: usize) -> Vec<Piece> {
    let pts = merged_partition(p, q, lo, hi);
    let mut out = Vec::with_capacity((pts.len() - 1) * refine);
    for w in pts.windows(2) {
        let curv = p.curvature_at(w[0]) - q.curvature_at(w[0]);
        for k in 0..refine {
            let a = w[0] + (w[1] - w[0]) * k as f64 / refine as f64;
            let b = w[0] + (w[1] - w[0]) * (k + 1) as f64 / refine as f64;
            let mid = 0.5 * (a + b);
            // the derivative of the difference is continuous and affine here
            let lipschitz = (p.slope(a) - q.slope(a)).abs().max((p.slope(b) - q.slope(b)).abs());
            out.push(Piece {
                width: b - a,
                mid: p.eval(mid) - q.eval(mid),
                lipschitz,
                correction: curv * (b - a) * (b - a) / 12.0,
            });
        }
    }
    out
}

/// Bracket for `∫_B |f1 − f2|` on the merged breakpoint partition refined
/// `refine` times.
///
/// Where the difference keeps its sign on a cell it is a separable quadratic
/// there and its integral is computed in closed form. On the remaining cells
/// the midpoint value is used with the Lipschitz error
/// `area·(Lx·wx/4 + Ly·wy/4)`.
pub fn l1_norm_diff(e1: &ConicEvaluator, e2: &ConicEvaluator, b: &Rect, refine: usize) -> Result<DistanceBracket> {
    l1_norm_diff_with(e1, e2, b, refine, Execution::default())
}

pub fn l1_norm_diff_with(
    e1: &ConicEvaluator,
    e2: &ConicEvaluator,
    b: &Rect,
    refine: usize,
    exec: Execution,
) -> Result<DistanceBracket> {
    if refine == 0 {
        return Err(Error::InvalidParameter("refinement factor must be positive".into()));
    }
    let xs = quadrature_pieces(e1.u(), e2.u(), b.a, b.b, refine);
    let ys = quadrature_pieces(e1.v(), e2.v(), b.c, b.d, refine);
    let rows = exec.map_slice(&ys, |py| {
        let cells = xs.iter().map(|px| {
            let area = px.width * py.width;
            let mid = px.mid + py.mid;
            let reach = 0.5 * (px.lipschitz * px.width + py.lipschitz * py.width);
            if mid.abs() > reach {
                ((area * (mid + px.correction + py.correction)).abs(), 0.0)
            } else {
                (area * mid.abs(), 0.5 * area * reach)
            }
        });
        let (values, errors): (Vec<f64>, Vec<f64>) = cells.unzip();
        (compensated_sum(values), compensated_sum(errors))
    });
    let value = compensated_sum(rows.iter().map(|r| r.0));
    let error = compensated_sum(rows.iter().map(|r| r.1)) + 1e-12 * value;
    DistanceBracket::new((value - error).max(0.0), value + error)
}

/// Whether two sets on the same grid have identical coordinate X-rays,
/// compared on the integer cell counts.
pub fn xrays_equal_ae(l1: &GridSet, l2: &GridSet) -> Result<bool> {
    if l1.geometry() != l2.geometry() {
        return Err(Error::GeometryMismatch);
    }
    Ok(l1.column_counts() == l2.column_counts() && l1.row_counts() == l2.row_counts())
}
