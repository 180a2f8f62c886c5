//! Reference implementations that share no code with the library.

#![allow(dead_code)]

use hvconic::{GridGeometry, GridSet, Rect};

/// `∫_a^b |x − α| dα`.
pub fn abs_moment(x: f64, a: f64, b: f64) -> f64 {
    if x <= a {
        (b - a) * (0.5 * (a + b) - x)
    } else if x >= b {
        (b - a) * (x - 0.5 * (a + b))
    } else {
        0.5 * ((x - a) * (x - a) + (b - x) * (b - x))
    }
}

/// Conic function summed cell by cell.
pub fn conic_direct(l: &GridSet, x: f64, y: f64) -> f64 {
    let g = l.geometry();
    l.occupied()
        .map(|(i, j)| {
            let r = g.cell_rect(i, j);
            r.height() * abs_moment(x, r.a, r.b) + r.width() * abs_moment(y, r.c, r.d)
        })
        .sum()
}

/// Whether closed intervals, merged where they touch, form one interval.
fn single_interval(mut intervals: Vec<(f64, f64)>) -> bool {
    if intervals.is_empty() {
        return true;
    }
    intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut hi = intervals[0].1;
    for (a, b) in intervals.into_iter().skip(1) {
        if a > hi {
            return false;
        }
        hi = hi.max(b);
    }
    true
}

/// Section test on every grid line and every cell-interior line.
pub fn hv_convex_by_sections(l: &GridSet) -> bool {
    let g = l.geometry();
    let cells: Vec<Rect> = l.occupied().map(|(i, j)| g.cell_rect(i, j)).collect();
    let mut xs: Vec<f64> = (0..=g.m()).map(|i| g.x_line(i)).collect();
    xs.extend((0..g.m()).map(|i| 0.5 * (g.x_line(i) + g.x_line(i + 1))));
    let mut ys: Vec<f64> = (0..=g.n()).map(|j| g.y_line(j)).collect();
    ys.extend((0..g.n()).map(|j| 0.5 * (g.y_line(j) + g.y_line(j + 1))));
    let vertical = xs.iter().all(|&x| {
        single_interval(cells.iter().filter(|r| r.a <= x && x <= r.b).map(|r| (r.c, r.d)).collect())
    });
    let horizontal = ys.iter().all(|&y| {
        single_interval(cells.iter().filter(|r| r.c <= y && y <= r.d).map(|r| (r.a, r.b)).collect())
    });
    vertical && horizontal
}

/// Connectivity of the closed union: cells are linked when their closed
/// rectangles intersect.
pub fn connected_by_intersection(l: &GridSet) -> bool {
    let g = l.geometry();
    let cells: Vec<Rect> = l.occupied().map(|(i, j)| g.cell_rect(i, j)).collect();
    if cells.is_empty() {
        return false;
    }
    let meets = |p: &Rect, q: &Rect| p.a <= q.b && q.a <= p.b && p.c <= q.d && q.c <= p.d;
    let mut seen = vec![false; cells.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(k) = stack.pop() {
        for j in 0..cells.len() {
            if !seen[j] && meets(&cells[k], &cells[j]) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// All subsets of a grid as cell sets, empty set excluded.
pub fn all_subsets(g: GridGeometry) -> Vec<GridSet> {
    let cells = g.cell_count();
    (1u32..(1 << cells))
        .map(|mask| GridSet::new(g, (0..cells).map(|k| mask >> k & 1 == 1).collect()).unwrap())
        .collect()
}

/// Distance from a point to a segment.
pub fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let t = (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
    (p.0 - a.0 - t * dx).hypot(p.1 - a.1 - t * dy)
}

fn rect_distance(r: &Rect, x: f64, y: f64) -> f64 {
    let dx = if x < r.a { r.a - x } else if x > r.b { x - r.b } else { 0.0 };
    let dy = if y < r.c { r.c - y } else if y > r.d { y - r.d } else { 0.0 };
    (dx * dx + dy * dy).sqrt()
}

/// Directed distance `sup_{p∈from} d(p, to)` over a dense sample.
pub fn directed_dense(from: &GridSet, to: &GridSet, per_cell: usize) -> f64 {
    let g = from.geometry();
    let rects: Vec<Rect> = to.occupied().map(|(i, j)| to.geometry().cell_rect(i, j)).collect();
    let mut best = 0.0f64;
    for (i, j) in from.occupied() {
        let r = g.cell_rect(i, j);
        for a in 0..=per_cell {
            for b in 0..=per_cell {
                let x = r.a + r.width() * a as f64 / per_cell as f64;
                let y = r.c + r.height() * b as f64 / per_cell as f64;
                let d = rects.iter().map(|q| rect_distance(q, x, y)).fold(f64::INFINITY, f64::min);
                best = best.max(d);
            }
        }
    }
    best
}
