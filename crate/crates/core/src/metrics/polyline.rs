use std::collections::HashMap;
use std::fmt::Write as _;

use super::DistanceBracket;
use crate::error::{Error, Result};
use crate::grid_geometry::GridSet;
use crate::parallel::Execution;

type Point = (f64, f64);

/// Simple polygonal chain, optionally closed.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    vertices: Vec<Point>,
    closed: bool,
}

impl Polyline {
    /// Validates vertex count, distinct consecutive vertices and simplicity.
    pub fn new(vertices: Vec<Point>, closed: bool) -> Result<Self> {
        if vertices.len() < 2 || (closed && vertices.len() < 3) {
            return Err(Error::InvalidParameter("too few vertices".into()));
        }
        if vertices.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
            return Err(Error::InvalidParameter("vertex coordinates must be finite".into()));
        }
        let chain = Polyline { vertices, closed };
        let segs = chain.segments();
        if let Some(k) = segs.iter().position(|(p, q)| p == q) {
            return Err(Error::InvalidParameter(format!("segment {k} has repeated endpoints")));
        }
        chain.check_simple(&segs)?;
        Ok(chain)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn segments(&self) -> Vec<(Point, Point)> {
        let v = &self.vertices;
        let mut segs: Vec<_> = v.windows(2).map(|w| (w[0], w[1])).collect();
        if self.closed {
            segs.push((v[v.len() - 1], v[0]));
        }
        segs
    }

    /// Sum of the Euclidean segment lengths.
    pub fn length(&self) -> f64 {
        self.segments()
            .iter()
            .map(|(p, q)| (q.0 - p.0).hypot(q.1 - p.1))
            .sum()
    }

    pub fn distance_to(&self, x: f64, y: f64) -> f64 {
        self.segments()
            .iter()
            .map(|&(p, q)| point_segment_distance((x, y), p, q))
            .fold(f64::INFINITY, f64::min)
    }

    fn check_simple(&self, segs: &[(Point, Point)]) -> Result<()> {
        let count = segs.len();
        for a in 0..count {
            for b in a + 1..count {
                let adjacent = b == a + 1 || (self.closed && a == 0 && b == count - 1);
                let (p, q) = segs[a];
                let (r, s) = segs[b];
                let bad = if adjacent {
                    // the shared vertex is the only common point unless the
                    // chain folds back onto itself
                    let (shared, x, y) = if b == a + 1 { (q, p, s) } else { (p, q, r) };
                    folds_back(shared, x, y) || (count == 2 && self.closed)
                } else {
                    segments_intersect(p, q, r, s)
                };
                if bad {
                    return Err(Error::NonSimpleChain(format!("segments {a} and {b} meet")));
                }
            }
        }
        Ok(())
    }

    /// Closed rectilinear boundary loops of a grid set, counter-clockwise
    /// around the occupied cells. At a corner contact the traversal takes the
    /// rightmost turn, so the loop runs through the pinch point twice.
    pub fn boundary_loops(set: &GridSet) -> Vec<Vec<Point>> {
        let g = set.geometry();
        let (m, n) = (g.m() as isize, g.n() as isize);
        let occupied = |i: isize, j: isize| i >= 0 && j >= 0 && i < m && j < n && set.contains(i as usize, j as usize);
        let mut edges: Vec<((isize, isize), (isize, isize))> = Vec::new();
        for (i, j) in set.occupied() {
            let (i, j) = (i as isize, j as isize);
            if !occupied(i, j - 1) {
                edges.push(((i, j), (i + 1, j)));
            }
            if !occupied(i + 1, j) {
                edges.push(((i + 1, j), (i + 1, j + 1)));
            }
            if !occupied(i, j + 1) {
                edges.push(((i + 1, j + 1), (i, j + 1)));
            }
            if !occupied(i - 1, j) {
                edges.push(((i, j + 1), (i, j)));
            }
        }
        let mut outgoing: HashMap<(isize, isize), Vec<usize>> = HashMap::new();
        for (k, e) in edges.iter().enumerate() {
            outgoing.entry(e.0).or_default().push(k);
        }
        let mut used = vec![false; edges.len()];
        let mut loops = Vec::new();
        for start in 0..edges.len() {
            if used[start] {
                continue;
            }
            let mut lattice = vec![edges[start].0];
            let mut current = start;
            loop {
                used[current] = true;
                let (from, to) = edges[current];
                let heading = (to.0 - from.0, to.1 - from.1);
                let next = outgoing[&to]
                    .iter()
                    .copied()
                    .filter(|&k| !used[k])
                    .min_by_key(|&k| {
                        let (a, b) = edges[k];
                        turn_rank(heading, (b.0 - a.0, b.1 - a.1))
                    });
                match next {
                    Some(k) => {
                        lattice.push(to);
                        current = k;
                    }
                    None => break,
                }
            }
            loops.push(simplify_lattice_loop(&lattice));
        }
        loops
            .into_iter()
            .map(|lp| lp.into_iter().map(|(i, j)| (g.x_line(i as usize), g.y_line(j as usize))).collect())
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("POLYLINE v1\n");
        let _ = writeln!(out, "closed {}", u8::from(self.closed));
        for (x, y) in &self.vertices {
            let _ = writeln!(out, "{x} {y}");
        }
        out
    }
}

/// Parses the `POLYLINE v1` text format.
pub fn parse_polyline(text: &str) -> Result<Polyline> {
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l.trim()));
    match lines.next() {
        Some((_, "POLYLINE v1")) => {}
        _ => return Err(Error::parse(1, "expected header 'POLYLINE v1'")),
    }
    let closed = match lines.next() {
        Some((_, "closed 0")) => false,
        Some((_, "closed 1")) => true,
        _ => return Err(Error::parse(2, "expected 'closed 0' or 'closed 1'")),
    };
    let mut vertices = Vec::new();
    for (lineno, line) in lines {
        if line.is_empty() {
            continue;
        }
        let nums: Vec<f64> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::parse(lineno, "expected two numbers"))?;
        if nums.len() != 2 {
            return Err(Error::parse(lineno, "expected two numbers"));
        }
        vertices.push((nums[0], nums[1]));
    }
    Polyline::new(vertices, closed)
}

/// Bracket for the area of the ε-neighbourhood of a chain.
///
/// The plane around the chain is tiled with cells of side `ε / refine`;
/// a cell with centre distance `d` and half-diagonal `δ` lies inside the
/// neighbourhood if `d ≤ ε − δ` and may meet it if `d ≤ ε + δ`. Cells are
/// classified on a quadtree so only cells near the neighbourhood boundary are
/// visited at the finest level; the outcome equals the flat fine-grid count.
pub fn tube_area(chain: &Polyline, eps: f64, refine: usize) -> Result<DistanceBracket> {
    tube_area_with(chain, eps, refine, Execution::default())
}

pub fn tube_area_with(chain: &Polyline, eps: f64, refine: usize, exec: Execution) -> Result<DistanceBracket> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::InvalidParameter(format!("tube radius {eps} must be positive")));
    }
    if refine == 0 {
        return Err(Error::InvalidParameter("refinement factor must be positive".into()));
    }
    let depth = usize::BITS - (refine - 1).leading_zeros();
    let depth = if refine == 1 { 0 } else { depth };
    let fine = eps / refine as f64;
    let coarse = fine * (1u64 << depth) as f64;

    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in chain.vertices() {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let (ox, oy) = (x0 - eps, y0 - eps);
    let cols = ((x1 + eps - ox) / coarse).ceil() as usize;
    let rows = ((y1 + eps - oy) / coarse).ceil() as usize;
    let segs = chain.segments();
    let slack = 1e-12 * (eps + (x1 - x0).hypot(y1 - y0));

    let per_row = exec.map_range(rows, |r| {
        let mut counts = (0u64, 0u64);
        for c in 0..cols {
            let x = ox + c as f64 * coarse;
            let y = oy + r as f64 * coarse;
            classify(&segs, eps, slack, (x, y), coarse, depth, &mut counts);
        }
        counts
    });
    let (inner, outer) = per_row
        .into_iter()
        .fold((0u64, 0u64), |acc, c| (acc.0 + c.0, acc.1 + c.1));
    let cell_area = fine * fine;
    DistanceBracket::new(inner as f64 * cell_area, outer as f64 * cell_area)
}

/// Adds the fine-cell counts of one square to `(inner, outer)`.
fn classify(
    segs: &[(Point, Point)],
    eps: f64,
    slack: f64,
    corner: Point,
    side: f64,
    depth: u32,
    counts: &mut (u64, u64),
) {
    let half = 0.5 * side;
    let centre = (corner.0 + half, corner.1 + half);
    let d = segs
        .iter()
        .map(|&(p, q)| point_segment_distance(centre, p, q))
        .fold(f64::INFINITY, f64::min);
    let half_diag = half * std::f64::consts::SQRT_2;
    let fine_cells = 1u64 << (2 * depth);
    if d <= eps - half_diag - slack {
        counts.0 += fine_cells;
        counts.1 += fine_cells;
    } else if d > eps + half_diag + slack {
    } else if depth == 0 {
        counts.1 += 1;
    } else {
        for (dx, dy) in [(0.0, 0.0), (half, 0.0), (0.0, half), (half, half)] {
            classify(segs, eps, slack, (corner.0 + dx, corner.1 + dy), half, depth - 1, counts);
        }
    }
}

pub(crate) fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    (p.0 - (a.0 + t * dx)).hypot(p.1 - (a.1 + t * dy))
}

fn orientation(p: Point, q: Point, r: Point) -> f64 {
    (q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0)
}

fn on_segment(p: Point, q: Point, r: Point) -> bool {
    r.0 >= p.0.min(q.0) && r.0 <= p.0.max(q.0) && r.1 >= p.1.min(q.1) && r.1 <= p.1.max(q.1)
}

fn segments_intersect(p: Point, q: Point, r: Point, s: Point) -> bool {
    let (o1, o2) = (orientation(p, q, r), orientation(p, q, s));
    let (o3, o4) = (orientation(r, s, p), orientation(r, s, q));
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0)) && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0)) {
        return true;
    }
    (o1 == 0.0 && on_segment(p, q, r))
        || (o2 == 0.0 && on_segment(p, q, s))
        || (o3 == 0.0 && on_segment(r, s, p))
        || (o4 == 0.0 && on_segment(r, s, q))
}

/// Segments `shared→x` and `shared→y` overlap beyond their common endpoint.
fn folds_back(shared: Point, x: Point, y: Point) -> bool {
    let dot = (x.0 - shared.0) * (y.0 - shared.0) + (x.1 - shared.1) * (y.1 - shared.1);
    orientation(shared, x, y) == 0.0 && dot > 0.0
}

/// Smaller is preferred: right turn, straight, left turn, reversal.
fn turn_rank(heading: (isize, isize), next: (isize, isize)) -> u8 {
    let cross = heading.0 * next.1 - heading.1 * next.0;
    let dot = heading.0 * next.0 + heading.1 * next.1;
    match (cross.signum(), dot.signum()) {
        (-1, _) => 0,
        (0, 1) => 1,
        (1, _) => 2,
        _ => 3,
    }
}

fn simplify_lattice_loop(points: &[(isize, isize)]) -> Vec<(isize, isize)> {
    let len = points.len();
    (0..len)
        .filter(|&k| {
            let prev = points[(k + len - 1) % len];
            let cur = points[k];
            let next = points[(k + 1) % len];
            (cur.0 - prev.0) * (next.1 - cur.1) - (cur.1 - prev.1) * (next.0 - cur.0) != 0
        })
        .map(|k| points[k])
        .collect()
}
