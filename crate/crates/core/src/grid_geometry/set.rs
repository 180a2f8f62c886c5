use std::collections::VecDeque;

use super::{GridGeometry, Rect, SNAP};
use crate::error::{Error, Result};

/// Closed interval `[lo, hi]` on the real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

/// Lower and upper bound of one occupied, vertically convex column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnBound {
    pub column: usize,
    pub lower: f64,
    pub upper: f64,
}

/// The bound functions `g ≤ h` of a set whose columns are contiguous runs.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnProfile {
    pub columns: Vec<ColumnBound>,
}

impl ColumnProfile {
    /// Rebuilds the set lying between the bound functions.
    pub fn to_grid_set(&self, geometry: GridGeometry) -> Result<GridSet> {
        let h = geometry.cell_height();
        let c = geometry.rect().c;
        let to_row = |y: f64| ((y - c) / h).round() as usize;
        let mut set = GridSet::empty(geometry);
        for col in &self.columns {
            if col.column >= geometry.m() || col.lower > col.upper {
                return Err(Error::InvalidParameter(format!("bad column bound {col:?}")));
            }
            for j in to_row(col.lower)..to_row(col.upper).min(geometry.n()) {
                set.cells[geometry.index(col.column, j)] = true;
            }
        }
        set.check_non_empty()?;
        Ok(set)
    }
}

/// Non-empty union of closed cells on a fixed grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridSet {
    geometry: GridGeometryKey,
    pub(crate) cells: Vec<bool>,
}

// `GridGeometry` holds floats; sets compare by bit pattern of their geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct GridGeometryKey {
    rect: [u64; 4],
    m: usize,
    n: usize,
}

impl From<GridGeometry> for GridGeometryKey {
    fn from(g: GridGeometry) -> Self {
        let r = g.rect();
        GridGeometryKey {
            rect: [r.a.to_bits(), r.b.to_bits(), r.c.to_bits(), r.d.to_bits()],
            m: g.m(),
            n: g.n(),
        }
    }
}

impl GridGeometryKey {
    fn geometry(&self) -> GridGeometry {
        let [a, b, c, d] = self.rect.map(f64::from_bits);
        GridGeometry {
            rect: Rect { a, b, c, d },
            m: self.m,
            n: self.n,
        }
    }
}

impl GridSet {
    /// Builds a set from a row-major indicator (`index = j * m + i`).
    pub fn new(geometry: GridGeometry, cells: Vec<bool>) -> Result<Self> {
        if cells.len() != geometry.cell_count() {
            return Err(Error::InvalidParameter(format!(
                "indicator has {} entries, grid has {}",
                cells.len(),
                geometry.cell_count()
            )));
        }
        let set = GridSet {
            geometry: geometry.into(),
            cells,
        };
        set.check_non_empty()?;
        Ok(set)
    }

    pub fn from_cells<I>(geometry: GridGeometry, cells: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = GridSet::empty(geometry);
        for (i, j) in cells {
            if i >= geometry.m() || j >= geometry.n() {
                return Err(Error::InvalidParameter(format!("cell ({i},{j}) outside grid")));
            }
            set.cells[geometry.index(i, j)] = true;
        }
        set.check_non_empty()?;
        Ok(set)
    }

    /// Every cell of the grid.
    pub fn full(geometry: GridGeometry) -> Self {
        GridSet {
            geometry: geometry.into(),
            cells: vec![true; geometry.cell_count()],
        }
    }

    pub(crate) fn empty(geometry: GridGeometry) -> Self {
        GridSet {
            geometry: geometry.into(),
            cells: vec![false; geometry.cell_count()],
        }
    }

    pub(crate) fn check_non_empty(&self) -> Result<()> {
        if self.cells.iter().any(|&c| c) {
            Ok(())
        } else {
            Err(Error::InvalidParameter("grid set has no occupied cell".into()))
        }
    }

    pub fn geometry(&self) -> GridGeometry {
        self.geometry.geometry()
    }

    pub fn indicator(&self) -> &[bool] {
        &self.cells
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.cells[j * self.geometry.m + i]
    }

    pub fn cell_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    /// Occupied cells in row-major order.
    pub fn occupied(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let m = self.geometry.m;
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &c)| c)
            .map(move |(k, _)| (k % m, k / m))
    }

    pub fn toggled(&self, i: usize, j: usize) -> Self {
        let mut next = self.clone();
        let k = j * self.geometry.m + i;
        next.cells[k] = !next.cells[k];
        next
    }

    pub fn is_subset_of(&self, other: &GridSet) -> bool {
        self.geometry == other.geometry && self.cells.iter().zip(&other.cells).all(|(&a, &b)| !a || b)
    }

    /// Number of occupied cells per column.
    pub fn column_counts(&self) -> Vec<usize> {
        let (m, n) = (self.geometry.m, self.geometry.n);
        (0..m).map(|i| (0..n).filter(|&j| self.contains(i, j)).count()).collect()
    }

    /// Number of occupied cells per row.
    pub fn row_counts(&self) -> Vec<usize> {
        let (m, n) = (self.geometry.m, self.geometry.n);
        (0..n).map(|j| (0..m).filter(|&i| self.contains(i, j)).count()).collect()
    }

    pub fn area(&self) -> f64 {
        let g = self.geometry();
        self.cell_count() as f64 * g.cell_width() * g.cell_height()
    }

    /// Maximal vertical runs `(column, first_row, last_row)`; the set is the
    /// union of the corresponding rectangles.
    pub fn column_runs(&self) -> Vec<(usize, usize, usize)> {
        let (m, n) = (self.geometry.m, self.geometry.n);
        let mut runs = Vec::new();
        for i in 0..m {
            let mut j = 0;
            while j < n {
                if self.contains(i, j) {
                    let start = j;
                    while j + 1 < n && self.contains(i, j + 1) {
                        j += 1;
                    }
                    runs.push((i, start, j));
                }
                j += 1;
            }
        }
        runs
    }

    /// The set as a list of closed rectangles (one per vertical run).
    pub fn rects(&self) -> Vec<Rect> {
        let g = self.geometry();
        self.column_runs()
            .into_iter()
            .map(|(i, lo, hi)| Rect {
                a: g.x_line(i),
                b: g.x_line(i + 1),
                c: g.y_line(lo),
                d: g.y_line(hi + 1),
            })
            .collect()
    }

    /// Exact Euclidean distance from a point to the set.
    pub fn distance_to(&self, x: f64, y: f64) -> f64 {
        distance_to_rects(&self.rects(), x, y)
    }

    /// Whether the closed rectangle lies inside the set (up to snapping).
    pub fn covers_rect(&self, r: &Rect) -> bool {
        let g = self.geometry();
        if !g.rect().contains_rect(r) {
            return false;
        }
        let (i0, i1) = overlapping_range(r.a, r.b, g.rect().a, g.cell_width(), g.m());
        let (j0, j1) = overlapping_range(r.c, r.d, g.rect().c, g.cell_height(), g.n());
        (j0..j1).all(|j| (i0..i1).all(|i| self.contains(i, j)))
    }

    /// Column index range `[first, last]` and row range of the occupied cells.
    pub fn index_bounds(&self) -> (usize, usize, usize, usize) {
        let mut b = (usize::MAX, 0, usize::MAX, 0);
        for (i, j) in self.occupied() {
            b.0 = b.0.min(i);
            b.1 = b.1.max(i);
            b.2 = b.2.min(j);
            b.3 = b.3.max(j);
        }
        b
    }

    /// Axis-parallel bounding box of the point set.
    pub fn bounding_box(&self) -> Rect {
        let g = self.geometry();
        let (i0, i1, j0, j1) = self.index_bounds();
        Rect {
            a: g.x_line(i0),
            b: g.x_line(i1 + 1),
            c: g.y_line(j0),
            d: g.y_line(j1 + 1),
        }
    }

    /// Orthogonal projections onto the x and y axes as minimal lists of
    /// disjoint closed intervals.
    pub fn projections(&self) -> (Vec<Interval>, Vec<Interval>) {
        let g = self.geometry();
        let cols: Vec<bool> = self.column_counts().iter().map(|&c| c > 0).collect();
        let rows: Vec<bool> = self.row_counts().iter().map(|&c| c > 0).collect();
        (
            support(&cols, |i| g.x_line(i)),
            support(&rows, |j| g.y_line(j)),
        )
    }

    /// `pr₁(L) × pr₂(L) = B`.
    pub fn in_level_set(&self, b: &Rect) -> bool {
        let (xs, ys) = self.projections();
        let close = |u: f64, v: f64, scale: f64| (u - v).abs() <= SNAP * scale;
        xs.len() == 1
            && ys.len() == 1
            && close(xs[0].lo, b.a, b.width())
            && close(xs[0].hi, b.b, b.width())
            && close(ys[0].lo, b.c, b.height())
            && close(ys[0].hi, b.d, b.height())
    }

    /// `pr₁(L) × pr₂(L) ⊆ B`.
    pub fn in_sublevel_set(&self, b: &Rect) -> bool {
        b.contains_rect(&self.bounding_box())
    }

    /// Every horizontal and vertical section of the closed union is an
    /// interval. Besides contiguous runs per row and column, the runs of
    /// adjacent rows (columns) must touch, because the section on the shared
    /// grid line is the union of both runs.
    pub fn is_hv_convex(&self) -> bool {
        let (m, n) = (self.geometry.m, self.geometry.n);
        let rows: Vec<_> = (0..n).map(|j| run_of((0..m).map(|i| self.contains(i, j)))).collect();
        let cols: Vec<_> = (0..m).map(|i| run_of((0..n).map(|j| self.contains(i, j)))).collect();
        runs_compatible(&rows) && runs_compatible(&cols)
    }

    /// Connectivity of the closed union: cells sharing an edge or a corner are
    /// adjacent.
    pub fn is_connected(&self) -> bool {
        let (m, n) = (self.geometry.m as isize, self.geometry.n as isize);
        let Some(start) = self.cells.iter().position(|&c| c) else {
            return false;
        };
        let mut seen = vec![false; self.cells.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut reached = 1;
        while let Some(k) = queue.pop_front() {
            let (i, j) = ((k as isize) % m, (k as isize) / m);
            for dj in -1..=1 {
                for di in -1..=1 {
                    let (x, y) = (i + di, j + dj);
                    if x < 0 || y < 0 || x >= m || y >= n {
                        continue;
                    }
                    let q = (y * m + x) as usize;
                    if self.cells[q] && !seen[q] {
                        seen[q] = true;
                        reached += 1;
                        queue.push_back(q);
                    }
                }
            }
        }
        reached == self.cell_count()
    }

    /// True when two occupied cells meet only in a corner point.
    pub fn has_thin_contact(&self) -> bool {
        let (m, n) = (self.geometry.m, self.geometry.n);
        for j in 0..n.saturating_sub(1) {
            for i in 0..m.saturating_sub(1) {
                let (p, q) = (self.contains(i, j), self.contains(i + 1, j + 1));
                let (r, s) = (self.contains(i + 1, j), self.contains(i, j + 1));
                if (p && q && !r && !s) || (r && s && !p && !q) {
                    return true;
                }
            }
        }
        false
    }

    /// Lower and upper bound functions per occupied column.
    pub fn bound_functions(&self) -> Result<ColumnProfile> {
        let g = self.geometry();
        let mut columns = Vec::new();
        for i in 0..g.m() {
            match run_of((0..g.n()).map(|j| self.contains(i, j))) {
                Run::Empty => {}
                Run::Split => return Err(Error::NonConvexColumn(i)),
                Run::Span(lo, hi) => columns.push(ColumnBound {
                    column: i,
                    lower: g.y_line(lo),
                    upper: g.y_line(hi + 1),
                }),
            }
        }
        Ok(ColumnProfile { columns })
    }
}

pub(crate) fn distance_to_rects(rects: &[Rect], x: f64, y: f64) -> f64 {
    rects
        .iter()
        .map(|r| r.distance_to(x, y))
        .fold(f64::INFINITY, f64::min)
}

/// Cell index range `[first, end)` of a uniform partition whose cells overlap
/// `[lo, hi]` with positive length.
pub(crate) fn overlapping_range(lo: f64, hi: f64, origin: f64, step: f64, count: usize) -> (usize, usize) {
    let u0 = snap((lo - origin) / step);
    let u1 = snap((hi - origin) / step);
    let first = u0.floor().max(0.0) as usize;
    let end = (u1.ceil().max(0.0) as usize).min(count);
    (first.min(end), end)
}

/// Cell index range `[first, end)` whose closed cells meet `[lo, hi]`.
pub(crate) fn touching_range(lo: f64, hi: f64, origin: f64, step: f64, count: usize) -> (usize, usize) {
    let u0 = snap((lo - origin) / step);
    let u1 = snap((hi - origin) / step);
    let first = (u0.ceil() - 1.0).max(0.0) as usize;
    let end = ((u1.floor() + 1.0).max(0.0) as usize).min(count);
    (first.min(end), end)
}

fn snap(u: f64) -> f64 {
    let r = u.round();
    if (u - r).abs() <= SNAP * r.abs().max(1.0) {
        r
    } else {
        u
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Run {
    Empty,
    Span(usize, usize),
    Split,
}

fn run_of<I: Iterator<Item = bool>>(cells: I) -> Run {
    let mut run = Run::Empty;
    let mut closed = false;
    for (k, c) in cells.enumerate() {
        match (run, c) {
            (Run::Empty, true) => run = Run::Span(k, k),
            (Run::Span(lo, hi), true) if !closed && hi + 1 == k => run = Run::Span(lo, k),
            (Run::Span(..), true) => return Run::Split,
            (Run::Span(..), false) => closed = true,
            _ => {}
        }
    }
    run
}

fn runs_compatible(runs: &[Run]) -> bool {
    if runs.contains(&Run::Split) {
        return false;
    }
    runs.windows(2).all(|w| match (w[0], w[1]) {
        // closed intervals [lo, hi + 1] must meet
        (Run::Span(l0, h0), Run::Span(l1, h1)) => l0 <= h1 + 1 && l1 <= h0 + 1,
        _ => true,
    })
}

fn support(occupied: &[bool], line: impl Fn(usize) -> f64) -> Vec<Interval> {
    let mut out = Vec::new();
    let mut k = 0;
    while k < occupied.len() {
        if occupied[k] {
            let start = k;
            while k + 1 < occupied.len() && occupied[k + 1] {
                k += 1;
            }
            out.push(Interval {
                lo: line(start),
                hi: line(k + 1),
            });
        }
        k += 1;
    }
    out
}
