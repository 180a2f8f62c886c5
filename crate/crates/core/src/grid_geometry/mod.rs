//! Compact planar sets represented as unions of closed grid cells.
//!
//! Cell `(i, j)` of an `m × n` grid over `[a,b] × [c,d]` is the closed
//! rectangle `[x_i, x_{i+1}] × [y_j, y_{j+1}]`; `i` counts columns left to
//! right and `j` counts rows bottom to top. A [`GridSet`] is the closed union
//! of its occupied cells, so neighbouring cells share their boundary segments
//! and diagonal neighbours share a corner point.

mod format;
mod ops;
mod sample;
mod set;

pub use format::{parse_hvset, read_hvset, to_hvset_string, write_hvset};
pub use ops::{combine, dilate, dilate_with, min_cover, min_cover_closed, Dilation};
pub use sample::{enumerate_hv_connected, sample_hv_convex, ENUMERATION_LIMIT};
pub use set::{ColumnBound, ColumnProfile, GridSet, Interval};
pub(crate) use set::distance_to_rects;

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Relative tolerance used when snapping coordinates onto grid lines.
pub(crate) const SNAP: f64 = 1e-9;

/// Axis-aligned rectangle `[a,b] × [c,d]` with `a < b` and `c < d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Rect {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite() && d.is_finite()) {
            return Err(Error::InvalidParameter("box coordinates must be finite".into()));
        }
        if !(a < b && c < d) {
            return Err(Error::InvalidParameter(format!(
                "degenerate box [{a},{b}]x[{c},{d}]"
            )));
        }
        Ok(Rect { a, b, c, d })
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn height(&self) -> f64 {
        self.d - self.c
    }

    pub fn perimeter(&self) -> f64 {
        2.0 * self.width() + 2.0 * self.height()
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    /// Euclidean distance from `(x, y)` to the closed rectangle.
    #[inline]
    pub fn distance_to(&self, x: f64, y: f64) -> f64 {
        let dx = (self.a - x).max(0.0).max(x - self.b);
        let dy = (self.c - y).max(0.0).max(y - self.d);
        dx.hypot(dy)
    }

    /// Containment up to a relative snapping tolerance.
    pub fn contains_rect(&self, other: &Rect) -> bool {
        let tx = SNAP * self.width();
        let ty = SNAP * self.height();
        other.a >= self.a - tx && other.b <= self.b + tx && other.c >= self.c - ty && other.d <= self.d + ty
    }
}

/// `lo + (hi - lo) * num / den` with the fraction reduced first, so equal
/// rationals always produce the same float.
pub(crate) fn lerp_frac(lo: f64, hi: f64, num: usize, den: usize) -> f64 {
    if num == 0 {
        return lo;
    }
    if num == den {
        return hi;
    }
    let g = gcd(num, den);
    lo + (hi - lo) * ((num / g) as f64 / (den / g) as f64)
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Uniform `m × n` partition of a reference box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridGeometry {
    rect: Rect,
    m: usize,
    n: usize,
}

impl GridGeometry {
    pub fn new(rect: Rect, m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidParameter(format!("grid dims {m}x{n} must be positive")));
        }
        Ok(GridGeometry { rect, m, n })
    }

    /// Unit cells on `[0,m] × [0,n]`.
    pub fn unit(m: usize, n: usize) -> Result<Self> {
        let rect = Rect::new(0.0, m.max(1) as f64, 0.0, n.max(1) as f64)?;
        Self::new(rect, m, n)
    }

    pub fn rect(&self) -> Rect {
        self.rect
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cell_count(&self) -> usize {
        self.m * self.n
    }

    pub fn cell_width(&self) -> f64 {
        self.rect.width() / self.m as f64
    }

    pub fn cell_height(&self) -> f64 {
        self.rect.height() / self.n as f64
    }

    pub fn cell_diameter(&self) -> f64 {
        self.cell_width().hypot(self.cell_height())
    }

    /// Vertical grid line `x_i`, `0 ≤ i ≤ m`.
    pub fn x_line(&self, i: usize) -> f64 {
        lerp_frac(self.rect.a, self.rect.b, i, self.m)
    }

    /// Horizontal grid line `y_j`, `0 ≤ j ≤ n`.
    pub fn y_line(&self, j: usize) -> f64 {
        lerp_frac(self.rect.c, self.rect.d, j, self.n)
    }

    pub fn cell_rect(&self, i: usize, j: usize) -> Rect {
        Rect {
            a: self.x_line(i),
            b: self.x_line(i + 1),
            c: self.y_line(j),
            d: self.y_line(j + 1),
        }
    }

    /// Same box, each cell split into `q × q` sub-cells.
    pub fn refine(&self, q: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParameter("refinement factor must be positive".into()));
        }
        Self::new(self.rect, self.m * q, self.n * q)
    }

    #[inline]
    pub(crate) fn index(&self, i: usize, j: usize) -> usize {
        j * self.m + i
    }
}

/// Rational weight `num / den` in `[0, 1]`, used for exact Minkowski
/// combinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    num: u32,
    den: u32,
}

impl Fraction {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if den == 0 || num > den {
            return Err(Error::InvalidParameter(format!("weight {num}/{den} is not in [0,1]")));
        }
        Ok(Fraction { num, den })
    }

    pub fn num(&self) -> u32 {
        self.num
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl std::fmt::Display for Fraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl std::str::FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse weight '{s}' (expected p/q)"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let num = p.parse().map_err(|_| bad())?;
        let den = q.parse().map_err(|_| bad())?;
        Fraction::new(num, den)
    }
}
