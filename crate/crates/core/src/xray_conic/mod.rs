//! Coordinate X-rays and the conic function they determine.
//!
//! For a focal set `K` the vertical-section X-ray `Y_K(x)` is the length of
//! `K ∩ {x} × ℝ` and the horizontal-section X-ray `X_K(y)` the length of
//! `K ∩ ℝ × {y}`. The conic function splits as
//!
//! ```text
//! f_K(x, y) = ∫ |x − α| Y_K(α) dα + ∫ |y − β| X_K(β) dβ = u(x) + v(y)
//! ```
//!
//! and `u'' = 2 Y_K`, `v'' = 2 X_K` away from the breakpoints.

mod evaluator;
mod export;
mod norms;

pub use evaluator::{conic_of, ConicEvaluator};
pub use export::{read_profile_csv, sample_field, write_field_csv, write_field_pgm, write_profile_csv};
pub use norms::{l1_norm_diff, l1_norm_diff_with, sup_norm_diff, sup_norm_diff_witness, xrays_equal_ae};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid_geometry::GridSet;

/// Which sections a profile measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// `Y(x)`: lengths of vertical sections, indexed by `x`.
    Vertical,
    /// `X(y)`: lengths of horizontal sections, indexed by `y`.
    Horizontal,
}

/// Piecewise-constant, non-negative section-length function with prefix
/// integrals at the breakpoints.
#[derive(Debug, Clone)]
pub struct XRayProfile {
    axis: Axis,
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    prefix_mass: Vec<f64>,
    prefix_moment: Vec<f64>,
}

impl PartialEq for XRayProfile {
    fn eq(&self, other: &Self) -> bool {
        self.axis == other.axis && self.breakpoints == other.breakpoints && self.values == other.values
    }
}

impl XRayProfile {
    /// `values[k]` is the profile on `[breakpoints[k], breakpoints[k+1])`.
    pub fn new(axis: Axis, breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 || values.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidParameter(format!(
                "{} breakpoints need {} values, got {}",
                breakpoints.len(),
                breakpoints.len().saturating_sub(1),
                values.len()
            )));
        }
        if breakpoints.iter().any(|t| !t.is_finite()) || breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("breakpoints must be finite and increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidParameter("profile values must be finite and non-negative".into()));
        }
        let mut prefix_mass = Vec::with_capacity(breakpoints.len());
        let mut prefix_moment = Vec::with_capacity(breakpoints.len());
        let (mut mass, mut moment) = (0.0, 0.0);
        prefix_mass.push(0.0);
        prefix_moment.push(0.0);
        for (k, v) in values.iter().enumerate() {
            let (t0, t1) = (breakpoints[k], breakpoints[k + 1]);
            mass += v * (t1 - t0);
            moment += v * (t1 - t0) * 0.5 * (t0 + t1);
            prefix_mass.push(mass);
            prefix_moment.push(moment);
        }
        Ok(XRayProfile {
            axis,
            breakpoints,
            values,
            prefix_mass,
            prefix_moment,
        })
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `M_k = ∫_{−∞}^{t_k} v`.
    pub fn prefix_mass(&self) -> &[f64] {
        &self.prefix_mass
    }

    /// `S_k = ∫_{−∞}^{t_k} s·v(s) ds`.
    pub fn prefix_moment(&self) -> &[f64] {
        &self.prefix_moment
    }

    pub fn total_mass(&self) -> f64 {
        self.prefix_mass[self.prefix_mass.len() - 1]
    }

    /// Upper semicontinuous value: at a breakpoint, the larger adjacent value.
    pub fn value_at(&self, t: f64) -> f64 {
        let bp = &self.breakpoints;
        if t < bp[0] || t > bp[bp.len() - 1] {
            return 0.0;
        }
        match bp.binary_search_by(|b| b.total_cmp(&t)) {
            Ok(k) => {
                let left = if k > 0 { self.values[k - 1] } else { 0.0 };
                let right = self.values.get(k).copied().unwrap_or(0.0);
                left.max(right)
            }
            Err(k) => self.values[k - 1],
        }
    }

    /// `∫_{−∞}^{t} v`.
    pub fn mass_below(&self, t: f64) -> f64 {
        let bp = &self.breakpoints;
        if t <= bp[0] {
            return 0.0;
        }
        if t >= bp[bp.len() - 1] {
            return self.total_mass();
        }
        let k = bp.partition_point(|b| *b <= t) - 1;
        self.prefix_mass[k] + self.values[k] * (t - bp[k])
    }

    /// Same breakpoints with every value multiplied by `factor ≥ 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        XRayProfile::new(
            self.axis,
            self.breakpoints.clone(),
            self.values.iter().map(|v| v * factor).collect(),
        )
    }
}

/// `Y_L`: column counts times cell height, breakpoints at the vertical grid
/// lines.
pub fn xray_v(l: &GridSet) -> XRayProfile {
    let g = l.geometry();
    let h = g.cell_height();
    let breakpoints = (0..=g.m()).map(|i| g.x_line(i)).collect();
    let values = l.column_counts().into_iter().map(|c| c as f64 * h).collect();
    XRayProfile::new(Axis::Vertical, breakpoints, values).expect("grid lines are increasing")
}

/// `X_L`: row counts times cell width, breakpoints at the horizontal grid
/// lines.
pub fn xray_h(l: &GridSet) -> XRayProfile {
    let g = l.geometry();
    let w = g.cell_width();
    let breakpoints = (0..=g.n()).map(|j| g.y_line(j)).collect();
    let values = l.row_counts().into_iter().map(|c| c as f64 * w).collect();
    XRayProfile::new(Axis::Horizontal, breakpoints, values).expect("grid lines are increasing")
}
