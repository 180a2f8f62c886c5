//! Generalized conic functions of hv-convex planar sets on axis-aligned grids.
//!
//! A focal set `K` is a finite union of closed grid cells. Its conic function
//!
//! ```text
//! f_K(x, y) = ∫_K |x - α| + |y - β| dα dβ
//! ```
//!
//! separates into two convex piecewise-quadratic terms driven by the
//! coordinate X-rays of `K`. The crate provides
//!
//! - [`grid_geometry`]: grid sets, hv-convexity and connectedness predicates,
//!   Minkowski combinations, rasterized parallel bodies and minimal coverings;
//! - [`metrics`]: point distances, certified Hausdorff brackets and tube areas
//!   of polygonal chains;
//! - [`xray_conic`]: X-ray profiles and exact conic evaluation, gradients and
//!   norms of differences;
//! - [`theorem_verify`]: executable checkers for the concavity, dilation,
//!   stability and convergence bounds;
//! - [`reconstruct`]: recovery of a grid set from a target conic function.
//!
//! Batch-style work runs on rayon when the `parallel` feature is enabled (the
//! default); see [`parallel::Execution`].

pub mod error;
pub mod grid_geometry;
pub mod metrics;
pub mod parallel;
pub mod reconstruct;
pub mod theorem_verify;
pub mod xray_conic;

pub use error::{Error, Result};
pub use grid_geometry::{Fraction, GridGeometry, GridSet, Rect};
pub use metrics::{DistanceBracket, Polyline};
pub use parallel::Execution;
pub use xray_conic::{ConicEvaluator, XRayProfile};
