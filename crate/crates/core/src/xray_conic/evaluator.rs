use super::{xray_h, xray_v, Axis, XRayProfile};
use crate::error::{Error, Result};
use crate::grid_geometry::GridSet;

/// `u(t) = ∫ |t − s| v(s) ds` for a piecewise-constant density `v`, stored as
/// one quadratic per breakpoint interval and linear tails outside.
#[derive(Debug, Clone)]
pub(crate) struct PiecewiseQuadratic {
    knots: Vec<f64>,
    /// `u(t_k)` for every knot.
    at_knots: Vec<f64>,
    /// `u'(t_k+) = 2 M_k − M`.
    slopes: Vec<f64>,
    /// Quadratic coefficient on `[t_k, t_{k+1})`, equal to the density.
    curvature: Vec<f64>,
    mass: f64,
}

impl PiecewiseQuadratic {
    fn from_profile(p: &XRayProfile) -> Self {
        let knots = p.breakpoints().to_vec();
        let m = p.prefix_mass();
        let v = p.values();
        let total = p.total_mass();
        let r = knots.len() - 1;
        // u(t_k) = L_k + R_k with L the mass-moment to the left and R to the right,
        // both accumulated outward so no large terms cancel
        let mut left = vec![0.0; r + 1];
        let mut right = vec![0.0; r + 1];
        for k in 0..r {
            let dt = knots[k + 1] - knots[k];
            left[k + 1] = left[k] + m[k] * dt + 0.5 * v[k] * dt * dt;
        }
        for k in (0..r).rev() {
            let dt = knots[k + 1] - knots[k];
            right[k] = right[k + 1] + (total - m[k + 1]) * dt + 0.5 * v[k] * dt * dt;
        }
        PiecewiseQuadratic {
            at_knots: left.iter().zip(&right).map(|(l, r)| l + r).collect(),
            slopes: m.iter().map(|mk| 2.0 * mk - total).collect(),
            curvature: v.to_vec(),
            knots,
            mass: total,
        }
    }

    /// Interval index `k` with `t_k ≤ t < t_{k+1}`; `None` outside `[t_0, t_r)`.
    fn locate(&self, t: f64) -> Option<usize> {
        let k = self.knots.partition_point(|b| *b <= t);
        (k >= 1 && k < self.knots.len()).then(|| k - 1)
    }

    pub(crate) fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub(crate) fn eval(&self, t: f64) -> f64 {
        let r = self.knots.len() - 1;
        if t < self.knots[0] {
            return self.at_knots[0] + self.mass * (self.knots[0] - t);
        }
        match self.locate(t) {
            Some(k) => {
                let s = t - self.knots[k];
                self.at_knots[k] + s * (self.slopes[k] + s * self.curvature[k])
            }
            None => self.at_knots[r] + self.mass * (t - self.knots[r]),
        }
    }

    /// Right derivative.
    pub(crate) fn slope(&self, t: f64) -> f64 {
        if t < self.knots[0] {
            return -self.mass;
        }
        match self.locate(t) {
            Some(k) => self.slopes[k] + 2.0 * self.curvature[k] * (t - self.knots[k]),
            None => self.mass,
        }
    }

    /// Second-derivative coefficient of the piece containing `t` from the right.
    pub(crate) fn curvature_at(&self, t: f64) -> f64 {
        self.locate(t).map_or(0.0, |k| self.curvature[k])
    }
}

/// Exact evaluator of `f(x, y) = u(x) + v(y)` built from a pair of X-rays.
///
/// Equality compares the underlying profiles, so two sets with the same
/// X-rays give equal evaluators.
#[derive(Debug, Clone)]
pub struct ConicEvaluator {
    yprofile: XRayProfile,
    xprofile: XRayProfile,
    u: PiecewiseQuadratic,
    v: PiecewiseQuadratic,
}

impl PartialEq for ConicEvaluator {
    fn eq(&self, other: &Self) -> bool {
        self.yprofile == other.yprofile && self.xprofile == other.xprofile
    }
}

/// Conic function of a grid set.
pub fn conic_of(l: &GridSet) -> ConicEvaluator {
    ConicEvaluator::from_profiles(xray_v(l), xray_h(l)).expect("grid sets have positive, matching mass")
}

impl ConicEvaluator {
    /// `yprofile` is the vertical-section X-ray `Y(x)`, `xprofile` the
    /// horizontal-section X-ray `X(y)`; both must carry the same positive mass.
    pub fn from_profiles(yprofile: XRayProfile, xprofile: XRayProfile) -> Result<Self> {
        if yprofile.axis() != Axis::Vertical || xprofile.axis() != Axis::Horizontal {
            return Err(Error::InvalidParameter("profile axes are swapped".into()));
        }
        let (my, mx) = (yprofile.total_mass(), xprofile.total_mass());
        if my <= 0.0 || mx <= 0.0 {
            return Err(Error::ZeroMass);
        }
        if (my - mx).abs() > 1e-9 * my.max(mx) {
            return Err(Error::InvalidParameter(format!("X-ray masses differ: {my} vs {mx}")));
        }
        Ok(ConicEvaluator {
            u: PiecewiseQuadratic::from_profile(&yprofile),
            v: PiecewiseQuadratic::from_profile(&xprofile),
            yprofile,
            xprofile,
        })
    }

    pub fn yprofile(&self) -> &XRayProfile {
        &self.yprofile
    }

    pub fn xprofile(&self) -> &XRayProfile {
        &self.xprofile
    }

    /// Area of the focal set.
    pub fn mass(&self) -> f64 {
        self.yprofile.total_mass()
    }

    pub(crate) fn u(&self) -> &PiecewiseQuadratic {
        &self.u
    }

    pub(crate) fn v(&self) -> &PiecewiseQuadratic {
        &self.v
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.u.eval(x) + self.v.eval(y)
    }

    /// `(2M(x) − M, 2N(y) − N)`, the mass to the left minus the mass to the
    /// right of each coordinate. At breakpoints this is the right derivative.
    pub fn grad(&self, x: f64, y: f64) -> (f64, f64) {
        (self.u.slope(x), self.v.slope(y))
    }

    /// Both X-rays read back from the stored second-derivative coefficients.
    pub fn xray_from_conic(&self) -> (XRayProfile, XRayProfile) {
        let back = |q: &PiecewiseQuadratic, axis| {
            XRayProfile::new(axis, q.knots.clone(), q.curvature.clone()).expect("stored profile is valid")
        };
        (back(&self.u, Axis::Vertical), back(&self.v, Axis::Horizontal))
    }

    /// `f / mass`, itself the conic function of a unit-mass density.
    pub fn weighted(&self) -> Result<Self> {
        let mass = self.mass();
        if mass.is_nan() || mass <= 0.0 {
            return Err(Error::ZeroMass);
        }
        ConicEvaluator::from_profiles(self.yprofile.scaled(1.0 / mass)?, self.xprofile.scaled(1.0 / mass)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid_geometry::GridGeometry;

    fn unit_cell() -> ConicEvaluator {
        conic_of(&GridSet::full(GridGeometry::unit(1, 1).unwrap()))
    }

    fn domino() -> ConicEvaluator {
        conic_of(&GridSet::full(GridGeometry::unit(2, 1).unwrap()))
    }

    #[test]
    fn unit_cell_values() {
        let e = unit_cell();
        assert_eq!(e.eval(0.5, 0.5), 0.5);
        assert_eq!(e.eval(2.0, 0.5), 1.75);
        assert_eq!(e.mass(), 1.0);
    }

    #[test]
    fn domino_value() {
        assert_eq!(domino().eval(1.0, 0.5), 1.5);
    }

    #[test]
    fn gradients() {
        assert_eq!(unit_cell().grad(2.0, 0.5), (1.0, 0.0));
        assert_eq!(unit_cell().grad(0.5, 0.5).0, 0.0);
        assert_eq!(unit_cell().grad(-3.0, 9.0), (-1.0, 1.0));
        assert_eq!(domino().grad(1.0, 0.5).0, 0.0);
    }

    #[test]
    fn round_trip_of_profiles() {
        let g = GridGeometry::unit(3, 3).unwrap();
        let l = GridSet::from_cells(g, [(0, 0), (1, 0), (1, 1), (2, 1), (1, 2)]).unwrap();
        let e = conic_of(&l);
        let (y, x) = e.xray_from_conic();
        assert_eq!(y, xray_v(&l));
        assert_eq!(x, xray_h(&l));
        assert_eq!(y.prefix_mass(), xray_v(&l).prefix_mass());
    }

    #[test]
    fn weighting() {
        let e = unit_cell();
        assert_eq!(e.weighted().unwrap().eval(0.5, 0.5), 0.5);
        let d = domino();
        let w = d.weighted().unwrap();
        assert_eq!(w.mass(), 1.0);
        assert_eq!(w.weighted().unwrap(), w);
        let doubled = ConicEvaluator::from_profiles(d.yprofile().scaled(2.0).unwrap(), d.xprofile().scaled(2.0).unwrap())
            .unwrap();
        assert_eq!(doubled.weighted().unwrap(), w);
    }

    #[test]
    fn rejects_inconsistent_profiles() {
        let y = XRayProfile::new(Axis::Vertical, vec![0.0, 1.0], vec![1.0]).unwrap();
        let x = XRayProfile::new(Axis::Horizontal, vec![0.0, 1.0], vec![2.0]).unwrap();
        assert!(ConicEvaluator::from_profiles(y.clone(), x).is_err());
        let zero_y = XRayProfile::new(Axis::Vertical, vec![0.0, 1.0], vec![0.0]).unwrap();
        let zero_x = XRayProfile::new(Axis::Horizontal, vec![0.0, 1.0], vec![0.0]).unwrap();
        assert!(matches!(ConicEvaluator::from_profiles(zero_y, zero_x), Err(Error::ZeroMass)));
        let swapped = XRayProfile::new(Axis::Horizontal, vec![0.0, 1.0], vec![1.0]).unwrap();
        assert!(ConicEvaluator::from_profiles(swapped, y).is_err());
    }
}
