//! Hilbert distance in convex regions given by a membership test.

use nalgebra::{DMatrix, DVector};

use super::Realization;
use crate::error::{Error, Result};

/// Bisection steps used to locate a boundary point.
const BISECTION_STEPS: usize = 200;
/// Doubling steps before a region is declared unbounded.
const MAX_DOUBLINGS: usize = 64;

/// A convex region known through its membership test.
pub trait ConvexRegion {
    /// Whether `p` belongs to the region.
    fn contains(&self, p: &DVector<f64>) -> bool;
}

/// Open interval `(lo, hi)` of the real line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    /// Lower end.
    pub lo: f64,
    /// Upper end.
    pub hi: f64,
}

impl ConvexRegion for Interval {
    fn contains(&self, p: &DVector<f64>) -> bool {
        p.len() == 1 && p[0] > self.lo && p[0] < self.hi
    }
}

/// Open Euclidean ball, whose Hilbert metric is the Klein model.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    /// Centre.
    pub center: DVector<f64>,
    /// Radius.
    pub radius: f64,
}

impl ConvexRegion for Ball {
    fn contains(&self, p: &DVector<f64>) -> bool {
        (p - &self.center).norm() < self.radius
    }
}

/// Interior of a realized polytope on the affine chart `φ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartPolytope {
    forms: DMatrix<f64>,
}

impl ChartPolytope {
    /// Region of a realization; points are vectors of `ℝ^{d+1}` with `φ = 1`.
    pub fn new(r: &Realization) -> Self {
        Self { forms: r.forms().clone() }
    }
}

impl ConvexRegion for ChartPolytope {
    fn contains(&self, p: &DVector<f64>) -> bool {
        p.len() == self.forms.ncols() && (&self.forms * p).iter().all(|&x| x < 0.0)
    }
}

/// Largest `t` with `x + t·u` in the region, assuming `x + t0·u` is inside.
fn boundary_param(region: &dyn ConvexRegion, x: &DVector<f64>, u: &DVector<f64>, t0: f64) -> Result<f64> {
    let mut inside = t0;
    let mut outside = if t0 > 0.0 { 2.0 * t0 } else { 1.0 };
    let mut steps = 0;
    while region.contains(&(x + u * outside)) {
        inside = outside;
        outside *= 2.0;
        steps += 1;
        if steps > MAX_DOUBLINGS {
            return Err(Error::Numerical("the line leaves no bounded chord: region not properly convex".into()));
        }
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (inside + outside);
        if mid == inside || mid == outside {
            break;
        }
        if region.contains(&(x + u * mid)) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok(0.5 * (inside + outside))
}

/// Hilbert distance `½·log` of the cross-ratio of `p, x, y, q`, where `p` and
/// `q` are the boundary points of the chord through `x` and `y`.
pub fn hilbert_distance(region: &dyn ConvexRegion, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
    if !region.contains(x) || !region.contains(y) {
        return Err(Error::Precondition("both points must be interior".into()));
    }
    let u = y - x;
    if u.norm() <= f64::EPSILON * x.norm().max(1.0) {
        return Ok(0.0);
    }
    let t_plus = boundary_param(region, x, &u, 1.0)?;
    let t_minus = -boundary_param(region, x, &(-&u), 0.0)?;
    if t_plus <= 1.0 || t_minus >= 0.0 {
        return Err(Error::Numerical("boundary location failed".into()));
    }
    Ok(0.5 * (t_plus * (1.0 - t_minus) / ((t_plus - 1.0) * (-t_minus))).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    #[test]
    fn interval_cross_ratio() {
        let i = Interval { lo: -1.0, hi: 1.0 };
        let d = hilbert_distance(&i, &v(&[0.0]), &v(&[0.5])).unwrap();
        assert!((d - 0.5 * 3f64.ln()).abs() < 1e-12);
        assert_eq!(hilbert_distance(&i, &v(&[0.3]), &v(&[0.3])).unwrap(), 0.0);
        assert!(hilbert_distance(&i, &v(&[0.0]), &v(&[2.0])).is_err());
    }

    #[test]
    fn ball_matches_klein_model() {
        let b = Ball { center: v(&[0.0, 0.0]), radius: 1.0 };
        let r: f64 = 0.6;
        let d = hilbert_distance(&b, &v(&[0.0, 0.0]), &v(&[r, 0.0])).unwrap();
        assert!((d - r.atanh()).abs() < 1e-10);
    }

    #[test]
    fn unbounded_region_is_an_error() {
        let i = Interval { lo: -1.0, hi: f64::INFINITY };
        assert!(hilbert_distance(&i, &v(&[0.0]), &v(&[0.5])).is_err());
    }

    proptest! {
        #[test]
        fn symmetric_on_random_pairs(a in -0.9f64..0.9, b in -0.9f64..0.9, c in -0.6f64..0.6, e in -0.6f64..0.6) {
            let ball = Ball { center: v(&[0.0, 0.0]), radius: 1.0 };
            let x = v(&[a, c]);
            let y = v(&[b * 0.7, e]);
            prop_assume!(ball.contains(&x) && ball.contains(&y));
            let d1 = hilbert_distance(&ball, &x, &y).unwrap();
            let d2 = hilbert_distance(&ball, &y, &x).unwrap();
            prop_assert!(d1 >= 0.0);
            prop_assert!((d1 - d2).abs() < 1e-8 * (1.0 + d1));
        }
    }
}
