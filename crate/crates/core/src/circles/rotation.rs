//! Winding bookkeeping and rotation-number estimation.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::linalg::Point;
use crate::scalar::Scalar;

/// Iterates of one point with the cumulative unwrapped angle about the centre.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitTrace<T> {
    pub points: Vec<Point<T>>,
    /// `winding[k]` is the angle swept from `points[0]` to `points[k]`.
    pub winding: Vec<T>,
    pub centre: Point<T>,
}

impl<T: Scalar> OrbitTrace<T> {
    pub fn start(p: Point<T>, centre: Point<T>) -> Self {
        OrbitTrace {
            points: vec![p],
            winding: vec![T::zero()],
            centre,
        }
    }

    pub fn push(&mut self, p: Point<T>) {
        let prev = *self.points.last().expect("trace is never empty");
        let a = prev - self.centre;
        let b = p - self.centre;
        let step = if a.norm() == T::zero() || b.norm() == T::zero() {
            T::zero()
        } else {
            a.cross(b).atan2(a.dot(b))
        };
        let total = *self.winding.last().unwrap() + step;
        self.points.push(p);
        self.winding.push(total);
    }

    /// Number of steps.
    pub fn n(&self) -> usize {
        self.points.len() - 1
    }

    pub fn total_angle(&self) -> T {
        *self.winding.last().unwrap()
    }

    pub fn increments(&self) -> impl Iterator<Item = T> + '_ {
        self.winding.windows(2).map(|w| w[1] - w[0])
    }

    /// Smallest and largest distance from the centre over the trace.
    pub fn radius_range(&self) -> (T, T) {
        self.points
            .iter()
            .fold((T::infinity(), T::zero()), |(lo, hi), p| {
                let r = p.dist(self.centre);
                (lo.min(r), hi.max(r))
            })
    }

    fn closes(&self, tol: T) -> bool {
        let first = self.points[0];
        let last = *self.points.last().unwrap();
        self.n() > 0 && last.dist(first) <= tol * (T::one() + first.norm())
    }

    /// Exact `p/q` when the trace returns to its start: `q` steps, `p` turns.
    pub fn periodic_rotation(&self, tol: T) -> Option<Ratio<u64>> {
        if !self.closes(tol) {
            return None;
        }
        let turns = (self.total_angle() / (T::lit(2.0) * T::PI())).round();
        let p = turns.to_f64_lossy();
        if !(p >= 0.0) {
            return None;
        }
        Some(Ratio::new(p as u64, self.n() as u64))
    }
}

fn on_square_boundary<T: Scalar>(p: Point<T>) -> bool {
    let (zero, one) = (T::zero(), T::one());
    p.x <= zero || p.y <= zero || p.x >= one || p.y >= one
}

/// Rotation number estimated as swept angle over `2πn`.
///
/// Orbits on `∂□` are fixed and rotate by `0`. A trace that returns to its
/// start yields exactly `p/q`.
pub fn rotation_number<T: Scalar>(trace: &OrbitTrace<T>) -> Result<T> {
    let n = trace.n();
    if n == 0 {
        return Err(Error::UnusableTrace("trace has no steps".into()));
    }
    let on_boundary = trace
        .points
        .iter()
        .filter(|p| on_square_boundary(**p))
        .count();
    if on_boundary == trace.points.len() {
        return Ok(T::zero());
    }
    if on_boundary > 0 {
        return Err(Error::UnusableTrace(
            "trace touches the boundary of the square".into(),
        ));
    }
    if trace
        .points
        .iter()
        .any(|p| p.dist(trace.centre) == T::zero())
    {
        return Err(Error::UnusableTrace(
            "trace passes through the centre".into(),
        ));
    }
    if let Some(r) = trace.periodic_rotation(T::cert_eps()) {
        return Ok(T::from_usize(*r.numer() as usize) / T::from_usize(*r.denom() as usize));
    }
    Ok(trace.total_angle() / (T::lit(2.0) * T::PI() * T::from_usize(n)))
}
