//! Closed polygons encircling the centre and their invariance certificate.

use num_rational::Ratio;

use crate::geometry::rot;
use crate::linalg::{dist_to_segment, Point};
use crate::map::MapF;
use crate::scalar::Scalar;

/// Rotation number attached to a circle: exact when known from the
/// construction, otherwise an estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Rho<T> {
    Exact(Ratio<u64>),
    Estimate(T),
}

impl<T: Scalar> Rho<T> {
    pub fn value(&self) -> T {
        match self {
            Rho::Exact(r) => {
                T::from_usize(*r.numer() as usize) / T::from_usize(*r.denom() as usize)
            }
            Rho::Estimate(v) => *v,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolyCircle<T> {
    /// Vertices in counterclockwise order about the centre; the polygon closes
    /// from the last vertex back to the first.
    pub vertices: Vec<Point<T>>,
    pub rho: Rho<T>,
    /// `(K, N)` for circles built as `Γ_K^N`.
    pub label: Option<(u32, u32)>,
}

fn centre<T: Scalar>() -> Point<T> {
    Point::new(T::lit(0.5), T::lit(0.5))
}

fn angle_of<T: Scalar>(p: Point<T>) -> T {
    let d = p - centre();
    d.y.atan2(d.x)
}

/// Counterclockwise angle from `a` to `b` in `[0, 2π)`.
fn ccw_gap<T: Scalar>(a: T, b: T) -> T {
    let two_pi = T::lit(2.0) * T::PI();
    let mut d = (b - a) % two_pi;
    if d < T::zero() {
        d = d + two_pi;
    }
    d
}

impl<T: Scalar> PolyCircle<T> {
    pub fn new(vertices: Vec<Point<T>>, rho: Rho<T>) -> Self {
        PolyCircle {
            vertices,
            rho,
            label: None,
        }
    }

    /// Regular `n`-gon of circumradius `r` about the centre, first vertex at angle `phase`.
    pub fn regular(n: usize, r: T, phase: T) -> Self {
        let two_pi = T::lit(2.0) * T::PI();
        let vertices = (0..n)
            .map(|k| {
                let a = phase + two_pi * T::from_usize(k) / T::from_usize(n);
                centre::<T>() + Point::new(a.cos(), a.sin()).scale(r)
            })
            .collect();
        PolyCircle::new(vertices, Rho::Estimate(T::nan()))
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point<T>, Point<T>)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn perimeter(&self) -> T {
        self.edges().fold(T::zero(), |acc, (a, b)| acc + a.dist(b))
    }

    /// Each ray from the centre meets the polygon once: vertex angles advance
    /// counterclockwise by less than π per edge and by exactly one turn in total.
    pub fn is_star_shaped(&self) -> bool {
        if self.vertices.len() < 3 {
            return false;
        }
        let two_pi = T::lit(2.0) * T::PI();
        let mut total = T::zero();
        for (a, b) in self.edges() {
            if a.dist(centre()) == T::zero() || b.dist(centre()) == T::zero() {
                return false;
            }
            let gap = ccw_gap(angle_of(a), angle_of(b));
            if !(gap > T::zero() && gap < T::PI()) {
                return false;
            }
            total = total + gap;
        }
        (total - two_pi).abs() < T::lit(1e-6)
    }

    /// Distance to the polygon by brute force over all edges.
    pub fn distance(&self, p: Point<T>) -> T {
        self.edges()
            .map(|(a, b)| dist_to_segment(p, a, b))
            .fold(T::infinity(), T::min)
    }

    /// Index of the edge whose angular sector about the centre contains `p`.
    pub fn sector_of(&self, p: Point<T>) -> usize {
        let a0 = angle_of(self.vertices[0]);
        let target = ccw_gap(a0, angle_of(p));
        // Cumulative vertex angles are increasing for a star-shaped polygon.
        let mut lo = 0usize;
        let mut hi = self.vertices.len();
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if ccw_gap(a0, angle_of(self.vertices[mid])) <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Distance to the polygon using the angular sector of `p` and its neighbours.
    pub fn sector_distance(&self, p: Point<T>) -> T {
        let n = self.vertices.len();
        let i = self.sector_of(p);
        [n - 1, 0, 1]
            .iter()
            .map(|&k| {
                let e = (i + k) % n;
                dist_to_segment(p, self.vertices[e], self.vertices[(e + 1) % n])
            })
            .fold(T::infinity(), T::min)
    }

    /// Point-in-polygon by the even-odd rule.
    pub fn contains(&self, p: Point<T>) -> bool {
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Largest distance from a rotated vertex to the nearest vertex.
    pub fn r_residual(&self) -> T {
        self.vertices
            .iter()
            .map(|&v| {
                let rv = rot(v);
                self.vertices
                    .iter()
                    .map(|&w| w.dist(rv))
                    .fold(T::infinity(), T::min)
            })
            .fold(T::zero(), T::max)
    }

    /// Drops vertices where the polygon does not bend (within `tol`).
    pub fn simplified(&self, tol: T) -> Vec<Point<T>> {
        let n = self.vertices.len();
        (0..n)
            .filter(|&i| {
                let prev = self.vertices[(i + n - 1) % n];
                let next = self.vertices[(i + 1) % n];
                dist_to_segment(self.vertices[i], prev, next) > tol
            })
            .map(|i| self.vertices[i])
            .collect()
    }

    /// Number of straight segments after merging collinear runs.
    pub fn segment_count(&self, tol: T) -> usize {
        self.simplified(tol).len()
    }

    /// `n` points spaced evenly by arclength, starting half a step in.
    pub fn arclength_samples(&self, n: usize) -> Vec<Point<T>> {
        let total = self.perimeter();
        let step = total / T::from_usize(n);
        let mut out = Vec::with_capacity(n);
        let mut edges = self.edges();
        let (mut a, mut b) = edges.next().expect("non-empty polygon");
        let mut start = T::zero();
        for k in 0..n {
            let s = step * (T::from_usize(k) + T::lit(0.5));
            while s > start + a.dist(b) {
                start = start + a.dist(b);
                match edges.next() {
                    Some(e) => (a, b) = e,
                    None => break,
                }
            }
            let len = a.dist(b);
            let u = if len > T::zero() {
                ((s - start) / len).min(T::one())
            } else {
                T::zero()
            };
            out.push(a.lerp(b, u));
        }
        out
    }

    /// Hausdorff distance to `∂□`, sampled with `n` points per edge and side.
    pub fn hausdorff_to_boundary(&self, n: usize) -> T {
        let (zero, one) = (T::zero(), T::one());
        let to_boundary = |p: Point<T>| p.x.min(p.y).min(one - p.x).min(one - p.y);
        let mut from_poly = zero;
        for (a, b) in self.edges() {
            for k in 0..=n {
                let p = a.lerp(b, T::from_usize(k) / T::from_usize(n));
                from_poly = from_poly.max(to_boundary(p));
            }
        }
        let corners = [
            Point::new(zero, zero),
            Point::new(one, zero),
            Point::new(one, one),
            Point::new(zero, one),
        ];
        let mut from_square = zero;
        for i in 0..4 {
            for k in 0..=n {
                let q = corners[i].lerp(corners[(i + 1) % 4], T::from_usize(k) / T::from_usize(n));
                from_square = from_square.max(self.distance(q));
            }
        }
        from_poly.max(from_square)
    }
}

/// Outcome of checking `F(Γ) = Γ` on a sampled polygon.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleReport<T> {
    pub samples: usize,
    /// Largest distance from `F(q)` to the polygon over samples `q`.
    pub max_residual: T,
    /// Images keep the counterclockwise order of the samples.
    pub order_preserved: bool,
    pub star_shaped: bool,
    /// `R(Γ) = Γ` residual on the vertex set.
    pub r_residual: T,
    pub tol: T,
}

impl<T: Scalar> CircleReport<T> {
    pub fn passed(&self) -> bool {
        self.star_shaped && self.order_preserved && self.max_residual < self.tol
    }
}

pub fn verify_invariant_circle<T: Scalar>(
    circle: &PolyCircle<T>,
    map: &MapF<T>,
    samples: usize,
    tol: T,
) -> CircleReport<T> {
    let star_shaped = circle.is_star_shaped();
    let pts = circle.arclength_samples(samples.max(3));
    let mut max_residual = T::zero();
    let mut images = Vec::with_capacity(pts.len());
    for &q in &pts {
        match map.apply(q) {
            Ok(fq) => {
                let d = if star_shaped {
                    circle.sector_distance(fq)
                } else {
                    circle.distance(fq)
                };
                max_residual = max_residual.max(d);
                images.push(fq);
            }
            Err(_) => max_residual = T::infinity(),
        }
    }
    let order_preserved = images.len() == pts.len() && {
        let two_pi = T::lit(2.0) * T::PI();
        let n = images.len();
        let mut total = T::zero();
        let mut ok = true;
        for i in 0..n {
            let gap = ccw_gap(angle_of(images[i]), angle_of(images[(i + 1) % n]));
            ok &= gap > T::zero() && gap < T::PI();
            total = total + gap;
        }
        ok && (total - two_pi).abs() < T::lit(1e-6)
    };
    CircleReport {
        samples: pts.len(),
        max_residual,
        order_preserved,
        star_shaped,
        r_residual: circle.r_residual(),
        tol,
    }
}
