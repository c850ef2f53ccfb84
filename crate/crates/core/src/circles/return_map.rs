//! First return of the map to the quadrangle `X, Y, F(Y), F(X)` spanned by
//! consecutive cancellation-orbit points of `Γ_K^N` and `Γ_K^{N+1}` on `E₁P₁`.

use crate::error::{Error, Result};
use crate::geometry::rot;
use crate::linalg::{signed_area, Point};
use crate::map::MapF;
use crate::scalar::Scalar;

use super::special::y_point;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReturnCell<T> {
    pub k: u32,
    pub n: u32,
    /// `X, Y, F(Y), F(X)`.
    pub quad: [Point<T>; 4],
    /// `Δ(X, F(Y), F(X))`, carried by `F^{K+N}` onto `R(Δ(X, Y, F(X)))`.
    pub d1: [Point<T>; 3],
    /// `Δ(X, Y, F(Y))`, carried by `F^{K+N+1}` onto `R(Δ(Y, F(Y), F(X)))`.
    pub d2: [Point<T>; 3],
}

impl<T: Scalar> ReturnCell<T> {
    pub fn new(map: &MapF<T>, k: u32, n: u32) -> Result<Self> {
        let x = y_point(&map.params, n);
        let y = y_point(&map.params, n + 1);
        let fx = map.apply(x)?;
        let fy = map.apply(y)?;
        Ok(ReturnCell {
            k,
            n,
            quad: [x, y, fy, fx],
            d1: [x, fy, fx],
            d2: [x, y, fy],
        })
    }

    /// Membership with slack `eps`, for either orientation of the quadrangle.
    pub fn contains(&self, p: Point<T>, eps: T) -> bool {
        let sign = if signed_area(self.quad[0], self.quad[1], self.quad[2]) >= T::zero() {
            T::one()
        } else {
            -T::one()
        };
        (0..4).all(|i| {
            let a = self.quad[i];
            let b = self.quad[(i + 1) % 4];
            let e = b - a;
            sign * e.cross(p - a) / e.norm() >= -eps
        })
    }

    fn rotated_contains(&self, p: Point<T>, eps: T) -> bool {
        let rotated = ReturnCell {
            quad: self.quad.map(rot),
            ..*self
        };
        rotated.contains(p, eps)
    }

    /// Quasi-random interior points, alternating between `D₁` and `D₂`.
    pub fn samples(&self, count: usize) -> Vec<(Point<T>, bool)> {
        let g = T::lit(0.754_877_666_246_692_8);
        let h = T::lit(0.569_840_290_998_053_3);
        let margin = T::lit(0.02);
        (0..count)
            .map(|i| {
                let k = T::from_usize(i + 1);
                let mut u = (k * g).fract();
                let mut v = (k * h).fract();
                if u + v > T::one() {
                    u = T::one() - u;
                    v = T::one() - v;
                }
                let shrink = T::one() - T::lit(3.0) * margin;
                let (u, v) = (margin + u * shrink, margin + v * shrink);
                let in_d1 = i % 2 == 0;
                let tri = if in_d1 { self.d1 } else { self.d2 };
                (
                    tri[0] + (tri[1] - tri[0]).scale(u) + (tri[2] - tri[0]).scale(v),
                    in_d1,
                )
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReturnReport<T> {
    pub samples: usize,
    /// Largest `|y' − y|` at first return.
    pub max_y_drift: T,
    pub return_times: Vec<usize>,
    /// Largest vertex mismatch of the two affine triangle maps.
    pub d1_vertex_residual: T,
    pub d2_vertex_residual: T,
    /// Every `D₁` sample reaches `R(cell)` after `K+N` steps, every `D₂`
    /// sample after `K+N+1`.
    pub quarter_steps_ok: bool,
    pub tol: T,
}

impl<T: Scalar> ReturnReport<T> {
    pub fn passed(&self) -> bool {
        self.max_y_drift < self.tol
            && self.d1_vertex_residual < self.tol
            && self.d2_vertex_residual < self.tol
            && self.quarter_steps_ok
    }
}

pub fn return_map_check<T: Scalar>(
    cell: &ReturnCell<T>,
    map: &MapF<T>,
    samples: usize,
    tol: T,
) -> Result<ReturnReport<T>> {
    let kn = (cell.k + cell.n) as usize;
    let [x, y, fy, fx] = cell.quad;
    let d1_pairs = [(x, rot(x)), (fy, rot(y)), (fx, rot(fx))];
    let d2_pairs = [(x, rot(fx)), (y, rot(y)), (fy, rot(fy))];
    let mut d1_res = T::zero();
    for (a, b) in d1_pairs {
        d1_res = d1_res.max(map.iterate(a, kn)?.dist(b));
    }
    let mut d2_res = T::zero();
    for (a, b) in d2_pairs {
        d2_res = d2_res.max(map.iterate(a, kn + 1)?.dist(b));
    }

    let bound = 8 * (kn + 2);
    let eps = T::lit(1e-12);
    let mut max_y_drift = T::zero();
    let mut return_times = Vec::with_capacity(samples);
    let mut quarter_steps_ok = true;
    for (p, in_d1) in cell.samples(samples) {
        let quarter = if in_d1 { kn } else { kn + 1 };
        quarter_steps_ok &= cell.rotated_contains(map.iterate(p, quarter)?, eps);
        let mut q = p;
        let mut found = None;
        for step in 1..=bound {
            q = map.apply(q)?;
            if cell.contains(q, eps) {
                found = Some(step);
                break;
            }
        }
        let step = found.ok_or_else(|| {
            Error::Search(format!(
                "no return to the cell within {bound} steps from ({}, {})",
                p.x, p.y
            ))
        })?;
        max_y_drift = max_y_drift.max((q.y - p.y).abs());
        return_times.push(step);
    }
    Ok(ReturnReport {
        samples,
        max_y_drift,
        return_times,
        d1_vertex_residual: d1_res,
        d2_vertex_residual: d2_res,
        quarter_steps_ok,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circles::special::solve_theta_k;

    #[test]
    fn theta_3_cell_preserves_height() {
        let p = solve_theta_k::<f64>(3).unwrap();
        let f = MapF::new(p);
        let cell = ReturnCell::new(&f, 3, 0).unwrap();
        let rep = return_map_check(&cell, &f, 100, 1e-8).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.return_times.iter().all(|&t| (12..=16).contains(&t)));
    }

    #[test]
    fn vertex_x_returns_after_full_period() {
        let p = solve_theta_k::<f64>(3).unwrap();
        let f = MapF::new(p);
        let cell = ReturnCell::new(&f, 3, 0).unwrap();
        let x = cell.quad[0];
        assert!(f.iterate(x, 12).unwrap().dist(x) < 1e-9);
    }

    #[test]
    fn wider_cell_at_theta_5() {
        let p = solve_theta_k::<f64>(5).unwrap();
        let f = MapF::new(p);
        let cell = ReturnCell::new(&f, 5, 2).unwrap();
        assert!(return_map_check(&cell, &f, 40, 1e-8).unwrap().passed());
    }
}
