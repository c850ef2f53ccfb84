//! The special parameters θ_K and the periodic cancellation orbits through
//! `X_N ∈ E₁P₄`, `Y_N ∈ E₁P₁`.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::geometry::Params;
use crate::linalg::{dist_to_segment, Point};
use crate::map::MapF;
use crate::scalar::Scalar;

use super::polycircle::{PolyCircle, Rho};
use super::spectral::{corner_map, k_of_t};

/// Residual allowed for `B^K(P₄) = P₁` at a solved θ_K.
pub const ROOT_CERT_TOL: f64 = 1e-9;
/// Residual allowed for `F^{4(K+N)}(X_N) = X_N`.
pub const CLOSURE_TOL: f64 = 1e-8;

const BRACKET: (f64, f64) = (0.05, 0.499);

/// Solves `K(t) = K` for `t` by bisection and returns the parameters at
/// `θ_K = asin(√t)`, certified by `B^K(P₄) = P₁`.
pub fn solve_theta_k<T: Scalar>(k: u32) -> Result<Params<T>> {
    if k < 3 {
        return Err(Error::Domain(format!(
            "K = {k} < 3 has no special parameter"
        )));
    }
    let target = T::from_usize(k as usize);
    let half = T::lit(0.5);
    let mut lo = T::lit(BRACKET.0);
    let mut hi = T::lit(BRACKET.1);
    while k_of_t(lo)? > target {
        lo = lo / T::lit(2.0);
        if lo < T::lit(1e-12) {
            return Err(Error::Numeric(format!("no lower bracket for K = {k}")));
        }
    }
    while k_of_t(hi)? < target {
        let next = (hi + half) / T::lit(2.0);
        if next >= half || next == hi {
            return Err(Error::Numeric(format!("no upper bracket for K = {k}")));
        }
        hi = next;
    }
    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if k_of_t(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = if (k_of_t(lo)? - target).abs() <= (k_of_t(hi)? - target).abs() {
        lo
    } else {
        hi
    };
    let params = Params::from_theta(t.sqrt().asin())?;
    let residual = root_residual(&params, k);
    if !(residual < T::lit(ROOT_CERT_TOL)) {
        return Err(Error::Certification {
            what: format!("B^{k}(P4) = P1 at the solved θ_{k}"),
            residual: residual.to_f64_lossy(),
        });
    }
    Ok(params)
}

/// `|B^K(P₄) − P₁|` by direct matrix powers.
pub fn root_residual<T: Scalar>(p: &Params<T>, k: u32) -> T {
    let b = corner_map(p);
    let p4 = Point::new(p.t, T::one() - p.s);
    let p1 = Point::new(p.s, p.t);
    (0..k).fold(p4, |q, _| b.apply(q)).dist(p1)
}

/// Point of `E₁P₁` whose `N`-th shear image lands on `E₂P₁`.
pub fn y_point<T: Scalar>(p: &Params<T>, n: u32) -> Point<T> {
    let scale = T::one() / (T::one() + T::from_usize(n as usize) * (T::one() - T::lit(2.0) * p.s));
    Point::new(p.s, p.t).scale(scale)
}

/// `X_N = B^{−K}(Y_N)`, certified to lie on `E₁P₄`.
pub fn x_point<T: Scalar>(p: &Params<T>, k: u32, n: u32) -> Result<Point<T>> {
    let residual = root_residual(p, k);
    if !(residual < T::lit(ROOT_CERT_TOL)) {
        return Err(Error::Certification {
            what: format!("θ = {} is not θ_{k}", p.theta),
            residual: residual.to_f64_lossy(),
        });
    }
    let b_inv = corner_map(p).inverse().expect("B is invertible");
    let x = (0..k).fold(y_point(p, n), |q, _| b_inv.apply(q));
    let off = dist_to_segment(
        x,
        Point::new(T::zero(), T::zero()),
        Point::new(p.t, T::one() - p.s),
    );
    if !(off < T::lit(ROOT_CERT_TOL)) {
        return Err(Error::Certification {
            what: format!("X_{n} on E1P4"),
            residual: off.to_f64_lossy(),
        });
    }
    Ok(x)
}

/// The invariant polygon `Γ_K^N` through the orbit of `X_N`.
pub fn build_gamma<T: Scalar>(p: &Params<T>, k: u32, n: u32) -> Result<PolyCircle<T>> {
    let x = x_point(p, k, n)?;
    let map = MapF::new(*p);
    let period = 4 * (k + n) as usize;
    let mut vertices = Vec::with_capacity(period);
    let mut q = x;
    for _ in 0..period {
        vertices.push(q);
        q = map.apply(q)?;
    }
    let gap = q.dist(x);
    if !(gap < T::lit(CLOSURE_TOL)) {
        return Err(Error::Certification {
            what: format!("closure of Γ_{k}^{n}"),
            residual: gap.to_f64_lossy(),
        });
    }
    Ok(PolyCircle {
        vertices,
        rho: Rho::Exact(Ratio::new(1, period as u64)),
        label: Some((k, n)),
    })
}
