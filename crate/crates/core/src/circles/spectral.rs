//! Eigen-structure of the hyperbolic corner map `B`.

use crate::error::{Error, Result};
use crate::geometry::Params;
use crate::linalg::{Mat2, Point};
use crate::map::hyperbolic_matrix;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralData<T> {
    /// `√(1 − 4t²)`.
    pub f: T,
    /// Expanding eigenvalue; the contracting one is `1/λ`.
    pub lambda: T,
    /// Expanding direction `(1 + f, 2t)`.
    pub v1: Point<T>,
    /// Contracting direction `(2t, 1 + f)`.
    pub v2: Point<T>,
    /// `P₄ = (t, 1 − s)` in the eigenbasis `(v1, v2)`.
    pub p4_eig: Point<T>,
    /// `P₁ = (s, t)` in the eigenbasis.
    pub p1_eig: Point<T>,
    /// `x₂/x₁`, the ratio of the expanding coordinates of `P₁` and `P₄`.
    pub ratio: T,
}

impl<T: Scalar> SpectralData<T> {
    /// Number of `B`-steps carrying `P₄` onto `P₁`, `log(x₂/x₁)/log λ`.
    pub fn k_value(&self) -> T {
        self.ratio.ln() / self.lambda.ln()
    }

    /// Change of basis sending `v1, v2` to the unit vectors.
    pub fn to_eigen(&self) -> Mat2<T> {
        Mat2::new(self.v1.x, self.v2.x, self.v1.y, self.v2.y)
            .inverse()
            .expect("eigendirections are independent")
    }
}

fn eigen_parts<T: Scalar>(s: T, t: T) -> Result<(T, T, T)> {
    let (one, two, four) = (T::one(), T::lit(2.0), T::lit(4.0));
    let disc = one - four * t * t;
    if !(t > T::zero()) || !(disc > T::zero()) {
        return Err(Error::Domain(format!("t = {t} outside (0, 1/2)")));
    }
    let f = disc.sqrt();
    let lambda = (four * t * t - two * t + (two * s - one) * (one + f)) / (two * (t - s));
    let ratio = (two * t * s + t * (f - one)) / (two * t * t + (one - s) * (f - one));
    Ok((f, lambda, ratio))
}

pub fn spectral<T: Scalar>(p: &Params<T>) -> Result<SpectralData<T>> {
    let (s, t) = (p.s, p.t);
    let (f, lambda, ratio) = eigen_parts(s, t)?;
    let one = T::one();
    let two = T::lit(2.0);
    let v1 = Point::new(one + f, two * t);
    let v2 = Point::new(two * t, one + f);
    let basis = Mat2::new(v1.x, v2.x, v1.y, v2.y)
        .inverse()
        .ok_or_else(|| Error::Numeric("degenerate eigenbasis".into()))?;
    Ok(SpectralData {
        f,
        lambda,
        v1,
        v2,
        p4_eig: basis.apply(Point::new(t, one - s)),
        p1_eig: basis.apply(Point::new(s, t)),
        ratio,
    })
}

/// `B` for the parameter `p`; re-exported here for the certifiers.
pub(crate) fn corner_map<T: Scalar>(p: &Params<T>) -> Mat2<T> {
    hyperbolic_matrix(p)
}

/// `K(t) = log(x₂/x₁)/log λ` with `s = √(t − t²)`.
pub fn k_of_t<T: Scalar>(t: T) -> Result<T> {
    if !(t > T::zero() && t < T::lit(0.5)) {
        return Err(Error::Domain(format!("t = {t} outside (0, 1/2)")));
    }
    let s = (t - t * t).sqrt();
    let (_, lambda, ratio) = eigen_parts(s, t)?;
    Ok(ratio.ln() / lambda.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_8;

    #[test]
    fn pi_over_8_values() {
        let p = Params::from_theta(FRAC_PI_8).unwrap();
        let sp = spectral(&p).unwrap();
        assert!((sp.lambda - 1.8832035059135).abs() < 1e-12);
        assert!((sp.ratio - 6.678697326997).abs() < 1e-11);
        assert!((sp.k_value() - 3.0).abs() < 1e-9);
        assert!((sp.p1_eig.x / sp.p4_eig.x - sp.ratio).abs() < 1e-12);
    }

    #[test]
    fn eigenpairs_hold_over_theta_grid() {
        for k in 1..100 {
            let p = Params::from_theta(0.78 * k as f64 / 100.0).unwrap();
            let sp = spectral(&p).unwrap();
            let b = corner_map(&p);
            assert!(sp.lambda > 1.0);
            assert!((b.apply(sp.v1) - sp.v1.scale(sp.lambda)).norm() < 1e-10);
            assert!((b.apply(sp.v2) - sp.v2.scale(1.0 / sp.lambda)).norm() < 1e-10);
            assert!((b.det() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn k_limits() {
        let t3 = (2.0 - 2f64.sqrt()) / 4.0;
        assert!((k_of_t(t3).unwrap() - 3.0).abs() < 1e-9);
        assert!((k_of_t(1e-6_f64).unwrap() - 2.0).abs() < 1e-2);
        assert!(k_of_t(0.499_f64).unwrap() > 20.0);
        assert!(k_of_t(0.0_f64).is_err());
        assert!(k_of_t(0.5_f64).is_err());
        assert!(k_of_t(-1.0_f64).is_err());
    }
}
