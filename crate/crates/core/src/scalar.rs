use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst};

/// Floating-point scalar the map and its certifiers are written against.
///
/// Tolerances that the algorithms use internally scale with the precision of
/// the type: `geo_eps` is the absolute tolerance for geometric predicates
/// (point-in-triangle, on-segment) and `cert_eps` the default tolerance for
/// orbit recurrence and circle membership.
pub trait Scalar: Float + FloatConst + Debug + Display + Default + Send + Sync + 'static {
    fn geo_eps() -> Self;
    fn cert_eps() -> Self;

    #[inline]
    fn lit(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize(n: usize) -> Self {
        <Self as num_traits::NumCast>::from(n).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        <f64 as num_traits::NumCast>::from(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    #[inline]
    fn geo_eps() -> Self {
        1e-12
    }
    #[inline]
    fn cert_eps() -> Self {
        1e-8
    }
}

impl Scalar for f32 {
    #[inline]
    fn geo_eps() -> Self {
        1e-5
    }
    #[inline]
    fn cert_eps() -> Self {
        1e-3
    }
}
