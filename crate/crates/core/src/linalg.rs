//! Points and 2×2 matrices over a generic scalar.

use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point<T> {
    #[inline]
    pub fn new(x: T, y: T) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the planar cross product.
    #[inline]
    pub fn cross(self, o: Self) -> T {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, o: Self) -> T {
        (self - o).norm()
    }

    #[inline]
    pub fn scale(self, k: T) -> Self {
        Point::new(self.x * k, self.y * k)
    }

    #[inline]
    pub fn lerp(self, o: Self, u: T) -> Self {
        self + (o - self).scale(u)
    }

    pub fn max_abs_diff(self, o: Self) -> T {
        (self.x - o.x).abs().max((self.y - o.y).abs())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn cast<U: Scalar>(self) -> Point<U> {
        Point::new(U::lit(self.x.to_f64_lossy()), U::lit(self.y.to_f64_lossy()))
    }
}

impl<T: Scalar> Add for Point<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Scalar> Sub for Point<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl<T: Scalar> Neg for Point<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Point::new(-self.x, -self.y)
    }
}

/// Row-major 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Scalar> Mat2<T> {
    #[inline]
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2::new(T::one(), T::zero(), T::zero(), T::one())
    }

    /// Counterclockwise rotation by `angle`.
    pub fn rotation(angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        Mat2::new(c, -s, s, c)
    }

    #[inline]
    pub fn det(&self) -> T {
        self.a * self.d - self.b * self.c
    }

    #[inline]
    pub fn trace(&self) -> T {
        self.a + self.d
    }

    /// Inverse by the adjugate; `None` for a singular matrix.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det == T::zero() || !det.is_finite() {
            return None;
        }
        Some(Mat2::new(
            self.d / det,
            -self.b / det,
            -self.c / det,
            self.a / det,
        ))
    }

    #[inline]
    pub fn apply(&self, p: Point<T>) -> Point<T> {
        Point::new(self.a * p.x + self.b * p.y, self.c * p.x + self.d * p.y)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::identity();
        for _ in 0..n {
            acc = acc * *self;
        }
        acc
    }

    pub fn max_abs_diff(&self, o: &Self) -> T {
        (self.a - o.a)
            .abs()
            .max((self.b - o.b).abs())
            .max((self.c - o.c).abs())
            .max((self.d - o.d).abs())
    }

    pub fn sub_identity(&self) -> Self {
        Mat2::new(self.a - T::one(), self.b, self.c, self.d - T::one())
    }
}

impl<T: Scalar> Mul for Mat2<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

impl<T: Scalar> Mul<Point<T>> for Mat2<T> {
    type Output = Point<T>;
    #[inline]
    fn mul(self, p: Point<T>) -> Point<T> {
        self.apply(p)
    }
}

/// Signed area of the triangle `(a, b, c)`, positive when counterclockwise.
pub fn signed_area<T: Scalar>(a: Point<T>, b: Point<T>, c: Point<T>) -> T {
    (b - a).cross(c - a) / T::lit(2.0)
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn dist_to_segment<T: Scalar>(p: Point<T>, a: Point<T>, b: Point<T>) -> T {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == T::zero() {
        return p.dist(a);
    }
    let u = ((p - a).dot(ab) / len2).max(T::zero()).min(T::one());
    p.dist(a + ab.scale(u))
}

/// Intersection of segments `[p, q]` and `[a, b]` as the parameter along
/// `[p, q]`, accepting endpoints within `eps` (in parameter units).
pub fn segment_intersection<T: Scalar>(
    p: Point<T>,
    q: Point<T>,
    a: Point<T>,
    b: Point<T>,
    eps: T,
) -> Option<T> {
    let r = q - p;
    let s = b - a;
    let denom = r.cross(s);
    if denom.abs() <= T::epsilon() * r.norm() * s.norm() {
        return None;
    }
    let ap = a - p;
    let u = ap.cross(s) / denom;
    let v = ap.cross(r) / denom;
    let lo = -eps;
    let hi = T::one() + eps;
    if u >= lo && u <= hi && v >= lo && v <= hi {
        Some(u.max(T::zero()).min(T::one()))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let m = Mat2::new(2.0_f64, 1.0, 3.0, 2.0);
        let inv = m.inverse().unwrap();
        assert!((m * inv).max_abs_diff(&Mat2::identity()) < 1e-15);
        assert!(Mat2::new(1.0_f64, 2.0, 2.0, 4.0).inverse().is_none());
    }

    #[test]
    fn segment_distance_and_crossing() {
        let a = Point::new(0.0_f64, 0.0);
        let b = Point::new(1.0, 0.0);
        assert_eq!(dist_to_segment(Point::new(0.5, 2.0), a, b), 2.0);
        assert_eq!(dist_to_segment(Point::new(-3.0, 4.0), a, b), 5.0);
        let u =
            segment_intersection(Point::new(0.25, -1.0), Point::new(0.25, 1.0), a, b, 0.0).unwrap();
        assert!((u - 0.5).abs() < 1e-15);
        assert!(
            segment_intersection(Point::new(2.0, -1.0), Point::new(2.0, 1.0), a, b, 0.0).is_none()
        );
    }

    #[test]
    fn rotation_has_unit_determinant() {
        for k in 0..16 {
            let m = Mat2::rotation(k as f64 * 0.37);
            assert!((m.det() - 1.0).abs() < 1e-15);
        }
    }
}
