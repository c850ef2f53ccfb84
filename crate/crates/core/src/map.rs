//! Piecewise evaluation of the map, its inverse and its derivative.

use crate::circles::rotation::OrbitTrace;
use crate::error::{Error, Result};
use crate::geometry::{
    check_in_square, classify_in, rot, rot_inv, Params, Partition, Pieces, RegionId,
};
use crate::linalg::{Mat2, Point};
use crate::scalar::Scalar;

/// One affine branch of the map, `p ↦ m·p + b`.
///
/// Every branch fixes a point (`Eᵢ` for the side and corner pieces, the
/// centre `Z` for `C`); evaluation is done in the displacement form
/// `p + (m − I)(p − anchor)` so that the square's sides are fixed exactly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffinePiece<T> {
    pub m: Mat2<T>,
    pub b: Point<T>,
    pub anchor: Point<T>,
    pub src: RegionId,
    /// Label of the image piece (`A'ᵢ`, `B'ᵢ`, `C'`).
    pub dst: RegionId,
    shift: Mat2<T>,
}

impl<T: Scalar> AffinePiece<T> {
    fn new(m: Mat2<T>, anchor: Point<T>, src: RegionId, dst: RegionId) -> Self {
        AffinePiece {
            m,
            b: anchor - m.apply(anchor),
            anchor,
            src,
            dst,
            shift: m.sub_identity(),
        }
    }

    #[inline]
    pub fn apply(&self, p: Point<T>) -> Point<T> {
        p + self.shift.apply(p - self.anchor)
    }

    pub fn inverse(&self) -> Self {
        let inv = self.m.inverse().expect("pieces are area preserving");
        AffinePiece::new(inv, self.anchor, self.dst, self.src)
    }

    /// Conjugate by `k` quarter turns about the centre.
    fn rotated(&self, k: u8) -> Self {
        let quarter = Mat2::new(T::zero(), -T::one(), T::one(), T::zero());
        let mut m = self.m;
        let mut anchor = self.anchor;
        for _ in 0..k {
            m = quarter * m * quarter.inverse().unwrap();
            anchor = rot(anchor);
        }
        AffinePiece::new(m, anchor, self.src.rotated(k), self.dst.rotated(k))
    }
}

/// Shear of the side piece `A₁`.
pub fn shear_matrix<T: Scalar>(p: &Params<T>) -> Mat2<T> {
    Mat2::new(T::one(), p.shear_c, T::zero(), T::one())
}

/// Hyperbolic linear map of the corner piece `B₁`.
pub fn hyperbolic_matrix<T: Scalar>(p: &Params<T>) -> Mat2<T> {
    let (s, t) = (p.s, p.t);
    let (one, two) = (T::one(), T::lit(2.0));
    let k = one / (t - s);
    Mat2::new(
        k * (t * t - (one - s) * (one - s)),
        k * ((one - two * s) * t),
        k * ((two * s - one) * t),
        k * ((two * t - one) * t),
    )
}

/// Linear part of the rotation on the centre piece.
pub fn centre_matrix<T: Scalar>(p: &Params<T>) -> Mat2<T> {
    let (s, t) = (p.s, p.t);
    let (one, two) = (T::one(), T::lit(2.0));
    Mat2::new(two * s, two * t - one, one - two * t, two * s)
}

/// Reflections and rotation that commute with or reverse the map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    /// Quarter turn about the centre, `(x, y) ↦ (1 − y, x)`.
    R,
    /// Diagonal reflection, `(x, y) ↦ (y, x)`.
    S,
    /// `(x, y) ↦ (1 − x, y)`.
    T1,
    /// `(x, y) ↦ (x, 1 − y)`.
    T2,
}

impl Symmetry {
    #[inline]
    pub fn apply<T: Scalar>(self, p: Point<T>) -> Point<T> {
        match self {
            Symmetry::R => rot(p),
            Symmetry::S => Point::new(p.y, p.x),
            Symmetry::T1 => Point::new(T::one() - p.x, p.y),
            Symmetry::T2 => Point::new(p.x, T::one() - p.y),
        }
    }

    pub fn apply_inverse<T: Scalar>(self, p: Point<T>) -> Point<T> {
        match self {
            Symmetry::R => rot_inv(p),
            other => other.apply(p),
        }
    }
}

/// Quadratic form `Q(x, y) = t(x² + y²) − xy` preserved by the corner map.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadForm<T> {
    pub t: T,
}

impl<T: Scalar> QuadForm<T> {
    pub fn new(params: &Params<T>) -> Self {
        QuadForm { t: params.t }
    }

    #[inline]
    pub fn eval(&self, p: Point<T>) -> T {
        self.t * (p.x * p.x + p.y * p.y) - p.x * p.y
    }

    /// Level through `P₁ = (s, t)`.
    pub fn level(&self, params: &Params<T>) -> T {
        self.eval(Point::new(params.s, params.t))
    }
}

pub fn qb_value<T: Scalar>(pt: Point<T>, q: &QuadForm<T>) -> T {
    q.eval(pt)
}

/// The map `F_θ` together with its nine branches and their inverses.
#[derive(Clone, Debug)]
pub struct MapF<T> {
    pub params: Params<T>,
    pub partition: Partition<T>,
    /// Branches in slot order `A₁..A₄, B₁..B₄, C`.
    pub pieces: [AffinePiece<T>; 9],
    pub inverse_pieces: [AffinePiece<T>; 9],
    src: Pieces<T>,
    img: Pieces<T>,
}

impl<T: Scalar> MapF<T> {
    pub fn new(params: Params<T>) -> Self {
        let partition = Partition::new(&params);
        let e1 = partition.e[0];
        let a1 = AffinePiece::new(shear_matrix(&params), e1, RegionId::a(1), RegionId::a(1));
        let b1 = AffinePiece::new(
            hyperbolic_matrix(&params),
            e1,
            RegionId::b(1),
            RegionId::b(1),
        );
        let c = AffinePiece::new(
            centre_matrix(&params),
            partition.z,
            RegionId::C,
            RegionId::C,
        );
        let pieces: [AffinePiece<T>; 9] = std::array::from_fn(|slot| match slot {
            0..=3 => a1.rotated(slot as u8),
            4..=7 => b1.rotated(slot as u8 - 4),
            _ => c,
        });
        let inverse_pieces = std::array::from_fn(|slot| pieces[slot].inverse());
        MapF {
            src: partition.source_pieces(),
            img: partition.image_pieces(),
            params,
            partition,
            pieces,
            inverse_pieces,
        }
    }

    pub fn from_theta(theta: T) -> Result<Self> {
        Ok(MapF::new(Params::from_theta(theta)?))
    }

    pub fn piece(&self, id: RegionId) -> &AffinePiece<T> {
        &self.pieces[id.slot()]
    }

    pub fn classify(&self, pt: Point<T>) -> Result<RegionId> {
        classify_in(&self.src, pt)
    }

    pub fn classify_image(&self, pt: Point<T>) -> Result<RegionId> {
        classify_in(&self.img, pt)
    }

    #[inline]
    pub fn apply(&self, pt: Point<T>) -> Result<Point<T>> {
        let id = classify_in(&self.src, pt)?;
        Ok(self.pieces[id.slot()].apply(pt))
    }

    /// `F⁻¹`, inverting the branch selected on the image partition.
    pub fn apply_inv(&self, pt: Point<T>) -> Result<Point<T>> {
        let id = classify_in(&self.img, pt)?;
        Ok(self.inverse_pieces[id.slot()].apply(pt))
    }

    pub fn iterate(&self, pt: Point<T>, n: usize) -> Result<Point<T>> {
        (0..n).try_fold(pt, |p, _| self.apply(p))
    }

    pub fn iterate_inv(&self, pt: Point<T>, n: usize) -> Result<Point<T>> {
        (0..n).try_fold(pt, |p, _| self.apply_inv(p))
    }

    /// Derivative of the map; refused on break lines, where it jumps.
    pub fn jacobian(&self, pt: Point<T>) -> Result<Mat2<T>> {
        check_in_square(pt)?;
        if self.partition.on_break_line(pt, T::geo_eps()) {
            return Err(Error::BreakLine {
                x: pt.x.to_f64_lossy(),
                y: pt.y.to_f64_lossy(),
            });
        }
        Ok(self.pieces[self.classify(pt)?.slot()].m)
    }

    pub fn quad_form(&self) -> QuadForm<T> {
        QuadForm::new(&self.params)
    }

    /// Iterates `pt` `n` times, accumulating the unwrapped angle about the centre.
    pub fn orbit(&self, pt: Point<T>, n: usize) -> Result<OrbitTrace<T>> {
        let mut trace = OrbitTrace::start(pt, self.partition.z);
        let mut p = pt;
        for _ in 0..n {
            p = self.apply(p)?;
            trace.push(p);
        }
        Ok(trace)
    }
}

pub fn apply_f<T: Scalar>(pt: Point<T>, map: &MapF<T>) -> Result<Point<T>> {
    map.apply(pt)
}

pub fn apply_f_inv<T: Scalar>(pt: Point<T>, map: &MapF<T>) -> Result<Point<T>> {
    map.apply_inv(pt)
}

pub fn jacobian<T: Scalar>(pt: Point<T>, map: &MapF<T>) -> Result<Mat2<T>> {
    map.jacobian(pt)
}

pub fn orbit<T: Scalar>(pt: Point<T>, n: usize, map: &MapF<T>) -> Result<OrbitTrace<T>> {
    map.orbit(pt, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::RegionKind;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

    fn map(theta: f64) -> MapF<f64> {
        MapF::from_theta(theta).unwrap()
    }

    #[test]
    fn first_pieces_match_closed_forms() {
        let f = map(0.31);
        let (s, t) = (f.params.s, f.params.t);
        let a1 = f.piece(RegionId::a(1));
        assert!(a1.m.max_abs_diff(&Mat2::new(1.0, (1.0 - 2.0 * s) / t, 0.0, 1.0)) < 1e-15);
        assert_eq!(a1.b, Point::new(0.0, 0.0));
        let c = f.piece(RegionId::C);
        assert!(c.b.dist(Point::new(1.0 - t - s, t - s)) < 1e-15);
        assert!(c.m.max_abs_diff(&Mat2::rotation(f.params.alpha)) < 1e-15);
        let b1 = f.piece(RegionId::b(1));
        assert!(b1.b.norm() < 1e-16);
    }

    #[test]
    fn pieces_carry_source_vertices_to_image_vertices() {
        for theta in [0.05, FRAC_PI_8, 0.5, 0.7] {
            let f = map(theta);
            for piece in &f.pieces {
                assert!((piece.m.det() - 1.0).abs() < 1e-12);
                let src = f.partition.region_vertices(piece.src);
                let dst = f.partition.image_region_vertices(piece.dst);
                for (a, b) in src.iter().zip(&dst) {
                    assert!(
                        piece.apply(*a).dist(*b) < 1e-12,
                        "{} at θ={theta}",
                        piece.src
                    );
                }
            }
        }
    }

    #[test]
    fn rotated_pieces_are_conjugates() {
        let f = map(0.4);
        for kind_base in [0usize, 4] {
            let base = f.pieces[kind_base];
            for k in 1..4u8 {
                let piece = f.pieces[kind_base + k as usize];
                for p in [
                    Point::new(0.2, 0.1),
                    Point::new(0.7, 0.3),
                    Point::new(0.45, 0.9),
                ] {
                    let mut q = p;
                    for _ in 0..k {
                        q = rot_inv(q);
                    }
                    let mut expect = base.apply(q);
                    for _ in 0..k {
                        expect = rot(expect);
                    }
                    assert!(piece.apply(p).dist(expect) < 1e-14);
                }
            }
        }
    }

    #[test]
    fn apply_examples() {
        let f = map(FRAC_PI_8);
        for k in 0..=20 {
            let x = k as f64 / 20.0;
            assert_eq!(f.apply(Point::new(x, 0.0)).unwrap(), Point::new(x, 0.0));
        }
        let z = Point::new(0.5, 0.5);
        assert!(f.apply(z).unwrap().dist(z) < 1e-16);
        let (s, t) = (f.params.s, f.params.t);
        assert!(
            f.apply(Point::new(s, t))
                .unwrap()
                .dist(Point::new(1.0 - s, t))
                < 1e-15
        );
        assert!(f.apply(Point::new(-0.1, 0.5)).is_err());
    }

    #[test]
    fn inverse_examples() {
        let f = map(FRAC_PI_8);
        let (s, t) = (f.params.s, f.params.t);
        assert!(
            f.apply_inv(Point::new(1.0 - s, t))
                .unwrap()
                .dist(Point::new(s, t))
                < 1e-15
        );
        assert_eq!(
            f.apply_inv(Point::new(0.3, 0.0)).unwrap(),
            Point::new(0.3, 0.0)
        );
        let g = map(PI / 11.0);
        for p in [
            Point::new(0.2, 0.3),
            Point::new(0.9, 0.05),
            Point::new(0.51, 0.49),
        ] {
            let via_s = Symmetry::S.apply(g.apply(Symmetry::S.apply(p)).unwrap());
            assert!(via_s.dist(g.apply_inv(p).unwrap()) < 1e-10);
            assert!(g.apply(g.apply_inv(p).unwrap()).unwrap().dist(p) < 1e-10);
        }
    }

    #[test]
    fn jacobian_examples() {
        let f = map(FRAC_PI_8);
        let (s, t) = (f.params.s, f.params.t);
        let j = f.jacobian(Point::new(0.5, 0.01)).unwrap();
        assert!(j.max_abs_diff(&Mat2::new(1.0, (1.0 - 2.0 * s) / t, 0.0, 1.0)) < 1e-15);
        let j = f.jacobian(Point::new(0.5, 0.52)).unwrap();
        assert!(j.max_abs_diff(&Mat2::rotation(FRAC_PI_4)) < 1e-15);
        assert!((j.det() - 1.0).abs() < 1e-15);
        let u = Point::new(0.0, 0.0).lerp(Point::new(s, t), 0.4);
        assert!(matches!(f.jacobian(u), Err(Error::BreakLine { .. })));
    }

    #[test]
    fn quad_form_examples() {
        let f = map(FRAC_PI_8);
        let q = f.quad_form();
        assert_eq!(q.eval(Point::new(0.0, 0.0)), 0.0);
        let (s, t) = (f.params.s, f.params.t);
        assert!((q.eval(Point::new(t, 1.0 - s)) - q.eval(Point::new(s, t))).abs() < 1e-15);
        let b = f.piece(RegionId::b(1));
        let verts = f.partition.region_vertices(RegionId::b(1));
        for k in 0..100 {
            let u = (k as f64 * 0.618034) % 1.0;
            let v = (k as f64 * 0.414214) % 1.0;
            let (u, v) = if u + v > 1.0 {
                (1.0 - u, 1.0 - v)
            } else {
                (u, v)
            };
            let p = verts[0] + (verts[1] - verts[0]).scale(u) + (verts[2] - verts[0]).scale(v);
            assert!((q.eval(b.apply(p)) - q.eval(p)).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetry_orders() {
        let p = Point::new(0.123, 0.77);
        let r4 = (0..4).fold(p, |q, _| Symmetry::R.apply(q));
        assert!(r4.dist(p) < 1e-15);
        for s in [Symmetry::S, Symmetry::T1, Symmetry::T2] {
            assert!(s.apply(s.apply(p)).dist(p) < 1e-15);
        }
        assert!(Symmetry::R.apply_inverse(Symmetry::R.apply(p)).dist(p) < 1e-15);
    }

    #[test]
    fn orbit_examples() {
        let f = map(FRAC_PI_8);
        let z = Point::new(0.5, 0.5);
        let tr = f.orbit(z, 50).unwrap();
        assert_eq!(tr.points.len(), 51);
        assert!(tr.points.iter().all(|p| p.dist(z) < 1e-15));
        let b = Point::new(0.0, 0.37);
        let tr = f.orbit(b, 50).unwrap();
        assert!(tr.points.iter().all(|&p| p == b));
        let tr = f.orbit(Point::new(0.2, 0.3), 10_000).unwrap();
        assert!(tr.total_angle() > 0.0);
        assert!(tr.increments().all(|d| d >= 0.0));
    }

    #[test]
    fn piece_kinds_in_slot_order() {
        let f = map(0.3);
        assert!(f.pieces[..4].iter().all(|p| p.src.kind == RegionKind::A));
        assert!(f.pieces[4..8].iter().all(|p| p.src.kind == RegionKind::B));
        assert_eq!(f.pieces[8].src, RegionId::C);
        assert_eq!(f.pieces[5].anchor, Point::new(1.0, 0.0));
    }

    #[test]
    fn works_in_single_precision() {
        let f = MapF::<f32>::from_theta(std::f32::consts::FRAC_PI_8).unwrap();
        let p = Point::new(0.2_f32, 0.3);
        let back = f.apply_inv(f.apply(p).unwrap()).unwrap();
        assert!(back.dist(p) < 1e-5);
    }
}
