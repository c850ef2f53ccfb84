//! The nine-piece partition of the unit square.
//!
//! For a parameter angle θ the inner square has vertex `P₁ = (s, t)` with
//! `t = sin²θ`, `s = sinθ·cosθ`; the remaining vertices follow by the quarter
//! turn `R(x, y) = (1 − y, x)` about the centre. Each side `EᵢEᵢ₊₁` of the unit
//! square carries a triangle `Aᵢ = Δ(Eᵢ, Eᵢ₊₁, Pᵢ)`, each corner a triangle
//! `Bᵢ = Δ(Eᵢ, Pᵢ, Pᵢ₋₁)`, and the inner square is `C`. The image partition is
//! built the same way from `P'₁ = (1 − s, t)`.

use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::linalg::{dist_to_segment, signed_area, Point};
use crate::scalar::Scalar;

/// Lowest admissible parameter angle; the pieces degenerate at the endpoints.
pub const THETA_MARGIN: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params<T> {
    pub theta: T,
    pub s: T,
    pub t: T,
    /// Rotation angle of the centre piece, `π/2 − 2θ`.
    pub alpha: T,
    /// Shear coefficient of the side pieces, `(1 − 2s)/t`.
    pub shear_c: T,
}

impl<T: Scalar> Params<T> {
    pub fn from_theta(theta: T) -> Result<Self> {
        let lo = T::lit(THETA_MARGIN);
        let hi = T::FRAC_PI_4() - lo;
        if !theta.is_finite() || theta < lo || theta > hi {
            return Err(Error::Domain(format!(
                "theta = {theta} outside [{lo}, π/4 − {lo}]"
            )));
        }
        let (sin, cos) = theta.sin_cos();
        let t = sin * sin;
        let s = sin * cos;
        let two = T::lit(2.0);
        Ok(Params {
            theta,
            s,
            t,
            alpha: T::FRAC_PI_2() - two * theta,
            shear_c: (T::one() - two * s) / t,
        })
    }

    /// Upper bound of the rotation number of any orbit: the rotation on `C`.
    pub fn max_rotation_number(&self) -> T {
        self.alpha / (T::lit(2.0) * T::PI())
    }
}

pub fn params_from_theta<T: Scalar>(theta: T) -> Result<Params<T>> {
    Params::from_theta(theta)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegionKind {
    A,
    B,
    C,
}

/// Piece label. `index` runs over `1..=4` cyclically for `A` and `B`; it is `0`
/// for the centre piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegionId {
    pub kind: RegionKind,
    pub index: u8,
}

impl RegionId {
    pub const C: RegionId = RegionId {
        kind: RegionKind::C,
        index: 0,
    };

    pub fn a(i: u8) -> Self {
        RegionId {
            kind: RegionKind::A,
            index: wrap_index(i),
        }
    }

    pub fn b(i: u8) -> Self {
        RegionId {
            kind: RegionKind::B,
            index: wrap_index(i),
        }
    }

    /// Label of the piece obtained by `k` quarter turns.
    pub fn rotated(self, k: u8) -> Self {
        match self.kind {
            RegionKind::C => self,
            _ => RegionId {
                kind: self.kind,
                index: wrap_index(self.index + k % 4),
            },
        }
    }

    /// Zero-based slot in `[A₁..A₄, B₁..B₄, C]`.
    pub fn slot(self) -> usize {
        match self.kind {
            RegionKind::A => (self.index - 1) as usize,
            RegionKind::B => 4 + (self.index - 1) as usize,
            RegionKind::C => 8,
        }
    }

    pub fn from_slot(slot: usize) -> Self {
        match slot {
            0..=3 => RegionId::a(slot as u8 + 1),
            4..=7 => RegionId::b(slot as u8 - 3),
            _ => RegionId::C,
        }
    }

    pub fn all() -> [RegionId; 9] {
        std::array::from_fn(RegionId::from_slot)
    }
}

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RegionKind::A => write!(f, "A{}", self.index),
            RegionKind::B => write!(f, "B{}", self.index),
            RegionKind::C => write!(f, "C"),
        }
    }
}

/// Maps 1..=8 (and 0) into the cyclic range 1..=4.
fn wrap_index(i: u8) -> u8 {
    (i + 3) % 4 + 1
}

/// The quarter turn about the centre, `(x, y) ↦ (1 − y, x)`.
#[inline]
pub fn rot<T: Scalar>(p: Point<T>) -> Point<T> {
    Point::new(T::one() - p.y, p.x)
}

/// Inverse quarter turn, `(x, y) ↦ (y, 1 − x)`.
#[inline]
pub fn rot_inv<T: Scalar>(p: Point<T>) -> Point<T> {
    Point::new(p.y, T::one() - p.x)
}

pub fn rot_n<T: Scalar>(p: Point<T>, k: u32) -> Point<T> {
    (0..k % 4).fold(p, |q, _| rot(q))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Partition<T> {
    /// Corners `E₁ = (0,0)`, `E₂ = (1,0)`, `E₃ = (1,1)`, `E₄ = (0,1)`.
    pub e: [Point<T>; 4],
    /// Inner square of the source partition, `P₁ = (s, t)`.
    pub p: [Point<T>; 4],
    /// Inner square of the image partition, `P'₁ = (1 − s, t)`.
    pub pp: [Point<T>; 4],
    pub z: Point<T>,
}

/// Vertex lists of the nine pieces for a given inner square, in slot order.
#[derive(Clone, Debug)]
pub(crate) struct Pieces<T> {
    pub tris: [[Point<T>; 3]; 8],
    pub centre: [Point<T>; 4],
    /// Per slot: edge origins and unit directions (counterclockwise).
    edges: [[(Point<T>, Point<T>); 4]; 9],
}

impl<T: Scalar> Pieces<T> {
    fn new(e: &[Point<T>; 4], q: &[Point<T>; 4]) -> Self {
        let tris = std::array::from_fn(|slot| {
            let i = slot % 4;
            if slot < 4 {
                [e[i], e[(i + 1) % 4], q[i]]
            } else {
                [e[i], q[i], q[(i + 3) % 4]]
            }
        });
        let edges = std::array::from_fn(|slot| {
            let poly: Vec<Point<T>> = if slot < 8 {
                tris[slot].to_vec()
            } else {
                q.to_vec()
            };
            let n = poly.len();
            std::array::from_fn(|k| {
                // Triangles repeat their last edge in the unused fourth slot.
                let k = k.min(n - 1);
                let a = poly[k];
                let d = poly[(k + 1) % n] - a;
                (a, d.scale(T::one() / d.norm()))
            })
        });
        Pieces {
            tris,
            centre: *q,
            edges,
        }
    }

    pub fn vertices(&self, slot: usize) -> Vec<Point<T>> {
        if slot < 8 {
            self.tris[slot].to_vec()
        } else {
            self.centre.to_vec()
        }
    }

    /// Smallest signed distance of `p` to the edges of a piece; non-negative
    /// inside, negative outside.
    fn depth(&self, slot: usize, p: Point<T>) -> T {
        self.edges[slot]
            .iter()
            .map(|&(a, u)| u.cross(p - a))
            .fold(T::infinity(), T::min)
    }

    fn classify(&self, p: Point<T>, eps: T) -> RegionId {
        // Priority C > B > A, lowest index first within a kind.
        const ORDER: [usize; 9] = [8, 4, 5, 6, 7, 0, 1, 2, 3];
        let mut best = (T::neg_infinity(), 8usize);
        for &slot in &ORDER {
            let d = self.depth(slot, p);
            if d >= -eps {
                return RegionId::from_slot(slot);
            }
            if d > best.0 {
                best = (d, slot);
            }
        }
        RegionId::from_slot(best.1)
    }

    fn area(&self, slot: usize) -> T {
        if slot < 8 {
            let [a, b, c] = self.tris[slot];
            signed_area(a, b, c)
        } else {
            let q = self.centre;
            signed_area(q[0], q[1], q[2]) + signed_area(q[0], q[2], q[3])
        }
    }

    fn break_segments(&self, e: &[Point<T>; 4]) -> Vec<[Point<T>; 2]> {
        let q = &self.centre;
        let mut segs = Vec::with_capacity(12);
        for i in 0..4 {
            segs.push([e[i], q[i]]);
            segs.push([e[(i + 1) % 4], q[i]]);
        }
        for i in 0..4 {
            segs.push([q[i], q[(i + 1) % 4]]);
        }
        segs
    }
}

impl<T: Scalar> Partition<T> {
    pub fn new(params: &Params<T>) -> Self {
        let (zero, one) = (T::zero(), T::one());
        let e = [
            Point::new(zero, zero),
            Point::new(one, zero),
            Point::new(one, one),
            Point::new(zero, one),
        ];
        let p1 = Point::new(params.s, params.t);
        let pp1 = Point::new(one - params.s, params.t);
        let p = [p1, rot(p1), rot(rot(p1)), rot(rot(rot(p1)))];
        let pp = [pp1, rot(pp1), rot(rot(pp1)), rot(rot(rot(pp1)))];
        let half = T::lit(0.5);
        Partition {
            e,
            p,
            pp,
            z: Point::new(half, half),
        }
    }

    pub(crate) fn source_pieces(&self) -> Pieces<T> {
        Pieces::new(&self.e, &self.p)
    }

    pub(crate) fn image_pieces(&self) -> Pieces<T> {
        Pieces::new(&self.e, &self.pp)
    }

    /// Vertices of a source piece in counterclockwise order.
    pub fn region_vertices(&self, id: RegionId) -> Vec<Point<T>> {
        self.source_pieces().vertices(id.slot())
    }

    /// Vertices of the image piece with the same label (`A'ᵢ`, `B'ᵢ`, `C'`).
    pub fn image_region_vertices(&self, id: RegionId) -> Vec<Point<T>> {
        self.image_pieces().vertices(id.slot())
    }

    pub fn region_area(&self, id: RegionId) -> T {
        self.source_pieces().area(id.slot())
    }

    pub fn image_region_area(&self, id: RegionId) -> T {
        self.image_pieces().area(id.slot())
    }

    /// Piece containing `pt` in the source partition.
    ///
    /// Points on `∂□` belong to the adjacent `Aᵢ`; elsewhere ties on break
    /// lines go to `C`, then `B`, then `A`, lowest index first.
    pub fn classify(&self, pt: Point<T>) -> Result<RegionId> {
        classify_in(&self.source_pieces(), pt)
    }

    /// Piece containing `pt` in the image partition.
    pub fn classify_image(&self, pt: Point<T>) -> Result<RegionId> {
        classify_in(&self.image_pieces(), pt)
    }

    /// The eight segments `EᵢPᵢ`, `Eᵢ₊₁Pᵢ` (interleaved) followed by the four sides of `C`.
    pub fn break_segments(&self) -> Vec<[Point<T>; 2]> {
        self.source_pieces().break_segments(&self.e)
    }

    pub fn image_break_segments(&self) -> Vec<[Point<T>; 2]> {
        self.image_pieces().break_segments(&self.e)
    }

    /// Segment `EᵢPᵢ` (1-based `i`).
    pub fn u_segment(&self, i: usize) -> [Point<T>; 2] {
        let k = (i + 3) % 4;
        [self.e[k], self.p[k]]
    }

    /// Segment `Eᵢ₊₁Pᵢ` (1-based `i`).
    pub fn v_segment(&self, i: usize) -> [Point<T>; 2] {
        let k = (i + 3) % 4;
        [self.e[(k + 1) % 4], self.p[k]]
    }

    pub fn on_break_line(&self, pt: Point<T>, eps: T) -> bool {
        self.break_segments()
            .iter()
            .any(|[a, b]| dist_to_segment(pt, *a, *b) <= eps)
    }

    /// Plain-text vertex dump, one `label x y` per line.
    pub fn debug_dump(&self) -> String {
        let mut out = String::new();
        let mut line = |label: String, p: Point<T>| {
            let _ = writeln!(out, "{label} {} {}", p.x, p.y);
        };
        for (i, p) in self.e.iter().enumerate() {
            line(format!("E{}", i + 1), *p);
        }
        for (i, p) in self.p.iter().enumerate() {
            line(format!("P{}", i + 1), *p);
        }
        for (i, p) in self.pp.iter().enumerate() {
            line(format!("P'{}", i + 1), *p);
        }
        line("Z".to_string(), self.z);
        out
    }
}

pub fn build_partition<T: Scalar>(params: &Params<T>) -> Partition<T> {
    Partition::new(params)
}

pub(crate) fn check_in_square<T: Scalar>(pt: Point<T>) -> Result<()> {
    let eps = T::geo_eps();
    let ok = pt.is_finite()
        && pt.x >= -eps
        && pt.x <= T::one() + eps
        && pt.y >= -eps
        && pt.y <= T::one() + eps;
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "point ({}, {}) outside the unit square",
            pt.x, pt.y
        )))
    }
}

pub(crate) fn classify_in<T: Scalar>(pieces: &Pieces<T>, pt: Point<T>) -> Result<RegionId> {
    check_in_square(pt)?;
    let (zero, one) = (T::zero(), T::one());
    if pt.y <= zero {
        return Ok(RegionId::a(1));
    }
    if pt.x >= one {
        return Ok(RegionId::a(2));
    }
    if pt.y >= one {
        return Ok(RegionId::a(3));
    }
    if pt.x <= zero {
        return Ok(RegionId::a(4));
    }
    Ok(pieces.classify(pt, T::geo_eps()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, FRAC_PI_8};

    #[test]
    fn theta_pi_over_8() {
        let p = Params::from_theta(FRAC_PI_8).unwrap();
        assert!((p.t - (2.0 - 2f64.sqrt()) / 4.0).abs() < 1e-15);
        assert!((p.s - 2f64.sqrt() / 4.0).abs() < 1e-15);
        assert!((p.alpha - FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn theta_pi_over_6() {
        let p = Params::from_theta(FRAC_PI_6).unwrap();
        assert!((p.t - 0.25).abs() < 1e-15);
        assert!((p.s - 3f64.sqrt() / 4.0).abs() < 1e-15);
        assert!((p.t - p.t * p.t - 0.1875).abs() < 1e-15);
        assert!((p.s * p.s - 0.1875).abs() < 1e-15);
    }

    #[test]
    fn rejects_degenerate_theta() {
        assert!(matches!(Params::from_theta(0.0_f64), Err(Error::Domain(_))));
        assert!(Params::from_theta(FRAC_PI_4).is_err());
        assert!(Params::from_theta(-0.1_f64).is_err());
        assert!(Params::from_theta(f64::NAN).is_err());
        assert!(Params::from_theta(1e-5_f64).is_ok());
    }

    #[test]
    fn partition_vertices_at_pi_over_8() {
        let params = Params::from_theta(FRAC_PI_8).unwrap();
        let part = Partition::new(&params);
        assert!(part.p[0].dist(Point::new(0.353553390593274, 0.146446609406726)) < 1e-12);
        assert!(part.p[3].dist(Point::new(params.t, 1.0 - params.s)) < 1e-15);
        assert!(part.p[3].dist(Point::new(0.146446609406726, 0.646446609406726)) < 1e-12);
        assert!(part.pp[0].dist(Point::new(0.646446609406726, 0.146446609406726)) < 1e-12);
        assert_eq!(part.pp[0].y, part.p[0].y);
    }

    #[test]
    fn region_areas_tile_the_square() {
        for k in 1..50 {
            let theta = FRAC_PI_4 * k as f64 / 50.0;
            let part = Partition::new(&Params::from_theta(theta).unwrap());
            let total: f64 = RegionId::all().iter().map(|&r| part.region_area(r)).sum();
            assert!((total - 1.0).abs() < 1e-12);
            let a1 = part.region_area(RegionId::a(1));
            let b1 = part.region_area(RegionId::b(1));
            let c = part.region_area(RegionId::C);
            assert!((c - (1.0 - 4.0 * a1 - 4.0 * b1)).abs() < 1e-12);
            for r in RegionId::all() {
                assert!(part.region_area(r) > 0.0);
                assert!((part.image_region_area(r) - part.region_area(r)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn classify_examples() {
        let part = Partition::new(&Params::from_theta(FRAC_PI_8).unwrap());
        assert_eq!(part.classify(Point::new(0.5, 0.5)).unwrap(), RegionId::C);
        assert_eq!(
            part.classify(Point::new(0.5, 0.01)).unwrap(),
            RegionId::a(1)
        );
        assert_eq!(part.classify(part.p[0]).unwrap(), RegionId::C);
        assert_eq!(part.classify(Point::new(0.0, 0.0)).unwrap(), RegionId::a(1));
        assert_eq!(part.classify(Point::new(0.0, 0.3)).unwrap(), RegionId::a(4));
        assert_eq!(part.classify(Point::new(1.0, 0.3)).unwrap(), RegionId::a(2));
        assert_eq!(part.classify(Point::new(0.3, 1.0)).unwrap(), RegionId::a(3));
        // Interior of B₁ near E₁.
        assert_eq!(
            part.classify(Point::new(0.05, 0.08)).unwrap(),
            RegionId::b(1)
        );
        assert!(matches!(
            part.classify(Point::new(1.1, 0.5)),
            Err(Error::Domain(_))
        ));
        assert!(part.classify(Point::new(0.5, -0.001)).is_err());
    }

    #[test]
    fn break_line_tie_goes_to_b_before_a() {
        let part = Partition::new(&Params::from_theta(FRAC_PI_8).unwrap());
        let mid = part.e[0].lerp(part.p[0], 0.5);
        assert_eq!(part.classify(mid).unwrap(), RegionId::b(1));
        let mid = part.e[1].lerp(part.p[0], 0.5);
        assert_eq!(part.classify(mid).unwrap(), RegionId::b(2));
    }

    #[test]
    fn region_rotation_labels() {
        assert_eq!(RegionId::a(4).rotated(1), RegionId::a(1));
        assert_eq!(RegionId::b(2).rotated(3), RegionId::b(1));
        assert_eq!(RegionId::C.rotated(2), RegionId::C);
        for r in RegionId::all() {
            assert_eq!(RegionId::from_slot(r.slot()), r);
        }
        assert_eq!(RegionId::b(1).to_string(), "B1");
    }

    #[test]
    fn segment_accessors() {
        let part = Partition::new(&Params::from_theta(0.3).unwrap());
        assert_eq!(part.u_segment(1), [part.e[0], part.p[0]]);
        assert_eq!(part.v_segment(1), [part.e[1], part.p[0]]);
        assert_eq!(part.v_segment(4), [part.e[0], part.p[3]]);
        assert_eq!(part.break_segments().len(), 12);
        assert!(part.on_break_line(part.e[0].lerp(part.p[3], 0.3), 1e-12));
        assert!(!part.on_break_line(Point::new(0.5, 0.5), 1e-12));
    }

    #[test]
    fn dump_lists_all_vertices() {
        let part = Partition::new(&Params::from_theta(FRAC_PI_8).unwrap());
        let dump = part.debug_dump();
        assert_eq!(dump.lines().count(), 13);
        assert!(dump.starts_with("E1 0 0\n"));
        assert!(dump.contains("P'1 "));
    }
}
