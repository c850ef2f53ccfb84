//! Cancellation orbits: the orbits of the points where a rotationally
//! symmetric circle crosses the break segments `EᵢPᵢ` (`Uᵢ`) and `Eᵢ₊₁Pᵢ` (`Vᵢ`).

use crate::error::{Error, Result};
use crate::linalg::{segment_intersection, Point};
use crate::map::MapF;
use crate::scalar::Scalar;

use super::polycircle::PolyCircle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BreakKind {
    U,
    V,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BreakPoint {
    pub kind: BreakKind,
    /// 1-based.
    pub index: usize,
}

/// Break-point hits along the orbit of one `Uᵢ`.
#[derive(Clone, Debug, PartialEq)]
pub struct HitOrbit {
    pub start: BreakPoint,
    /// `(step, hit)` sorted by step; steps may be negative.
    pub hits: Vec<(i64, BreakPoint)>,
    /// Smallest forward return time, when the orbit closes.
    pub period: Option<usize>,
    pub contains_v: bool,
    pub alternating: bool,
    pub u_count: usize,
    pub v_count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CancellationReport<T> {
    pub u_points: [Point<T>; 4],
    pub v_points: [Point<T>; 4],
    pub orbits: Vec<HitOrbit>,
    pub tol: T,
}

impl<T: Scalar> CancellationReport<T> {
    pub fn every_u_meets_v(&self) -> bool {
        self.orbits.iter().all(|o| o.contains_v)
    }

    pub fn alternating(&self) -> bool {
        self.orbits
            .iter()
            .all(|o| o.alternating && o.u_count == o.v_count)
    }

    pub fn periodic(&self) -> bool {
        self.orbits.iter().all(|o| o.period.is_some())
    }

    pub fn period(&self) -> Option<usize> {
        self.orbits.first().and_then(|o| o.period)
    }
}

fn crossing<T: Scalar>(circle: &PolyCircle<T>, seg: [Point<T>; 2]) -> Result<Point<T>> {
    let eps = T::lit(1e-9);
    circle
        .edges()
        .filter_map(|(a, b)| segment_intersection(seg[0], seg[1], a, b, eps))
        .fold(None, |best: Option<T>, u| {
            Some(best.map_or(u, |b| b.min(u)))
        })
        .map(|u| seg[0].lerp(seg[1], u))
        .ok_or_else(|| {
            Error::Geometry(format!(
                "circle does not cross the break segment ({}, {})–({}, {})",
                seg[0].x, seg[0].y, seg[1].x, seg[1].y
            ))
        })
}

/// Default bound on orbit steps searched in each direction.
pub fn default_step_bound<T>(circle: &PolyCircle<T>) -> usize {
    2 * circle.vertices.len() + 8
}

/// Locates `Uᵢ`, `Vᵢ` on `circle` and follows each `Uᵢ` both ways for up to
/// `max_steps` iterates (or one period), recording which break points it meets.
pub fn check_cancellation<T: Scalar>(
    circle: &PolyCircle<T>,
    map: &MapF<T>,
    tol: T,
    max_steps: usize,
) -> Result<CancellationReport<T>> {
    let part = &map.partition;
    for &v in &circle.vertices {
        if map.classify(v)? == crate::geometry::RegionId::C
            && part.p.iter().all(|p| p.dist(v) > tol)
            && !part.on_break_line(v, tol)
        {
            return Err(Error::Geometry("circle enters the centre piece".into()));
        }
    }
    let mut u_points = [Point::default(); 4];
    let mut v_points = [Point::default(); 4];
    for i in 1..=4 {
        u_points[i - 1] = crossing(circle, part.u_segment(i))?;
        v_points[i - 1] = crossing(circle, part.v_segment(i))?;
    }
    let hits_at = |q: Point<T>| -> Vec<BreakPoint> {
        let mut out = Vec::new();
        for i in 0..4 {
            // At a shared vertex Pᵢ the orbit enters through Uᵢ and leaves through Vᵢ.
            if q.dist(u_points[i]) <= tol {
                out.push(BreakPoint {
                    kind: BreakKind::U,
                    index: i + 1,
                });
            }
            if q.dist(v_points[i]) <= tol {
                out.push(BreakPoint {
                    kind: BreakKind::V,
                    index: i + 1,
                });
            }
        }
        out
    };
    let scale = |q: Point<T>| tol * (T::one() + q.norm());

    let mut orbits = Vec::with_capacity(4);
    for (i, &start) in u_points.iter().enumerate() {
        let mut hits: Vec<(i64, BreakPoint)> = hits_at(start).into_iter().map(|h| (0, h)).collect();
        let mut period = None;
        let mut q = start;
        for n in 1..=max_steps {
            q = map.apply(q)?;
            if q.dist(start) <= scale(start) {
                period = Some(n);
                break;
            }
            hits.extend(hits_at(q).into_iter().map(|h| (n as i64, h)));
        }
        if period.is_none() {
            let mut q = start;
            for n in 1..=max_steps {
                q = map.apply_inv(q)?;
                hits.extend(hits_at(q).into_iter().map(|h| (-(n as i64), h)));
            }
        }
        hits.sort_by_key(|(n, _)| *n);
        let kinds: Vec<BreakKind> = hits.iter().map(|(_, h)| h.kind).collect();
        let mut alternating = kinds.windows(2).all(|w| w[0] != w[1]);
        if period.is_some() && kinds.len() > 1 {
            alternating &= kinds.first() != kinds.last();
        }
        let u_count = kinds.iter().filter(|k| **k == BreakKind::U).count();
        let v_count = kinds.len() - u_count;
        orbits.push(HitOrbit {
            start: BreakPoint {
                kind: BreakKind::U,
                index: i + 1,
            },
            hits,
            period,
            contains_v: v_count > 0,
            alternating,
            u_count,
            v_count,
        });
    }
    Ok(CancellationReport {
        u_points,
        v_points,
        orbits,
        tol,
    })
}
