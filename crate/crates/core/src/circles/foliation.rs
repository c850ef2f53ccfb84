//! Invariant circles filling the annulus between `Γ_K^N` and `Γ_K^{N+1}` at θ_K.
//!
//! The circle through `W ∈ E₁P₁` runs horizontally from `W` across `E₂P₁` at
//! `V` and on to `F(V)`; from there it follows the orbit of `V` through `B₂`
//! until that orbit lands on `E₂P₂` at `R(W)`. The other three quarters are
//! rotated copies.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::geometry::{rot, Params};
use crate::linalg::{dist_to_segment, Point};
use crate::map::MapF;
use crate::scalar::Scalar;

use super::polycircle::{verify_invariant_circle, CircleReport, PolyCircle, Rho};
use super::rotation::rotation_number;
use super::special::{root_residual, y_point, ROOT_CERT_TOL};

/// Samples used when certifying each foliation circle.
pub const FOLIATION_CERT_SAMPLES: usize = 500;
/// Two neighbouring estimates may increase by at most this much.
pub const MONOTONE_TOL: f64 = 1e-4;

pub fn foliation_circle<T: Scalar>(
    map: &MapF<T>,
    w: Point<T>,
    tol: T,
    max_steps: usize,
) -> Result<PolyCircle<T>> {
    let part = &map.partition;
    let [e1, p1] = part.u_segment(1);
    if dist_to_segment(w, e1, p1) > tol || w.y <= T::zero() {
        return Err(Error::Geometry(format!(
            "W = ({}, {}) is not on E1P1",
            w.x, w.y
        )));
    }
    let [e2, _] = part.v_segment(1);
    let v = e2.lerp(p1, w.y / p1.y);
    let [e2b, p2] = part.u_segment(2);
    let mut quarter = vec![w];
    let mut q = v;
    let mut landed = None;
    for _ in 0..max_steps {
        q = map.apply(q)?;
        if dist_to_segment(q, e2b, p2) <= tol {
            landed = Some(q);
            break;
        }
        quarter.push(q);
    }
    let end = landed.ok_or_else(|| {
        Error::Search(format!(
            "orbit of V did not reach E2P2 within {max_steps} steps"
        ))
    })?;
    let gap = end.dist(rot(w));
    if gap > tol {
        return Err(Error::Certification {
            what: "V-orbit lands on R(W)".into(),
            residual: gap.to_f64_lossy(),
        });
    }
    let mut vertices = Vec::with_capacity(4 * quarter.len());
    let mut arc = quarter;
    for _ in 0..4 {
        vertices.extend_from_slice(&arc);
        arc = arc.into_iter().map(rot).collect();
    }
    Ok(PolyCircle::new(vertices, Rho::Estimate(T::nan())))
}

#[derive(Clone, Debug)]
pub struct FoliationSample<T> {
    /// Position along `[Y_N, Y_{N+1}]`, in `(0, 1)`.
    pub u: T,
    pub w: Point<T>,
    pub circle: Option<PolyCircle<T>>,
    pub report: Option<CircleReport<T>>,
    /// Number of straight segments of the circle.
    pub segments: usize,
    pub rho_estimate: T,
    pub error: Option<String>,
}

impl<T: Scalar> FoliationSample<T> {
    pub fn certified(&self) -> bool {
        self.error.is_none() && self.report.as_ref().is_some_and(|r| r.passed())
    }
}

#[derive(Clone, Debug)]
pub struct FoliationScan<T> {
    pub k: u32,
    pub n: u32,
    /// `ρ(Γ_K^N) = 1/(4(K+N))`, the inner end.
    pub rho_inner: Ratio<u64>,
    /// `ρ(Γ_K^{N+1})`, the outer end.
    pub rho_outer: Ratio<u64>,
    pub samples: Vec<FoliationSample<T>>,
    /// Estimates are non-increasing outward within [`MONOTONE_TOL`].
    pub monotone: bool,
    /// Largest deviation of the estimates from their least-squares line in `u`.
    pub linearity_residual: T,
}

/// Certifies `resolution` circles strictly between `Γ_K^N` and `Γ_K^{N+1}`
/// and estimates their rotation numbers from `iterations` steps each.
pub fn foliation_scan<T: Scalar>(
    params: &Params<T>,
    k: u32,
    n: u32,
    resolution: usize,
    iterations: usize,
    tol: T,
) -> Result<FoliationScan<T>> {
    let residual = root_residual(params, k);
    if !(residual < T::lit(ROOT_CERT_TOL)) {
        return Err(Error::Certification {
            what: format!("θ = {} is not θ_{k}", params.theta),
            residual: residual.to_f64_lossy(),
        });
    }
    let map = MapF::new(*params);
    let inner = y_point(params, n);
    let outer = y_point(params, n + 1);
    let max_steps = 4 * (k + n + 2) as usize;
    let samples: Vec<FoliationSample<T>> = (1..=resolution)
        .map(|j| {
            let u = T::from_usize(j) / T::from_usize(resolution + 1);
            let w = inner.lerp(outer, u);
            let mut sample = FoliationSample {
                u,
                w,
                circle: None,
                report: None,
                segments: 0,
                rho_estimate: T::nan(),
                error: None,
            };
            let rho = map.orbit(w, iterations).and_then(|tr| rotation_number(&tr));
            match rho {
                Ok(r) => sample.rho_estimate = r,
                Err(e) => sample.error = Some(e.to_string()),
            }
            match foliation_circle(&map, w, tol, max_steps) {
                Ok(mut c) => {
                    let rep = verify_invariant_circle(&c, &map, FOLIATION_CERT_SAMPLES, tol);
                    sample.segments = c.segment_count(T::lit(1e-9));
                    c.rho = Rho::Estimate(sample.rho_estimate);
                    sample.report = Some(rep);
                    sample.circle = Some(c);
                }
                Err(e) => sample.error = Some(e.to_string()),
            }
            sample
        })
        .collect();
    let rhos: Vec<T> = samples.iter().map(|s| s.rho_estimate).collect();
    let monotone = rhos.windows(2).all(|w| w[1] <= w[0] + T::lit(MONOTONE_TOL));
    Ok(FoliationScan {
        k,
        n,
        rho_inner: Ratio::new(1, 4 * (k + n) as u64),
        rho_outer: Ratio::new(1, 4 * (k + n + 1) as u64),
        linearity_residual: linear_fit_residual(
            &samples.iter().map(|s| s.u).collect::<Vec<_>>(),
            &rhos,
        ),
        samples,
        monotone,
    })
}

fn linear_fit_residual<T: Scalar>(xs: &[T], ys: &[T]) -> T {
    let m = xs.len();
    if m < 2 {
        return T::zero();
    }
    let nf = T::from_usize(m);
    let mx = xs.iter().fold(T::zero(), |a, &x| a + x) / nf;
    let my = ys.iter().fold(T::zero(), |a, &y| a + y) / nf;
    let (mut sxy, mut sxx) = (T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        sxy = sxy + (x - mx) * (y - my);
        sxx = sxx + (x - mx) * (x - mx);
    }
    let slope = sxy / sxx;
    xs.iter()
        .zip(ys)
        .map(|(&x, &y)| (y - (my + slope * (x - mx))).abs())
        .fold(T::zero(), T::max)
}
