//! The property suite behind `pwa certify`: eleven checks, each with a
//! tolerance and a runtime budget.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};
use std::path::Path;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use pwa_core::circles::{
    build_gamma, check_cancellation, default_step_bound, foliation_scan, k_of_t, return_map_check,
    rotation_number, solve_theta_k, spectral, x_point, ReturnCell,
};
use pwa_core::geometry::THETA_MARGIN;
use pwa_core::map::hyperbolic_matrix;
use pwa_core::{Map64, Mat64, Params64, Point64, RegionId, Symmetry};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::commands::cmd_orbit;
use crate::error::Result;
use crate::spec::{ExperimentSpec, Format, FIG4_SEEDS};

#[derive(Clone, Debug)]
pub struct Check {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl Check {
    pub fn within_budget(&self) -> bool {
        self.elapsed <= self.budget
    }

    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {:<28} {:>8.3}s / {:>3}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs(),
            self.detail
        )
    }
}

fn timed(
    id: u32,
    name: &'static str,
    budget: u64,
    f: impl FnOnce() -> Result<(bool, String)>,
) -> Check {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    Check {
        id,
        name,
        passed,
        detail,
        elapsed: start.elapsed(),
        budget: Duration::from_secs(budget),
    }
}

/// Ten parameters spread over the window, including π/11 and π/8.
pub fn theta_grid() -> [f64; 10] {
    [
        0.1,
        0.15,
        PI / 11.0,
        0.33,
        FRAC_PI_8,
        0.45,
        0.52,
        0.6,
        0.68,
        0.75,
    ]
}

fn random_point(rng: &mut ChaCha8Rng) -> Point64 {
    Point64::new(rng.gen(), rng.gen())
}

pub fn algebraic_identities() -> Check {
    timed(1, "algebraic identities", 1, || {
        let mut worst_param: f64 = 0.0;
        let mut worst_det: f64 = 0.0;
        let span = FRAC_PI_4 - 2.0 * THETA_MARGIN;
        for i in 0..1000 {
            let th = THETA_MARGIN + span * (i as f64 + 0.5) / 1000.0;
            let f = Map64::from_theta(th)?;
            let p = f.params;
            worst_param = worst_param.max((p.t - p.t * p.t - p.s * p.s).abs());
            for r in RegionId::all() {
                worst_det = worst_det.max((f.piece(r).m.det() - 1.0).abs());
            }
        }
        Ok((
            worst_param < 1e-14 && worst_det < 1e-12,
            format!("max |t-t²-s²| = {worst_param:.1e}, max |det-1| = {worst_det:.1e}"),
        ))
    })
}

pub fn symmetry_suite() -> Check {
    timed(2, "symmetry suite", 5, || {
        let worst = theta_grid()
            .par_iter()
            .enumerate()
            .map(|(j, &th)| -> Result<f64> {
                let f = Map64::from_theta(th)?;
                let mut rng = ChaCha8Rng::seed_from_u64(200 + j as u64);
                let mut worst: f64 = 0.0;
                for _ in 0..10_000 {
                    let p = random_point(&mut rng);
                    let fp = f.apply(p)?;
                    let rf = Symmetry::R.apply(fp);
                    worst = worst.max(f.apply(Symmetry::R.apply(p))?.max_abs_diff(rf));
                    for g in [Symmetry::S, Symmetry::T1, Symmetry::T2] {
                        let q = f.apply(g.apply(fp))?;
                        worst = worst.max(g.apply(q).max_abs_diff(p));
                    }
                }
                Ok(worst)
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        Ok((
            worst < 1e-10,
            format!("sup residual {worst:.1e} over 10 θ × 10⁴ points"),
        ))
    })
}

pub fn boundary_and_continuity() -> Check {
    timed(3, "boundary and continuity", 5, || {
        let mut rng = ChaCha8Rng::seed_from_u64(300);
        let grid = theta_grid();
        let maps: Vec<Map64> = grid
            .iter()
            .map(|&th| Map64::from_theta(th))
            .collect::<pwa_core::Result<_>>()?;
        let mut moved = 0;
        for i in 0..1000 {
            let f = &maps[i % maps.len()];
            let u: f64 = rng.gen();
            let p = match i % 4 {
                0 => Point64::new(u, 0.0),
                1 => Point64::new(1.0, u),
                2 => Point64::new(u, 1.0),
                _ => Point64::new(0.0, u),
            };
            if f.apply(p)? != p {
                moved += 1;
            }
        }
        let mut worst: f64 = 0.0;
        let mut tested = 0;
        while tested < 10_000 {
            let f = &maps[tested % maps.len()];
            let segs = f.partition.break_segments();
            let [a, b] = segs[rng.gen_range(0..segs.len())];
            let mid = a.lerp(b, rng.gen());
            let d = b - a;
            let n = Point64::new(-d.y, d.x).scale(1e-9 / d.norm());
            let (l, r) = (mid + n, mid - n);
            let inside = |q: Point64| (0.0..=1.0).contains(&q.x) && (0.0..=1.0).contains(&q.y);
            if !inside(l) || !inside(r) {
                continue;
            }
            worst = worst.max(f.apply(l)?.dist(f.apply(r)?));
            tested += 1;
        }
        Ok((
            moved == 0 && worst < 1e-7,
            format!("{moved}/1000 boundary points moved, max jump {worst:.1e} at δ = 1e-9"),
        ))
    })
}

pub fn theta_three() -> Check {
    timed(4, "special parameter θ₃", 1, || {
        let p = solve_theta_k::<f64>(3)?;
        let err = (p.theta - FRAC_PI_8).abs();
        Ok((err < 1e-10, format!("|θ₃ - π/8| = {err:.1e}")))
    })
}

pub fn certified_circles() -> Check {
    timed(5, "certified circles", 10, || {
        let mut worst: f64 = 0.0;
        let mut bad = Vec::new();
        for k in 3..=6u32 {
            let p = solve_theta_k::<f64>(k)?;
            let f = Map64::new(p);
            for n in 0..=10u32 {
                let period = 4 * (k + n) as usize;
                let g = build_gamma(&p, k, n)?;
                let x = x_point(&p, k, n)?;
                let trace = f.orbit(x, period)?;
                let closure = trace.points[period].dist(x);
                worst = worst.max(closure);
                let winding = trace.periodic_rotation(1e-8);
                let want = Ratio::new(1, period as u64);
                if closure >= 1e-8 || g.len() != period || winding != Some(want) {
                    bad.push((k, n));
                }
            }
        }
        Ok((
            bad.is_empty(),
            format!("44 circles, max closure {worst:.1e}, failures {bad:?}"),
        ))
    })
}

pub fn cancellation_structure() -> Check {
    timed(6, "cancellation structure", 5, || {
        let mut bad = Vec::new();
        let mut orbits = 0;
        for k in 3..=6u32 {
            let p = solve_theta_k::<f64>(k)?;
            let f = Map64::new(p);
            for n in 0..=10u32 {
                let g = build_gamma(&p, k, n)?;
                let rep = check_cancellation(&g, &f, 1e-9, default_step_bound(&g))?;
                orbits += rep.orbits.len();
                if !(rep.alternating() && rep.every_u_meets_v()) {
                    bad.push((k, n));
                }
            }
        }
        Ok((
            bad.is_empty(),
            format!("{orbits} U-orbits on 44 circles, failures {bad:?}"),
        ))
    })
}

pub fn foliation() -> Check {
    timed(7, "foliation at π/8", 10, || {
        let p = solve_theta_k::<f64>(3)?;
        let scan = foliation_scan(&p, 3, 0, 50, 20_000, 1e-7)?;
        let uncertified = scan
            .samples
            .iter()
            .filter(|s| !s.certified() || s.segments != 12)
            .count();
        let worst = scan
            .samples
            .iter()
            .filter_map(|s| s.report.as_ref().map(|r| r.max_residual))
            .fold(0.0, f64::max);
        let (lo, hi) = (1.0 / 16.0 - 1e-4, 1.0 / 12.0 + 1e-4);
        let in_range = scan
            .samples
            .iter()
            .all(|s| s.rho_estimate >= lo && s.rho_estimate <= hi);
        let first = scan.samples.first().map_or(f64::NAN, |s| s.rho_estimate);
        let last = scan.samples.last().map_or(f64::NAN, |s| s.rho_estimate);
        Ok((
            scan.samples.len() == 50 && uncertified == 0 && scan.monotone && in_range,
            format!(
                "{} samples, {uncertified} uncertified, residual {worst:.1e}, ρ {first:.5} → {last:.5}, linearity {:.1e}",
                scan.samples.len(),
                scan.linearity_residual
            ),
        ))
    })
}

pub fn return_map() -> Check {
    timed(8, "return map", 5, || {
        let p = solve_theta_k::<f64>(3)?;
        let f = Map64::new(p);
        let cell = ReturnCell::new(&f, 3, 0)?;
        let rep = return_map_check(&cell, &f, 100, 1e-8)?;
        Ok((
            rep.samples == 100 && rep.max_y_drift < 1e-8,
            format!(
                "{} samples, max |Δy| = {:.1e}",
                rep.samples, rep.max_y_drift
            ),
        ))
    })
}

pub fn rotation_bound() -> Check {
    timed(9, "rotation-number bound", 60, || {
        let rows = theta_grid()
            .par_iter()
            .enumerate()
            .map(|(j, &th)| -> Result<(f64, usize, usize)> {
                let f = Map64::from_theta(th)?;
                let bound = 0.25 - th / PI + 1e-4;
                let mut rng = ChaCha8Rng::seed_from_u64(900 + j as u64);
                let (mut margin, mut over, mut skipped) = (f64::INFINITY, 0, 0);
                for _ in 0..100 {
                    let p = Point64::new(
                        rng.gen_range(1e-3..1.0 - 1e-3),
                        rng.gen_range(1e-3..1.0 - 1e-3),
                    );
                    match rotation_number(&f.orbit(p, 10_000)?) {
                        Ok(rho) => {
                            margin = margin.min(bound - rho);
                            over += usize::from(rho > bound);
                        }
                        Err(_) => skipped += 1,
                    }
                }
                Ok((margin, over, skipped))
            })
            .collect::<Result<Vec<_>>>()?;
        let margin = rows.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
        let over: usize = rows.iter().map(|r| r.1).sum();
        let skipped: usize = rows.iter().map(|r| r.2).sum();
        Ok((
            over == 0 && skipped == 0,
            format!("1000 orbits, {over} above bound, {skipped} unusable, min margin {margin:.1e}"),
        ))
    })
}

/// Runs the θ = π/11 ensemble twice into `dir` and compares the outputs.
pub fn figure_reproduction(dir: &Path) -> Check {
    timed(10, "figure reproduction π/11", 60, || {
        let seeds: Vec<String> = FIG4_SEEDS.iter().map(|(x, y)| format!("{x},{y}")).collect();
        let seeds: Vec<&str> = seeds.iter().map(String::as_str).collect();
        let mut runs = Vec::new();
        for tag in ["a", "b"] {
            let mut spec =
                ExperimentSpec::new("pi/11", &seeds, 100_000, dir.join(format!("fig4_{tag}")))?;
            spec.formats = vec![Format::Csv, Format::Ppm];
            spec.raster = (512, 512);
            runs.push(cmd_orbit(&spec)?);
        }
        let drift = runs[0].seeds.iter().map(|s| s.drift()).fold(0.0, f64::max);
        let mut identical = runs[0].files.len() == runs[1].files.len();
        for (a, b) in runs[0].files.iter().zip(&runs[1].files) {
            let read = |p: &Path| std::fs::read(p).map_err(|e| crate::error::CliError::io(p, e));
            identical &= read(a)? == read(b)?;
        }
        let conserved = runs[0].raster_total == (seeds.len() * 100_000) as u64;
        Ok((
            drift < 1e-3 && identical && conserved,
            format!(
                "{} seeds × 10⁵, max radius drift {drift:.1e}, byte-identical {identical}, raster hits conserved {conserved}",
                seeds.len()
            ),
        ))
    })
}

/// Real eigenvalues from the characteristic polynomial `λ² − tr λ + det`.
fn char_poly_eigs(m: &Mat64) -> (f64, f64) {
    let (tr, det) = (m.trace(), m.det());
    let disc = (tr * tr - 4.0 * det).sqrt();
    ((tr + disc) / 2.0, (tr - disc) / 2.0)
}

pub fn spectral_oracles() -> Check {
    timed(11, "spectral oracles", 1, || {
        let mut worst: f64 = 0.0;
        for i in 1..=100 {
            let p = Params64::from_theta(0.78 * i as f64 / 100.0)?;
            let sp = spectral(&p)?;
            let b = hyperbolic_matrix(&p);
            let (hi, lo) = char_poly_eigs(&b);
            worst = worst
                .max((sp.lambda - hi).abs())
                .max((1.0 / sp.lambda - lo).abs());
            // Eigenvectors from the first row of B − λI.
            for (v, l) in [(sp.v1, hi), (sp.v2, lo)] {
                let e = Point64::new(b.b, l - b.a);
                worst = worst.max((e.cross(v) / (e.norm() * v.norm())).abs());
            }
        }
        let p = Params64::from_theta(FRAC_PI_8)?;
        let k_err = (k_of_t(p.t)? - 3.0).abs();
        let b3 = hyperbolic_matrix(&p).pow(3);
        let hit = b3
            .apply(Point64::new(p.t, 1.0 - p.s))
            .dist(Point64::new(p.s, p.t));
        Ok((
            worst < 1e-10 && k_err < 1e-9 && hit < 1e-12,
            format!("eigen mismatch {worst:.1e}, |K(t(π/8)) - 3| = {k_err:.1e}, |B³P₄ - P₁| = {hit:.1e}"),
        ))
    })
}

/// All eleven checks in order; `scratch` receives the figure outputs.
pub fn run_all(scratch: &Path) -> Vec<Check> {
    vec![
        algebraic_identities(),
        symmetry_suite(),
        boundary_and_continuity(),
        theta_three(),
        certified_circles(),
        cancellation_structure(),
        foliation(),
        return_map(),
        rotation_bound(),
        figure_reproduction(scratch),
        spectral_oracles(),
    ]
}
