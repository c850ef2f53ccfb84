//! The `orbit`, `circles` and `scan` subcommands as library calls.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use pwa_core::circles::golden::{self, sig17, ThetaKRow};
use pwa_core::circles::{
    build_gamma, rotation_number, solve_theta_k, verify_invariant_circle, x_point,
};
use pwa_core::{Map64, Params64, Point64};
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::raster::RasterAccumulator;
use crate::spec::{with_suffix, ExperimentSpec, Format};

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

fn finish(mut w: BufWriter<File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Radius statistics of one seed's orbit about the centre.
#[derive(Clone, Debug, PartialEq)]
pub struct SeedSummary {
    pub index: usize,
    pub seed: Point64,
    /// `(min, max)` radius over iterates `0..=n/2`.
    pub half_range: (f64, f64),
    /// `(min, max)` radius over the whole orbit.
    pub full_range: (f64, f64),
}

impl SeedSummary {
    /// How far the radius range moved over the second half of the orbit.
    pub fn drift(&self) -> f64 {
        (self.full_range.0 - self.half_range.0)
            .abs()
            .max((self.full_range.1 - self.half_range.1).abs())
    }
}

#[derive(Clone, Debug)]
pub struct OrbitOutput {
    pub seeds: Vec<SeedSummary>,
    pub files: Vec<PathBuf>,
    pub raster_total: u64,
}

fn run_seed(
    map: &Map64,
    spec: &ExperimentSpec,
    index: usize,
) -> Result<(SeedSummary, Option<RasterAccumulator>)> {
    let seed = spec.seeds[index];
    let z = map.partition.z;
    let n = spec.iterations;
    let mut csv = if spec.wants(Format::Csv) {
        let path = spec.seed_path(index);
        let mut w = create(&path)?;
        writeln!(w, "step,x,y").map_err(|e| CliError::io(&path, e))?;
        Some((w, path))
    } else {
        None
    };
    let mut raster = spec
        .wants(Format::Ppm)
        .then(|| RasterAccumulator::new(spec.raster.0, spec.raster.1, spec.gamma));
    let r0 = seed.dist(z);
    let mut range = (r0, r0);
    let mut half_range = range;
    let mut p = seed;
    for step in 0..=n {
        if step > 0 {
            p = map.apply(p)?;
            if let Some(r) = raster.as_mut() {
                r.add(p);
            }
            let r = p.dist(z);
            range = (range.0.min(r), range.1.max(r));
        }
        if let Some((w, path)) = csv.as_mut() {
            writeln!(w, "{step},{},{}", sig17(p.x), sig17(p.y))
                .map_err(|e| CliError::io(&*path, e))?;
        }
        if step == n / 2 {
            half_range = range;
        }
    }
    if let Some((w, path)) = csv {
        finish(w, &path)?;
    }
    Ok((
        SeedSummary {
            index,
            seed,
            half_range,
            full_range: range,
        },
        raster,
    ))
}

/// Iterates every seed, writing one CSV per seed and one raster of iterates
/// `1..=n` of all seeds.
pub fn cmd_orbit(spec: &ExperimentSpec) -> Result<OrbitOutput> {
    spec.validate()?;
    let map = Map64::from_theta(spec.theta)?;
    let results: Vec<_> = (0..spec.seeds.len())
        .into_par_iter()
        .map(|i| run_seed(&map, spec, i))
        .collect::<Result<_>>()?;
    let mut files = Vec::new();
    if spec.wants(Format::Csv) {
        files.extend((0..spec.seeds.len()).map(|i| spec.seed_path(i)));
    }
    let mut raster_total = 0;
    if spec.wants(Format::Ppm) {
        let mut total = RasterAccumulator::new(spec.raster.0, spec.raster.1, spec.gamma);
        for (_, r) in &results {
            total.merge(r.as_ref().expect("raster requested"));
        }
        raster_total = total.total();
        let path = spec.raster_path();
        let mut w = create(&path)?;
        total
            .write_pgm(&mut w)
            .map_err(|e| CliError::io(&path, e))?;
        finish(w, &path)?;
        files.push(path);
    }
    Ok(OrbitOutput {
        seeds: results.into_iter().map(|(s, _)| s).collect(),
        files,
        raster_total,
    })
}

/// Certification of one `Γ_K^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleRow {
    pub k: u32,
    pub n: u32,
    pub vertices: usize,
    pub rho: String,
    /// Rotation number read off the winding over one period.
    pub rho_winding: f64,
    pub closure_residual: f64,
    pub invariance_residual: f64,
    pub certified: bool,
}

#[derive(Clone, Debug)]
pub struct CirclesOutput {
    pub theta_k: ThetaKRow,
    pub rows: Vec<CircleRow>,
    pub files: Vec<PathBuf>,
}

pub const CIRCLES_HEADER: &str =
    "K,N,vertices,rho,rho_winding,closure_residual,invariance_residual,certified";

fn certify_circle(
    p: &Params64,
    map: &Map64,
    k: u32,
    n: u32,
    tol: f64,
) -> Result<(CircleRow, Vec<Point64>)> {
    let g = build_gamma(p, k, n)?;
    let x = x_point(p, k, n)?;
    let period = g.len();
    let trace = map.orbit(x, period)?;
    let closure = trace.points[period].dist(x);
    let rho_winding = rotation_number(&trace)?;
    let report = verify_invariant_circle(&g, map, 4 * period.max(100), tol);
    let rho = g.rho.value();
    let certified = closure < tol
        && period == 4 * (k + n) as usize
        && (rho_winding - rho).abs() < 1e-12
        && report.passed();
    let rho_str = match g.rho {
        pwa_core::circles::Rho::Exact(r) => r.to_string(),
        pwa_core::circles::Rho::Estimate(v) => sig17(v),
    };
    let row = CircleRow {
        k,
        n,
        vertices: period,
        rho: rho_str,
        rho_winding,
        closure_residual: closure,
        invariance_residual: report.max_residual,
        certified,
    };
    Ok((row, g.vertices))
}

/// Solves `θ_K` and writes `Γ_K^N` for `N = 0..=n_max`, a summary, the
/// `θ_K` row and a partition dump.
pub fn cmd_circles(k: u32, n_max: u32, out: &Path, tol: f64) -> Result<CirclesOutput> {
    if k < 3 {
        return Err(CliError::Usage(format!("K must be at least 3, got {k}")));
    }
    let p = solve_theta_k::<f64>(k)?;
    let map = Map64::new(p);
    let results: Vec<_> = (0..=n_max)
        .into_par_iter()
        .map(|n| certify_circle(&p, &map, k, n, tol))
        .collect::<Result<_>>()?;

    let mut files = Vec::new();
    for (row, verts) in &results {
        let path = with_suffix(out, &format!("_K{}_N{}.csv", row.k, row.n));
        let mut w = create(&path)?;
        let io = |e| CliError::io(&path, e);
        writeln!(w, "index,x,y").map_err(io)?;
        for (i, v) in verts.iter().enumerate() {
            writeln!(w, "{i},{},{}", sig17(v.x), sig17(v.y)).map_err(io)?;
        }
        finish(w, &path)?;
        files.push(path);
    }

    let path = with_suffix(out, &format!("_K{k}_summary.csv"));
    let mut w = create(&path)?;
    let io = |e| CliError::io(&path, e);
    writeln!(w, "{CIRCLES_HEADER}").map_err(io)?;
    for (r, _) in &results {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.k,
            r.n,
            r.vertices,
            r.rho,
            sig17(r.rho_winding),
            sig17(r.closure_residual),
            sig17(r.invariance_residual),
            r.certified
        )
        .map_err(io)?;
    }
    finish(w, &path)?;
    files.push(path);

    let theta_k = golden::theta_k_row(k)?;
    let path = with_suffix(out, "_theta_k.csv");
    let mut w = create(&path)?;
    w.write_all(golden::to_csv(&[theta_k]).as_bytes())
        .map_err(|e| CliError::io(&path, e))?;
    finish(w, &path)?;
    files.push(path);

    let path = with_suffix(out, "_partition.txt");
    let mut w = create(&path)?;
    w.write_all(map.partition.debug_dump().as_bytes())
        .map_err(|e| CliError::io(&path, e))?;
    finish(w, &path)?;
    files.push(path);

    let rows: Vec<CircleRow> = results.into_iter().map(|(r, _)| r).collect();
    let failed: Vec<u32> = rows.iter().filter(|r| !r.certified).map(|r| r.n).collect();
    if !failed.is_empty() {
        return Err(CliError::Certification(format!(
            "K = {k}: circles N = {failed:?} not certified"
        )));
    }
    Ok(CirclesOutput {
        theta_k,
        rows,
        files,
    })
}

/// Seeds on the horizontal through the centre, from near `Z` out to near `E₁E₄`.
pub fn default_scan_seeds(m: usize) -> Vec<Point64> {
    (1..=m)
        .map(|j| Point64::new(0.5 * (1.0 - j as f64 / (m + 1) as f64), 0.5))
        .collect()
}

pub const SCAN_HEADER: &str = "theta,seed,rho_estimate,min_radius,max_radius";

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub theta: f64,
    pub seed: usize,
    pub rho_estimate: f64,
    pub min_radius: f64,
    pub max_radius: f64,
}

impl ScanRow {
    pub fn bound(&self) -> f64 {
        0.25 - self.theta / std::f64::consts::PI
    }
}

#[derive(Clone, Debug)]
pub struct ScanOutput {
    pub rows: Vec<ScanRow>,
    /// `(theta, seed, message)` for rows that could not be estimated.
    pub failures: Vec<(f64, usize, String)>,
    pub file: PathBuf,
}

fn scan_row(theta: f64, index: usize, seed: Point64, iterations: usize) -> Result<ScanRow> {
    let map = Map64::from_theta(theta)?;
    let trace = map.orbit(seed, iterations)?;
    let rho_estimate = rotation_number(&trace)?;
    let (min_radius, max_radius) = trace.radius_range();
    Ok(ScanRow {
        theta,
        seed: index,
        rho_estimate,
        min_radius,
        max_radius,
    })
}

/// Rotation-number survey over `thetas × seeds`. Rows that fail are logged
/// and skipped; rows above `1/4 − θ/π + 1e−4` fail the run after writing.
pub fn cmd_scan(
    thetas: &[f64],
    seeds: &[Point64],
    iterations: usize,
    out: &Path,
) -> Result<ScanOutput> {
    if thetas.is_empty() || seeds.is_empty() || iterations == 0 {
        return Err(CliError::Usage(
            "scan needs thetas, seeds and iterations >= 1".into(),
        ));
    }
    let jobs: Vec<(f64, usize, Point64)> = thetas
        .iter()
        .flat_map(|&th| seeds.iter().enumerate().map(move |(i, &s)| (th, i, s)))
        .collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(th, i, s)| (th, i, scan_row(th, i, s, iterations)))
        .collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (th, i, r) in results {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => {
                eprintln!("scan: theta {th} seed {i}: {e}");
                failures.push((th, i, e.to_string()));
            }
        }
    }
    let file = with_suffix(out, ".csv");
    let mut w = create(&file)?;
    let io = |e| CliError::io(&file, e);
    writeln!(w, "{SCAN_HEADER}").map_err(io)?;
    for r in &rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            sig17(r.theta),
            r.seed,
            sig17(r.rho_estimate),
            sig17(r.min_radius),
            sig17(r.max_radius)
        )
        .map_err(io)?;
    }
    finish(w, &file)?;
    let over: Vec<&ScanRow> = rows
        .iter()
        .filter(|r| r.rho_estimate > r.bound() + 1e-4)
        .collect();
    if let Some(r) = over.first() {
        return Err(CliError::Certification(format!(
            "{} rows exceed the rotation bound, first theta {} seed {}: {} > {}",
            over.len(),
            r.theta,
            r.seed,
            r.rho_estimate,
            r.bound()
        )));
    }
    Ok(ScanOutput {
        rows,
        failures,
        file,
    })
}
