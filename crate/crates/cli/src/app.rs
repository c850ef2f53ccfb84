//! Argument handling for the `pwa` binary.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use pwa_core::circles::golden::sig17;

use crate::certify;
use crate::commands::{cmd_circles, cmd_orbit, cmd_scan, default_scan_seeds};
use crate::error::{CliError, Result};
use crate::spec::{
    parse_raster, parse_seed, ExperimentSpec, FileConfig, Format, DEFAULT_GAMMA, DEFAULT_RASTER,
    FIG4_SEEDS,
};
use crate::theta::parse_theta;

#[derive(Debug, Parser)]
#[command(
    name = "pwa",
    version,
    about = "Explore the piecewise affine square map"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Iterate seeds, writing per-seed CSVs and a density raster.
    Orbit(Opts),
    /// Solve θ_K and certify the invariant polygons Γ_K^N.
    Circles(Opts),
    /// Estimate rotation numbers over θ values and seeds.
    Scan(Opts),
    /// Run the property suite and print a pass/fail table.
    Certify(Opts),
}

#[derive(Debug, Default, Args)]
struct Opts {
    /// Angle: decimal radians, `pi/<n>` or `<m>pi/<n>`. Repeatable for scan.
    #[arg(long)]
    theta: Vec<String>,
    /// Initial point `x,y` or `random:<seed>`. Repeatable.
    #[arg(long)]
    seed: Vec<String>,
    /// Iterations per seed.
    #[arg(long)]
    iters: Option<usize>,
    /// Output path prefix.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output kind, csv or ppm. Repeatable.
    #[arg(long)]
    format: Vec<String>,
    /// Raster size `WxH`.
    #[arg(long)]
    raster: Option<String>,
    /// Gray-level exponent for the raster.
    #[arg(long)]
    gamma: Option<f64>,
    /// Number of steps K of the hyperbolic piece.
    #[arg(long)]
    k: Option<u32>,
    /// Largest N for Γ_K^N.
    #[arg(long)]
    n_max: Option<u32>,
    /// Certification tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Default seeds per θ for scan when no --seed is given.
    #[arg(long)]
    seeds_per_theta: Option<usize>,
    /// key=value settings file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Opts {
    /// Fills unset flags from the config file.
    fn merged(mut self) -> Result<Self> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = FileConfig::load(&path)?;
        if self.theta.is_empty() {
            self.theta = file.theta;
        }
        if self.seed.is_empty() {
            self.seed = file.seed;
        }
        if self.format.is_empty() {
            self.format = file.format;
        }
        self.iters = self.iters.or(file.iters);
        self.out = self.out.or(file.out);
        self.raster = self.raster.or(file.raster);
        self.gamma = self.gamma.or(file.gamma);
        self.k = self.k.or(file.k);
        self.n_max = self.n_max.or(file.n_max);
        self.tol = self.tol.or(file.tol);
        self.seeds_per_theta = self.seeds_per_theta.or(file.seeds_per_theta);
        Ok(self)
    }

    fn single_theta(&self, default: &str) -> Result<f64> {
        match self.theta.as_slice() {
            [] => parse_theta(default),
            [one] => parse_theta(one),
            _ => Err(CliError::Usage("only one --theta is accepted here".into())),
        }
    }
}

fn orbit(opts: Opts) -> Result<i32> {
    let seeds = if opts.seed.is_empty() {
        FIG4_SEEDS
            .iter()
            .map(|&(x, y)| pwa_core::Point64::new(x, y))
            .collect()
    } else {
        opts.seed
            .iter()
            .map(|s| parse_seed(s))
            .collect::<Result<_>>()?
    };
    let formats = if opts.format.is_empty() {
        vec![Format::Csv, Format::Ppm]
    } else {
        opts.format
            .iter()
            .map(|f| f.parse())
            .collect::<Result<_>>()?
    };
    let spec = ExperimentSpec {
        theta: opts.single_theta("pi/11")?,
        seeds,
        iterations: opts.iters.unwrap_or(500_000),
        output: opts.out.unwrap_or_else(|| "pwa_orbit".into()),
        formats,
        raster: opts
            .raster
            .as_deref()
            .map(parse_raster)
            .transpose()?
            .unwrap_or(DEFAULT_RASTER),
        gamma: opts.gamma.unwrap_or(DEFAULT_GAMMA),
    };
    let out = cmd_orbit(&spec)?;
    println!("seed,x,y,min_radius,max_radius");
    for s in &out.seeds {
        println!(
            "{},{},{},{},{}",
            s.index,
            sig17(s.seed.x),
            sig17(s.seed.y),
            sig17(s.full_range.0),
            sig17(s.full_range.1)
        );
    }
    for f in &out.files {
        eprintln!("wrote {}", f.display());
    }
    Ok(0)
}

fn circles(opts: Opts) -> Result<i32> {
    let out = opts.out.unwrap_or_else(|| "pwa_circles".into());
    let o = cmd_circles(
        opts.k.unwrap_or(3),
        opts.n_max.unwrap_or(10),
        &out,
        opts.tol.unwrap_or(1e-8),
    )?;
    println!(
        "K = {}, theta = {}, residual {:.1e}",
        o.theta_k.k,
        sig17(o.theta_k.theta),
        o.theta_k.residual
    );
    for r in &o.rows {
        println!(
            "N = {:>3}  vertices {:>4}  rho {:>6}  closure {:.1e}  invariance {:.1e}",
            r.n, r.vertices, r.rho, r.closure_residual, r.invariance_residual
        );
    }
    Ok(0)
}

fn scan(opts: Opts) -> Result<i32> {
    if opts.theta.is_empty() {
        return Err(CliError::Usage("scan needs at least one --theta".into()));
    }
    let thetas = opts
        .theta
        .iter()
        .map(|t| parse_theta(t))
        .collect::<Result<Vec<_>>>()?;
    let seeds = if opts.seed.is_empty() {
        default_scan_seeds(opts.seeds_per_theta.unwrap_or(8))
    } else {
        opts.seed
            .iter()
            .map(|s| parse_seed(s))
            .collect::<Result<_>>()?
    };
    let out = opts.out.unwrap_or_else(|| "pwa_scan".into());
    let res = cmd_scan(&thetas, &seeds, opts.iters.unwrap_or(10_000), &out)?;
    println!(
        "{} rows, {} failed, wrote {}",
        res.rows.len(),
        res.failures.len(),
        res.file.display()
    );
    Ok(0)
}

fn certify_all(opts: Opts) -> Result<i32> {
    let (dir, cleanup) = match opts.out {
        Some(d) => (d, false),
        None => (
            std::env::temp_dir().join(format!("pwa-certify-{}", std::process::id())),
            true,
        ),
    };
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let checks = certify::run_all(&dir);
    if cleanup {
        let _ = std::fs::remove_dir_all(&dir);
    }
    for c in &checks {
        println!("{}", c.line());
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!("{} passed, {failed} failed", checks.len() - failed);
    Ok(if failed == 0 { 0 } else { 1 })
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = crate::thread_pool().and_then(|pool| {
        pool.install(|| match cli.command {
            Command::Orbit(o) => o.merged().and_then(orbit),
            Command::Circles(o) => o.merged().and_then(circles),
            Command::Scan(o) => o.merged().and_then(scan),
            Command::Certify(o) => o.merged().and_then(certify_all),
        })
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("pwa: {e}");
            e.exit_code()
        }
    }
}
