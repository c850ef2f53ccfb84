//! Batch front end for the square map: orbit ensembles, invariant circles,
//! rotation-number scans and the certification suite.

pub mod app;
pub mod certify;
pub mod commands;
pub mod error;
pub mod raster;
pub mod spec;
pub mod theta;

pub use commands::{cmd_circles, cmd_orbit, cmd_scan, default_scan_seeds};
pub use error::{CliError, Result};
pub use raster::RasterAccumulator;
pub use spec::{parse_raster, parse_seed, ExperimentSpec, FileConfig, Format};
pub use theta::parse_theta;

/// Worker pool sized by `PWA_THREADS`, or rayon's default when unset.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("PWA_THREADS") {
        let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            CliError::Usage(format!("PWA_THREADS={v:?} is not a positive integer"))
        })?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}
