//! Run descriptions, seed and raster tokens, and the key=value config file.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use pwa_core::Point64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, Result};
use crate::theta::parse_theta;

pub const DEFAULT_RASTER: (usize, usize) = (2000, 2000);
pub const DEFAULT_GAMMA: f64 = 0.35;
pub const MIN_RASTER: usize = 16;

/// Seeds used for the θ = π/11 ensemble when none are given. All three lie
/// outside the disc rotated rigidly by the centre piece.
pub const FIG4_SEEDS: [(f64, f64); 3] = [(0.10, 0.50), (0.08, 0.50), (0.06, 0.50)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Format {
    Csv,
    Ppm,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "ppm" | "pgm" => Ok(Format::Ppm),
            other => Err(CliError::Usage(format!(
                "unknown format {other:?}, expected csv or ppm"
            ))),
        }
    }
}

/// `x,y`, or `random:<n>` for an interior point drawn from a seeded generator.
pub fn parse_seed(token: &str) -> Result<Point64> {
    let token = token.trim();
    let p = if let Some(rest) = token.strip_prefix("random:") {
        let n: u64 = rest
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad random seed {rest:?}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(n);
        Point64::new(rng.gen_range(0.001..0.999), rng.gen_range(0.001..0.999))
    } else {
        let (x, y) = token
            .split_once(',')
            .ok_or_else(|| CliError::Usage(format!("seed {token:?} is not x,y")))?;
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad coordinate {s:?} in seed {token:?}")))
        };
        Point64::new(num(x)?, num(y)?)
    };
    if !(p.x > 0.0 && p.x < 1.0 && p.y > 0.0 && p.y < 1.0) {
        return Err(CliError::Usage(format!(
            "seed {token:?} is not inside the open unit square"
        )));
    }
    Ok(p)
}

/// `WxH`, both at least [`MIN_RASTER`].
pub fn parse_raster(token: &str) -> Result<(usize, usize)> {
    let bad = || {
        CliError::Usage(format!(
            "raster {token:?} is not WxH with sides >= {MIN_RASTER}"
        ))
    };
    let (w, h) = token.trim().split_once(['x', 'X']).ok_or_else(bad)?;
    let w: usize = w.trim().parse().map_err(|_| bad())?;
    let h: usize = h.trim().parse().map_err(|_| bad())?;
    if w < MIN_RASTER || h < MIN_RASTER {
        return Err(bad());
    }
    Ok((w, h))
}

/// One orbit-ensemble run.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub theta: f64,
    pub seeds: Vec<Point64>,
    pub iterations: usize,
    pub output: PathBuf,
    pub formats: Vec<Format>,
    pub raster: (usize, usize),
    pub gamma: f64,
}

impl ExperimentSpec {
    pub fn new(
        theta: &str,
        seeds: &[&str],
        iterations: usize,
        output: impl Into<PathBuf>,
    ) -> Result<Self> {
        let spec = ExperimentSpec {
            theta: parse_theta(theta)?,
            seeds: seeds.iter().map(|s| parse_seed(s)).collect::<Result<_>>()?,
            iterations,
            output: output.into(),
            formats: vec![Format::Csv, Format::Ppm],
            raster: DEFAULT_RASTER,
            gamma: DEFAULT_GAMMA,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(CliError::Usage("iterations must be at least 1".into()));
        }
        if self.seeds.is_empty() {
            return Err(CliError::Usage("no seeds".into()));
        }
        if self.raster.0 < MIN_RASTER || self.raster.1 < MIN_RASTER {
            return Err(CliError::Usage(format!(
                "raster sides must be >= {MIN_RASTER}"
            )));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(CliError::Usage("gamma must be positive".into()));
        }
        Ok(())
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    pub fn seed_path(&self, i: usize) -> PathBuf {
        with_suffix(&self.output, &format!("_seed{i}.csv"))
    }

    pub fn raster_path(&self) -> PathBuf {
        with_suffix(&self.output, ".ppm")
    }
}

pub(crate) fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Settings read from a config file. Keys mirror the long flag names with
/// `-` replaced by `_`; `theta`, `seed` and `format` may be arrays.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FileConfig {
    pub theta: Vec<String>,
    pub seed: Vec<String>,
    pub iters: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Vec<String>,
    pub raster: Option<String>,
    pub gamma: Option<f64>,
    pub k: Option<u32>,
    pub n_max: Option<u32>,
    pub tol: Option<f64>,
    pub seeds_per_theta: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| CliError::Usage(format!("config: {e}")))?;
        let mut cfg = FileConfig::default();
        for (key, value) in &table {
            let bad = || CliError::Usage(format!("config: bad value for {key}"));
            match key.as_str() {
                "theta" => cfg.theta = strings(value).ok_or_else(bad)?,
                "seed" | "seeds" => cfg.seed = strings(value).ok_or_else(bad)?,
                "format" => cfg.format = strings(value).ok_or_else(bad)?,
                "iters" => cfg.iters = Some(uint(value).ok_or_else(bad)? as usize),
                "out" => cfg.out = Some(value.as_str().ok_or_else(bad)?.into()),
                "raster" => cfg.raster = Some(value.as_str().ok_or_else(bad)?.to_string()),
                "gamma" => cfg.gamma = Some(float(value).ok_or_else(bad)?),
                "k" => cfg.k = Some(uint(value).ok_or_else(bad)? as u32),
                "n_max" => cfg.n_max = Some(uint(value).ok_or_else(bad)? as u32),
                "tol" => cfg.tol = Some(float(value).ok_or_else(bad)?),
                "seeds_per_theta" => {
                    cfg.seeds_per_theta = Some(uint(value).ok_or_else(bad)? as usize)
                }
                other => return Err(CliError::Usage(format!("config: unknown key {other:?}"))),
            }
        }
        Ok(cfg)
    }
}

fn scalar_string(v: &toml::Value) -> Option<String> {
    match v {
        toml::Value::String(s) => Some(s.clone()),
        toml::Value::Float(f) => Some(format!("{f:?}")),
        toml::Value::Integer(i) => Some(i.to_string()),
        _ => None,
    }
}

fn strings(v: &toml::Value) -> Option<Vec<String>> {
    match v {
        toml::Value::Array(items) => items.iter().map(scalar_string).collect(),
        other => scalar_string(other).map(|s| vec![s]),
    }
}

fn uint(v: &toml::Value) -> Option<u64> {
    v.as_integer().and_then(|i| u64::try_from(i).ok())
}

fn float(v: &toml::Value) -> Option<f64> {
    v.as_float().or_else(|| v.as_integer().map(|i| i as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds() {
        assert_eq!(parse_seed("0.25, 0.5").unwrap(), Point64::new(0.25, 0.5));
        assert_eq!(
            parse_seed("random:4").unwrap(),
            parse_seed("random:4").unwrap()
        );
        assert_ne!(
            parse_seed("random:4").unwrap(),
            parse_seed("random:5").unwrap()
        );
        assert!(parse_seed("0,0.5").is_err());
        assert!(parse_seed("0.5").is_err());
        assert!(parse_seed("a,b").is_err());
    }

    #[test]
    fn rasters() {
        assert_eq!(parse_raster("640x480").unwrap(), (640, 480));
        assert!(parse_raster("8x8").is_err());
        assert!(parse_raster("640").is_err());
    }

    #[test]
    fn config_file() {
        let cfg = FileConfig::parse(
            "theta = \"pi/11\"\nseed = [\"0.3,0.5\", \"random:2\"]\niters = 100\nformat = [\"csv\", \"ppm\"]\ntol = 1e-9\n",
        )
        .unwrap();
        assert_eq!(cfg.theta, vec!["pi/11"]);
        assert_eq!(cfg.seed.len(), 2);
        assert_eq!(cfg.iters, Some(100));
        assert_eq!(cfg.tol, Some(1e-9));
        assert!(FileConfig::parse("colour = 3").is_err());
        assert!(FileConfig::parse("iters = -3").is_err());
        assert_eq!(FileConfig::parse("theta = 0.3").unwrap().theta, vec!["0.3"]);
    }
}
