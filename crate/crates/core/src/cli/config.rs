use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::closed_forms::PotentialParams;
use crate::error::Error;
use crate::grid::Grid;
use crate::hierarchy::BoundaryCondition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Parameters shared by every subcommand. Loaded from `--config` (JSON) when
/// given, then overridden field by field by explicit flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub g: f64,
    pub a: f64,
    pub bc: BoundaryCondition,
    pub x_max: f64,
    /// Intervals per grid panel.
    pub n_points: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub out: PathBuf,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            g: 1.0,
            a: 2.0,
            bc: BoundaryCondition::II,
            x_max: 4.0,
            n_points: 2000,
            tol: 1e-6,
            max_iter: 20,
            out: PathBuf::from("out"),
            format: OutputFormat::Csv,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot parse config {path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error(transparent)]
    Invalid(#[from] Error),
}

fn parse_bc(s: &str) -> Result<BoundaryCondition, String> {
    s.parse()
}

#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// JSON file with any subset of the run parameters.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Coupling g.
    #[arg(long, global = true)]
    pub g: Option<f64>,
    /// Shape parameter a.
    #[arg(long, global = true)]
    pub a: Option<f64>,
    /// Boundary condition: I (f(inf) = 1) or II (f(0) = 1).
    #[arg(long, global = true, value_parser = parse_bc)]
    pub bc: Option<BoundaryCondition>,
    /// Truncation point of the grid.
    #[arg(long = "x-max", global = true)]
    pub x_max: Option<f64>,
    /// Intervals per grid panel ([0,1] and [1,x_max]); even, at least 4.
    #[arg(long = "n-points", global = true)]
    pub n_points: Option<usize>,
    /// Stop when |E_n - E_(n-1)| falls below this.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long = "max-iter", global = true)]
    pub max_iter: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn resolve(o: &Overrides) -> Result<Self, ConfigError> {
        let mut c = match &o.config {
            Some(path) => Self::load(path)?,
            None => Self::default(),
        };
        if let Some(v) = o.g {
            c.g = v;
        }
        if let Some(v) = o.a {
            c.a = v;
        }
        if let Some(v) = o.bc {
            c.bc = v;
        }
        if let Some(v) = o.x_max {
            c.x_max = v;
        }
        if let Some(v) = o.n_points {
            c.n_points = v;
        }
        if let Some(v) = o.tol {
            c.tol = v;
        }
        if let Some(v) = o.max_iter {
            c.max_iter = v;
        }
        if let Some(v) = &o.out {
            c.out = v.clone();
        }
        if let Some(v) = o.format {
            c.format = v;
        }
        Ok(c)
    }

    /// Potential parameters, without the mixing-coefficient check.
    pub fn params(&self) -> Result<PotentialParams<f64>, ConfigError> {
        Ok(PotentialParams::new(self.g, self.a)?)
    }

    pub fn grid(&self) -> Result<Grid<f64>, ConfigError> {
        Ok(Grid::two_panel(self.x_max, self.n_points)?)
    }

    /// Everything a solve needs, with the specific constraint named on failure.
    pub fn validate_for_solve(&self) -> Result<(PotentialParams<f64>, Grid<f64>), ConfigError> {
        let p = self.params()?;
        p.ensure_positive_gamma()?;
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "tol",
                value: self.tol,
                constraint: "tolerance must be finite and non-negative",
            }
            .into());
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter {
                name: "max_iter",
                value: 0.0,
                constraint: "at least one iteration is required",
            }
            .into());
        }
        Ok((p, self.grid()?))
    }
}
