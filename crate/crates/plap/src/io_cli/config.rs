//! Run configuration with three-layer precedence.
//!
//! Settings resolve as: command-line flags over config-file entries over
//! built-in defaults. The config file is a flat list of `key = value`
//! lines; `#` starts a comment and blank lines are ignored. Keys use the
//! same names as the fields here (`mu_lo`, `max_denominator`, ...).

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Output format for tabular artifacts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::InvalidConfig(format!(
                "unknown format {other:?}: expected csv or json"
            ))),
        }
    }
}

/// Selects one of the two degenerate orbit families for reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseKind {
    /// Collinear oscillation at zero momentum.
    Zero,
    /// Circular orbit at unit momentum.
    Unit,
}

impl FromStr for BaseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(Self::Zero),
            "unit" => Ok(Self::Unit),
            other => Err(Error::InvalidConfig(format!(
                "unknown base orbit {other:?}: expected zero or unit"
            ))),
        }
    }
}

/// Fully resolved settings for one command invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub p: f64,
    pub mu_lo: f64,
    pub mu_hi: f64,
    pub mu_count: usize,
    pub max_denominator: u64,
    pub n_max: u64,
    pub ell: Option<u64>,
    pub m: Option<u64>,
    pub base: Option<BaseKind>,
    pub format: OutputFormat,
    pub out: PathBuf,
    pub quad_rel_tol: f64,
    pub ode_tol: f64,
    pub root_tol: f64,
    pub independence_tol: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            p: 3.0,
            mu_lo: 1e-4,
            mu_hi: 1.0 - 1e-6,
            mu_count: 101,
            max_denominator: 50,
            n_max: 3,
            ell: None,
            m: None,
            base: None,
            format: OutputFormat::Csv,
            out: PathBuf::from("plap-out"),
            quad_rel_tol: 1e-11,
            ode_tol: 1e-11,
            root_tol: 1e-11,
            independence_tol: 1e-9,
        }
    }
}

impl RunConfig {
    /// Applies the config file (if any), then the CLI overlay, then checks
    /// the result for consistency.
    pub fn resolve(file: Option<&Path>, cli: ConfigOverlay) -> Result<Self> {
        let mut cfg = Self::default();
        if let Some(path) = file {
            ConfigOverlay::from_file(path)?.apply(&mut cfg);
        }
        cli.apply(&mut cfg);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p <= 1.0 || !self.p.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "exponent p = {} must be a finite number above 1",
                self.p
            )));
        }
        if !(self.mu_lo > 0.0 && self.mu_lo < self.mu_hi && self.mu_hi <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "momentum window [{}, {}] must satisfy 0 < lo < hi <= 1",
                self.mu_lo, self.mu_hi
            )));
        }
        if self.mu_count < 2 {
            return Err(Error::InvalidConfig(format!(
                "mu_count = {} must be at least 2",
                self.mu_count
            )));
        }
        if self.max_denominator < 2 {
            return Err(Error::InvalidConfig(format!(
                "max_denominator = {} must be at least 2",
                self.max_denominator
            )));
        }
        if self.n_max < 1 {
            return Err(Error::InvalidConfig("n_max must be at least 1".into()));
        }
        for (name, tol) in [
            ("quad_rel_tol", self.quad_rel_tol),
            ("ode_tol", self.ode_tol),
            ("root_tol", self.root_tol),
            ("independence_tol", self.independence_tol),
        ] {
            if !(tol > 0.0 && tol < 1.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} = {tol} must lie in (0, 1)"
                )));
            }
        }
        Ok(())
    }
}

/// A sparse set of overrides; `None` keeps the lower-precedence value.
#[derive(Debug, Clone, Default)]
pub struct ConfigOverlay {
    pub p: Option<f64>,
    pub mu_lo: Option<f64>,
    pub mu_hi: Option<f64>,
    pub mu_count: Option<usize>,
    pub max_denominator: Option<u64>,
    pub n_max: Option<u64>,
    pub ell: Option<u64>,
    pub m: Option<u64>,
    pub base: Option<BaseKind>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub quad_rel_tol: Option<f64>,
    pub ode_tol: Option<f64>,
    pub root_tol: Option<f64>,
    pub independence_tol: Option<f64>,
}

fn parse_value<T>(key: &str, raw: &str) -> Result<T>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    raw.parse()
        .map_err(|err| Error::InvalidConfig(format!("bad value {raw:?} for key {key:?}: {err}")))
}

impl ConfigOverlay {
    /// Parses a flat `key = value` config file.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let mut overlay = Self::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "{}:{}: expected key = value, got {line:?}",
                    path.display(),
                    lineno + 1
                ))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "p" => overlay.p = Some(parse_value(key, value)?),
                "mu_lo" => overlay.mu_lo = Some(parse_value(key, value)?),
                "mu_hi" => overlay.mu_hi = Some(parse_value(key, value)?),
                "mu_count" => overlay.mu_count = Some(parse_value(key, value)?),
                "max_denominator" => overlay.max_denominator = Some(parse_value(key, value)?),
                "n_max" => overlay.n_max = Some(parse_value(key, value)?),
                "ell" => overlay.ell = Some(parse_value(key, value)?),
                "m" => overlay.m = Some(parse_value(key, value)?),
                "base" => overlay.base = Some(value.parse()?),
                "format" => overlay.format = Some(value.parse()?),
                "out" => overlay.out = Some(PathBuf::from(value)),
                "quad_rel_tol" => overlay.quad_rel_tol = Some(parse_value(key, value)?),
                "ode_tol" => overlay.ode_tol = Some(parse_value(key, value)?),
                "root_tol" => overlay.root_tol = Some(parse_value(key, value)?),
                "independence_tol" => overlay.independence_tol = Some(parse_value(key, value)?),
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "{}:{}: unknown key {other:?}",
                        path.display(),
                        lineno + 1
                    )))
                }
            }
        }
        Ok(overlay)
    }

    /// Writes every present value onto `cfg`.
    pub fn apply(&self, cfg: &mut RunConfig) {
        if let Some(v) = self.p {
            cfg.p = v;
        }
        if let Some(v) = self.mu_lo {
            cfg.mu_lo = v;
        }
        if let Some(v) = self.mu_hi {
            cfg.mu_hi = v;
        }
        if let Some(v) = self.mu_count {
            cfg.mu_count = v;
        }
        if let Some(v) = self.max_denominator {
            cfg.max_denominator = v;
        }
        if let Some(v) = self.n_max {
            cfg.n_max = v;
        }
        if let Some(v) = self.ell {
            cfg.ell = Some(v);
        }
        if let Some(v) = self.m {
            cfg.m = Some(v);
        }
        if let Some(v) = self.base {
            cfg.base = Some(v);
        }
        if let Some(v) = self.format {
            cfg.format = v;
        }
        if let Some(v) = &self.out {
            cfg.out = v.clone();
        }
        if let Some(v) = self.quad_rel_tol {
            cfg.quad_rel_tol = v;
        }
        if let Some(v) = self.ode_tol {
            cfg.ode_tol = v;
        }
        if let Some(v) = self.root_tol {
            cfg.root_tol = v;
        }
        if let Some(v) = self.independence_tol {
            cfg.independence_tol = v;
        }
    }
}
