//! Flat JSON config files merged under command-line flags, and the sweep
//! ranges used by figure commands.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde_json::Value;

use crate::error::{CliError, CliResult};

/// Environment variable overriding the Fock truncation.
pub const DIM_ENV: &str = "WEAKMEAS_DIM";

/// Key/value pairs from a `--config` file. Keys are normalized so that
/// `alpha-r` and `alpha_r` name the same entry.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

fn normalize(key: &str) -> String {
    key.trim_start_matches('-').replace('-', "_").to_ascii_lowercase()
}

impl Config {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| CliError::usage(format!("config is not valid JSON: {e}")))?;
        let Value::Object(map) = value else {
            return Err(CliError::usage("config must be a flat JSON object"));
        };
        let mut entries = BTreeMap::new();
        for (k, v) in map {
            let s = match v {
                Value::String(s) => s,
                Value::Number(n) => n.to_string(),
                Value::Bool(b) => b.to_string(),
                Value::Null => continue,
                _ => return Err(CliError::usage(format!("config key {k:?} must hold a scalar"))),
            };
            entries.insert(normalize(&k), s);
        }
        Ok(Self { entries })
    }

    pub fn from_optional(path: Option<&PathBuf>) -> CliResult<Self> {
        path.map_or_else(|| Ok(Self::default()), |p| Self::load(p))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(&normalize(key)).map(String::as_str)
    }

    /// The flag value if given, else the parsed config entry.
    pub fn pick<T>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>>
    where
        T: FromStr,
        T::Err: fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        self.get(key)
            .map(|s| {
                s.parse::<T>()
                    .map_err(|e| CliError::usage(format!("config {key} = {s:?}: {e}")))
            })
            .transpose()
    }

    pub fn pick_or<T>(&self, flag: Option<T>, key: &str, default: T) -> CliResult<T>
    where
        T: FromStr,
        T::Err: fmt::Display,
    {
        Ok(self.pick(flag, key)?.unwrap_or(default))
    }
}

/// Truncation from [`DIM_ENV`], or `fallback`.
pub fn fock_dim(fallback: usize) -> CliResult<usize> {
    match std::env::var(DIM_ENV) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(d) if d >= 2 => Ok(d),
            _ => Err(CliError::usage(format!("{DIM_ENV}={s:?} must be an integer >= 2"))),
        },
        Err(_) => Ok(fallback),
    }
}

/// `min:max:steps`, or a single value for a one-point axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl SweepRange {
    pub fn fixed(v: f64) -> Self {
        Self {
            min: v,
            max: v,
            steps: 1,
        }
    }

    pub fn new(min: f64, max: f64, steps: usize) -> Self {
        Self { min, max, steps }
    }

    /// Equally spaced points, endpoints included exactly.
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let n = self.steps - 1;
        (0..=n)
            .map(|i| {
                if i == n {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / n as f64
                }
            })
            .collect()
    }

    fn check(&self, name: &str, lo: f64, hi: f64, open_lo: bool) -> CliResult<()> {
        let inside = |v: f64| v.is_finite() && v <= hi && if open_lo { v > lo } else { v >= lo };
        if self.steps == 0 {
            return Err(CliError::usage(format!("{name}: steps must be at least 1")));
        }
        if !inside(self.min) || !inside(self.max) || self.max < self.min {
            return Err(CliError::usage(format!("{name} range {self} is outside its domain")));
        }
        Ok(())
    }
}

impl fmt::Display for SweepRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.steps)
    }
}

impl FromStr for SweepRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let num = |t: &str| t.parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        match parts.as_slice() {
            [v] => Ok(Self::fixed(num(v)?)),
            [a, b, n] => Ok(Self::new(
                num(a)?,
                num(b)?,
                n.parse::<usize>().map_err(|e| format!("steps {n:?}: {e}"))?,
            )),
            _ => Err(format!("expected VALUE or MIN:MAX:STEPS, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(format!("unknown format {s:?} (csv or json)")),
        }
    }
}

/// Parameter axes of a figure sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub observable: weakmeas_core::weakvalues::ProfileObservable,
    pub alpha_r: SweepRange,
    pub alpha_i: SweepRange,
    pub n_th: SweepRange,
    pub eta: SweepRange,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl SweepConfig {
    pub fn validate(&self) -> CliResult<()> {
        self.alpha_r.check("alpha_r", f64::NEG_INFINITY, f64::INFINITY, false)?;
        self.alpha_i.check("alpha_i", f64::NEG_INFINITY, f64::INFINITY, false)?;
        self.n_th.check("n_th", 0.0, f64::INFINITY, false)?;
        self.eta.check("eta", 0.0, 1.0, true)
    }
}
