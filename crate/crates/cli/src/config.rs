use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use mad_core::{ParamError, SolverParams};
use thiserror::Error;

/// Keys accepted both as `--flag value` and as `key = value` file lines.
pub const KEYS: &[&str] = &[
    "problem",
    "q",
    "alpha",
    "beta",
    "delta-max",
    "max-iter",
    "eps-rel",
    "eps-abs",
    "svd-cutoff",
    "noise",
    "seed",
    "precond",
    "history-out",
    "summary-out",
];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("unknown setting `{0}`")]
    UnknownKey(String),
    #[error("invalid value `{value}` for `{key}`")]
    Value { key: String, value: String },
    #[error("`{0}` takes a single value here")]
    NotScalar(String),
    #[error("`{0}` list is empty")]
    EmptyList(String),
    #[error("missing required setting `{0}`")]
    Missing(String),
    #[error(transparent)]
    Params(#[from] ParamError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrecondChoice {
    Identity,
    Diagonal,
    Oracle,
}

impl FromStr for PrecondChoice {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "identity" => Ok(PrecondChoice::Identity),
            "diagonal" => Ok(PrecondChoice::Diagonal),
            "oracle" => Ok(PrecondChoice::Oracle),
            _ => Err(()),
        }
    }
}

impl fmt::Display for PrecondChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrecondChoice::Identity => "identity",
            PrecondChoice::Diagonal => "diagonal",
            PrecondChoice::Oracle => "oracle",
        })
    }
}

/// Raw settings, later entries overriding earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings(BTreeMap<String, String>);

fn normalize_key(key: &str) -> String {
    key.trim().replace('_', "-")
}

impl Settings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), ConfigError> {
        let key = normalize_key(key);
        if !KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey(key));
        }
        self.0.insert(key, value.into());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    /// Parses `key = value` lines. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut settings = Settings::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(ConfigError::Syntax { line: idx + 1 })?;
            let value = value.trim();
            if key.trim().is_empty() || value.is_empty() {
                return Err(ConfigError::Syntax { line: idx + 1 });
            }
            settings.set(key, value)?;
        }
        Ok(settings)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn merge(&mut self, other: Settings) {
        self.0.extend(other.0);
    }

    fn scalar<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        let Some(raw) = self.get(key) else {
            return Ok(None);
        };
        if raw.contains(',') {
            return Err(ConfigError::NotScalar(key.to_string()));
        }
        parse_value(key, raw).map(Some)
    }

    fn list<T: FromStr>(&self, key: &str, default: T) -> Result<Vec<T>, ConfigError> {
        let Some(raw) = self.get(key) else {
            return Ok(vec![default]);
        };
        let items: Vec<&str> = raw
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        if items.is_empty() {
            return Err(ConfigError::EmptyList(key.to_string()));
        }
        items.into_iter().map(|s| parse_value(key, s)).collect()
    }
}

fn parse_value<T: FromStr>(key: &str, raw: &str) -> Result<T, ConfigError> {
    raw.trim().parse().map_err(|_| ConfigError::Value {
        key: key.to_string(),
        value: raw.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: String,
    pub params: SolverParams,
    pub noise: f64,
    pub seed: u64,
    pub precond: PrecondChoice,
    pub history_out: Option<PathBuf>,
    pub summary_out: Option<PathBuf>,
}

/// The (q, alpha, beta) axes of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub q: Vec<usize>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl SweepGrid {
    pub fn cells(&self) -> usize {
        self.q.len() * self.alpha.len() * self.beta.len()
    }
}

impl RunConfig {
    /// Single-run configuration; list values for q, alpha or beta are rejected.
    pub fn from_settings(s: &Settings) -> Result<Self, ConfigError> {
        let (config, _) = Self::split(s, false)?;
        Ok(config)
    }

    /// Base configuration plus sweep axes. The base takes the first value of
    /// each axis.
    pub fn with_grid(s: &Settings) -> Result<(Self, SweepGrid), ConfigError> {
        Self::split(s, true)
    }

    fn split(s: &Settings, allow_lists: bool) -> Result<(Self, SweepGrid), ConfigError> {
        let defaults = SolverParams::default();
        let grid = if allow_lists {
            SweepGrid {
                q: s.list("q", defaults.q())?,
                alpha: s.list("alpha", defaults.alpha())?,
                beta: s.list("beta", defaults.beta())?,
            }
        } else {
            SweepGrid {
                q: vec![s.scalar("q")?.unwrap_or(defaults.q())],
                alpha: vec![s.scalar("alpha")?.unwrap_or(defaults.alpha())],
                beta: vec![s.scalar("beta")?.unwrap_or(defaults.beta())],
            }
        };

        let mut builder = defaults
            .to_builder()
            .q(grid.q[0])
            .alpha(grid.alpha[0])
            .beta(grid.beta[0]);
        if let Some(v) = s.scalar("delta-max")? {
            builder = builder.delta_max(v);
        }
        if let Some(v) = s.scalar("max-iter")? {
            builder = builder.k_max(v);
        }
        if let Some(v) = s.scalar("eps-rel")? {
            builder = builder.eps_r(v);
        }
        if let Some(v) = s.scalar("eps-abs")? {
            builder = builder.eps_a(v);
        }
        if let Some(v) = s.scalar("svd-cutoff")? {
            builder = builder.svd_cutoff(v);
        }
        let params = builder.build()?;
        // validate every grid cell up front so a sweep never fails midway
        for &q in &grid.q {
            for &alpha in &grid.alpha {
                for &beta in &grid.beta {
                    params.to_builder().q(q).alpha(alpha).beta(beta).build()?;
                }
            }
        }

        let noise: f64 = s.scalar("noise")?.unwrap_or(0.0);
        if !(noise >= 0.0 && noise.is_finite()) {
            return Err(ConfigError::Value {
                key: "noise".into(),
                value: noise.to_string(),
            });
        }
        let precond = match s.get("precond") {
            None => PrecondChoice::Identity,
            Some(raw) => raw.parse().map_err(|_| ConfigError::Value {
                key: "precond".into(),
                value: raw.to_string(),
            })?,
        };
        let config = RunConfig {
            problem: s
                .get("problem")
                .ok_or_else(|| ConfigError::Missing("problem".into()))?
                .to_string(),
            params,
            noise,
            seed: s.scalar("seed")?.unwrap_or(0),
            precond,
            history_out: s.get("history-out").map(PathBuf::from),
            summary_out: s.get("summary-out").map(PathBuf::from),
        };
        Ok((config, grid))
    }
}
