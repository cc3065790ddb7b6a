//! Flat `section.key = value` run configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Every key must be one
//! of [`KNOWN_KEYS`] and may appear once. Keys that are known but belong to the
//! other mode (for instance `material.rho` in dimensionless mode) are
//! rejected too, so nothing in a config file is silently ignored.

use std::collections::BTreeMap;
use std::path::Path;

use stefan_core::{
    Beta, BoundaryData, DimensionlessSource, Material, OracleConfig, Problem, ProfileMode, SolverOptions, SourceSpec,
    Tolerance,
};
use thiserror::Error;

pub const KNOWN_KEYS: &[&str] = &[
    "mode",
    "material.rho",
    "material.c0",
    "material.k0",
    "material.latent_heat",
    "material.delta",
    "material.p",
    "boundary.theta0",
    "boundary.theta_f",
    "source.kind",
    "source.beta_amplitude",
    "source.beta_decay",
    "source.lambda0",
    "dimensionless.ste",
    "dimensionless.delta",
    "dimensionless.p",
    "dimensionless.a_coef",
    "solver.abs_tol",
    "solver.rel_tol",
    "solver.max_iter",
    "solver.table_size",
    "solver.exact_profile",
    "solver.lambda_offset",
    "oracle.enabled",
    "oracle.n_space",
    "oracle.n_time",
    "oracle.t_start",
    "oracle.t_end",
    "oracle.theta_scheme",
    "sweep.ste",
    "sweep.delta",
    "sweep.p",
    "sweep.a_coef",
];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`, found `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("{key}: cannot parse `{value}` as {expected}")]
    BadValue {
        key: String,
        value: String,
        expected: &'static str,
    },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("`{key}` is not used {context}")]
    Unused { key: String, context: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, ConfigError>;

/// Parameter lists for `sweep`. An absent list means "the configured value".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepRanges {
    pub ste: Option<Vec<f64>>,
    pub delta: Option<Vec<f64>>,
    pub p: Option<Vec<f64>>,
    pub a_coef: Option<Vec<f64>>,
}

impl SweepRanges {
    pub fn is_empty(&self) -> bool {
        self.ste.is_none() && self.delta.is_none() && self.p.is_none() && self.a_coef.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problem: Problem,
    /// Source in dimensionless form, used to rebuild problems for a sweep.
    pub dimensionless_source: DimensionlessSource,
    pub solver: SolverOptions,
    /// Added to the solved λ before any output. Zero except when probing the
    /// verification suite.
    pub lambda_offset: f64,
    pub oracle: Option<OracleConfig>,
    pub sweep: SweepRanges,
}

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                text: trimmed.to_string(),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || value.is_empty() {
                return Err(ConfigError::Syntax {
                    line,
                    text: trimmed.to_string(),
                });
            }
            if !KNOWN_KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                });
            }
            if map.insert(key.to_string(), (line, value.to_string())).is_some() {
                return Err(ConfigError::Duplicate {
                    line,
                    key: key.to_string(),
                });
            }
        }
        Ok(Self { map })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|(_, v)| v.as_str())
    }

    fn bad(key: &str, value: &str, expected: &'static str) -> ConfigError {
        ConfigError::BadValue {
            key: key.to_string(),
            value: value.to_string(),
            expected,
        }
    }

    fn f64(&self, key: &str) -> Result<Option<f64>> {
        self.raw(key)
            .map(|v| v.parse::<f64>().map_err(|_| Self::bad(key, v, "a number")))
            .transpose()
    }

    fn required_f64(&self, key: &'static str) -> Result<f64> {
        self.f64(key)?.ok_or(ConfigError::Missing(key))
    }

    fn usize(&self, key: &str) -> Result<Option<usize>> {
        self.raw(key)
            .map(|v| v.parse::<usize>().map_err(|_| Self::bad(key, v, "a non-negative integer")))
            .transpose()
    }

    fn bool(&self, key: &str) -> Result<Option<bool>> {
        self.raw(key)
            .map(|v| match v {
                "true" => Ok(true),
                "false" => Ok(false),
                _ => Err(Self::bad(key, v, "true or false")),
            })
            .transpose()
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        let Some(v) = self.raw(key) else {
            return Ok(None);
        };
        let values = v
            .split(',')
            .map(|item| item.trim().parse::<f64>().map_err(|_| Self::bad(key, v, "a comma-separated list of numbers")))
            .collect::<Result<Vec<_>>>()?;
        if values.is_empty() {
            return Err(Self::bad(key, v, "a non-empty list"));
        }
        Ok(Some(values))
    }

    fn forbid(&self, prefix_or_key: &str, context: &str) -> Result<()> {
        let hit = self
            .map
            .keys()
            .find(|k| k.as_str() == prefix_or_key || k.starts_with(&format!("{prefix_or_key}.")));
        match hit {
            Some(key) => Err(ConfigError::Unused {
                key: key.clone(),
                context: context.to_string(),
            }),
            None => Ok(()),
        }
    }
}

fn model_err(e: impl std::fmt::Display) -> ConfigError {
    ConfigError::Invalid(e.to_string())
}

pub fn load(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<RunConfig> {
    let e = Entries::parse(text)?;

    let kind = e.raw("source.kind").unwrap_or("none");
    let beta = match kind {
        "none" | "exponential" | "feedback" => {
            e.forbid("source.beta_amplitude", &format!("with source.kind = {kind}"))?;
            e.forbid("source.beta_decay", &format!("with source.kind = {kind}"))?;
            None
        }
        "similarity" => {
            let amp = e.f64("source.beta_amplitude")?.unwrap_or(0.5);
            let decay = e.f64("source.beta_decay")?.unwrap_or(1.0);
            if !(amp >= 0.0 && amp.is_finite() && decay.is_finite()) {
                return Err(ConfigError::Invalid(format!(
                    "source.beta_amplitude must be non-negative and source.beta_decay finite (got {amp}, {decay})"
                )));
            }
            Some(Beta::gaussian(amp, decay))
        }
        other => return Err(Entries::bad("source.kind", other, "none, exponential, similarity or feedback")),
    };
    if kind != "feedback" {
        e.forbid("source.lambda0", &format!("with source.kind = {kind}"))?;
        e.forbid("dimensionless.a_coef", &format!("with source.kind = {kind}"))?;
        e.forbid("sweep.a_coef", &format!("with source.kind = {kind}"))?;
    }

    let mode = e.raw("mode").unwrap_or("dimensional");
    let (problem, dimensionless_source) = match mode {
        "dimensional" => {
            e.forbid("dimensionless", "in dimensional mode")?;
            let material = Material::new(
                e.required_f64("material.rho")?,
                e.required_f64("material.c0")?,
                e.required_f64("material.k0")?,
                e.required_f64("material.latent_heat")?,
                e.required_f64("material.delta")?,
                e.required_f64("material.p")?,
            )
            .map_err(model_err)?;
            let boundary =
                BoundaryData::new(e.required_f64("boundary.theta0")?, e.required_f64("boundary.theta_f")?)
                    .map_err(model_err)?;
            let source = match kind {
                "none" => SourceSpec::None,
                "exponential" => SourceSpec::Exponential,
                "similarity" => SourceSpec::Similarity {
                    beta: beta.clone().expect("similarity source has beta"),
                },
                _ => SourceSpec::FluxFeedback {
                    lambda0: e.required_f64("source.lambda0")?,
                },
            };
            let problem = Problem::new(material, boundary, source).map_err(model_err)?;
            let dims = problem.dimensionless().map_err(model_err)?;
            let dsource = dimensionless_source(kind, beta, dims.feedback);
            (problem, dsource)
        }
        "dimensionless" => {
            e.forbid("material", "in dimensionless mode")?;
            e.forbid("boundary", "in dimensionless mode")?;
            e.forbid("source.lambda0", "in dimensionless mode (use dimensionless.a_coef)")?;
            let a_coef = match kind {
                "feedback" => Some(e.required_f64("dimensionless.a_coef")?),
                _ => None,
            };
            let dsource = dimensionless_source(kind, beta, a_coef);
            let problem = Problem::from_dimensionless(
                e.required_f64("dimensionless.ste")?,
                e.required_f64("dimensionless.delta")?,
                e.required_f64("dimensionless.p")?,
                dsource.clone(),
            )
            .map_err(model_err)?;
            (problem, dsource)
        }
        other => return Err(Entries::bad("mode", other, "dimensional or dimensionless")),
    };

    let defaults = SolverOptions::default();
    let root = Tolerance::new(
        e.f64("solver.abs_tol")?.unwrap_or(defaults.root.abs_tol),
        e.f64("solver.rel_tol")?.unwrap_or(defaults.root.rel_tol),
        e.usize("solver.max_iter")?.unwrap_or(defaults.root.max_iter),
    )
    .map_err(|err| ConfigError::Invalid(format!("solver tolerances: {err}")))?;
    let table_size = e.usize("solver.table_size")?.unwrap_or(defaults.table_size);
    if table_size < 2 {
        return Err(ConfigError::Invalid(format!("solver.table_size must be at least 2 (got {table_size})")));
    }
    let mode = if e.bool("solver.exact_profile")?.unwrap_or(false) {
        ProfileMode::Exact
    } else {
        ProfileMode::Table
    };
    let solver = SolverOptions {
        root,
        table_size,
        mode,
        ..defaults
    };
    let lambda_offset = e.f64("solver.lambda_offset")?.unwrap_or(0.0);
    if !lambda_offset.is_finite() {
        return Err(ConfigError::Invalid("solver.lambda_offset must be finite".into()));
    }

    let oracle = if e.bool("oracle.enabled")?.unwrap_or(true) {
        let d = OracleConfig::default();
        let cfg = OracleConfig {
            n_space: e.usize("oracle.n_space")?.unwrap_or(d.n_space),
            n_time: e.usize("oracle.n_time")?.unwrap_or(d.n_time),
            t_start: e.f64("oracle.t_start")?.unwrap_or(d.t_start),
            t_end: e.f64("oracle.t_end")?.unwrap_or(d.t_end),
            theta_scheme: e.f64("oracle.theta_scheme")?.unwrap_or(d.theta_scheme),
            ..d
        };
        cfg.validate().map_err(model_err)?;
        Some(cfg)
    } else {
        for key in ["oracle.n_space", "oracle.n_time", "oracle.t_start", "oracle.t_end", "oracle.theta_scheme"] {
            e.forbid(key, "with oracle.enabled = false")?;
        }
        None
    };

    let sweep = SweepRanges {
        ste: e.list("sweep.ste")?,
        delta: e.list("sweep.delta")?,
        p: e.list("sweep.p")?,
        a_coef: e.list("sweep.a_coef")?,
    };

    Ok(RunConfig {
        problem,
        dimensionless_source,
        solver,
        lambda_offset,
        oracle,
        sweep,
    })
}

fn dimensionless_source(kind: &str, beta: Option<Beta>, a_coef: Option<f64>) -> DimensionlessSource {
    match kind {
        "none" => DimensionlessSource::None,
        "exponential" => DimensionlessSource::Exponential,
        "similarity" => DimensionlessSource::Similarity(beta.expect("similarity source has beta")),
        _ => DimensionlessSource::Feedback(a_coef.expect("feedback source has a coefficient")),
    }
}
