//! Experiment configuration: one JSON document, overridable from flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::models::{build_model, ModelInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subcommand {
    Lanczos,
    Agp,
    Sweep,
    Scaling,
    TruncationReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Krylov,
    Exact,
    Autocorr,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Krylov => "krylov",
            Method::Exact => "exact",
            Method::Autocorr => "autocorr",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "krylov" | "krylov-full" => Ok(Method::Krylov),
            "exact" => Ok(Method::Exact),
            "autocorr" => Ok(Method::Autocorr),
            other => Err(Error::config("methods", format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// `"auto"` for the model's conventional regulator, or a fixed value.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum MuPolicy {
    #[default]
    Auto,
    Fixed(f64),
}

impl MuPolicy {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "auto" => Ok(MuPolicy::Auto),
            v => v
                .parse::<f64>()
                .map_err(|_| Error::config("mu", format!("expected `auto` or a number, got `{v}`")))
                .map(MuPolicy::Fixed),
        }
    }

    pub fn resolve(self, model: &ModelInstance) -> f64 {
        match self {
            MuPolicy::Auto => model.default_mu,
            MuPolicy::Fixed(v) => v,
        }
    }
}

impl Serialize for MuPolicy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            MuPolicy::Auto => s.serialize_str("auto"),
            MuPolicy::Fixed(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for MuPolicy {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::String(s) => MuPolicy::parse(&s).map_err(serde::de::Error::custom),
            Value::Number(n) => Ok(MuPolicy::Fixed(n.as_f64().unwrap_or(f64::NAN))),
            other => Err(serde::de::Error::custom(format!(
                "expected \"auto\" or a number, got {other}"
            ))),
        }
    }
}

/// A truncation order `N`, or the full Krylov space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Truncation {
    Order(usize),
    Full,
}

impl Truncation {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "full" => Ok(Truncation::Full),
            v => v.parse::<usize>().map(Truncation::Order).map_err(|_| {
                Error::config("truncate", format!("expected `full` or an order ≥ 0, got `{v}`"))
            }),
        }
    }

    /// Parses a comma-separated list; `a..b` expands to the inclusive range.
    pub fn parse_list(s: &str) -> Result<Vec<Self>> {
        let mut out = Vec::new();
        for item in s.split(',').filter(|x| !x.trim().is_empty()) {
            if let Some((a, b)) = item.split_once("..") {
                let (Truncation::Order(a), Truncation::Order(b)) = (Self::parse(a)?, Self::parse(b)?)
                else {
                    return Err(Error::config("truncate", "ranges need numeric ends"));
                };
                out.extend((a..=b).map(Truncation::Order));
            } else {
                out.push(Self::parse(item)?);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Truncation::Order(n) => write!(f, "{n}"),
            Truncation::Full => write!(f, "full"),
        }
    }
}

impl Serialize for Truncation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Truncation::Order(n) => s.serialize_u64(*n as u64),
            Truncation::Full => s.serialize_str("full"),
        }
    }
}

impl<'de> Deserialize<'de> for Truncation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::String(s) => Truncation::parse(&s).map_err(serde::de::Error::custom),
            Value::Number(n) => n
                .as_u64()
                .map(|v| Truncation::Order(v as usize))
                .ok_or_else(|| serde::de::Error::custom(format!("truncation order must be ≥ 0, got {n}"))),
            other => Err(serde::de::Error::custom(format!(
                "expected \"full\" or an order, got {other}"
            ))),
        }
    }
}

/// A uniform grid over one model parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub parameter: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl SweepAxis {
    /// Parses `parameter:from:to:steps`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::config("sweep", format!("expected `parameter:from:to:steps`, got `{s}`"));
        let [p, a, b, n] = parts[..] else {
            return Err(bad());
        };
        Ok(SweepAxis {
            parameter: p.to_string(),
            from: a.parse().map_err(|_| bad())?,
            to: b.parse().map_err(|_| bad())?,
            steps: n.parse().map_err(|_| bad())?,
        })
    }

    /// The grid values; a single step sits at `from`.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.from];
        }
        let h = (self.to - self.from) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| if k + 1 == self.steps { self.to } else { self.from + k as f64 * h })
            .collect()
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.from + self.to)
    }
}

/// One model of a truncation report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelEntry {
    pub model: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepAxis>,
}

/// Autocorrelation family and sizes for a scaling study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingConfig {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default)]
    pub offset: f64,
    #[serde(default = "default_sizes")]
    pub sizes: Vec<usize>,
}

fn default_sizes() -> Vec<usize> {
    (6..=16).collect()
}

fn default_truncate() -> Vec<Truncation> {
    vec![Truncation::Full]
}

fn default_methods() -> Vec<Method> {
    vec![Method::Krylov, Method::Exact]
}

fn default_threads() -> usize {
    1
}

fn default_max_order() -> usize {
    8
}

fn default_gauge_dim_cap() -> usize {
    256
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subcommand: Option<Subcommand>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepAxis>,
    #[serde(default = "default_truncate")]
    pub truncate: Vec<Truncation>,
    #[serde(default)]
    pub mu: MuPolicy,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default = "default_threads")]
    pub threads: usize,
    /// Recorded for provenance only; every algorithm is deterministic.
    #[serde(default)]
    pub seed: u64,
    /// Models of a truncation report.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub models: Vec<ModelEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling: Option<ScalingConfig>,
    /// Highest truncation order searched by the truncation report.
    #[serde(default = "default_max_order")]
    pub max_order: usize,
    /// Largest Hilbert-space dimension for which the AGP operator is
    /// assembled and its gauge residual reported.
    #[serde(default = "default_gauge_dim_cap")]
    pub gauge_dim_cap: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

impl ExperimentConfig {
    /// Parses a JSON document, reporting the line and column of the failure.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config {
            key: format!("line {}, column {}", e.line(), e.column()),
            reason: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks the invariants that do not depend on the subcommand.
    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::config("methods", "at least one method is required"));
        }
        if self.threads == 0 {
            return Err(Error::config("threads", "must be at least 1"));
        }
        if let MuPolicy::Fixed(v) = self.mu {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::config("mu", format!("must be finite and ≥ 0, got {v}")));
            }
        }
        if self.truncate.is_empty() {
            return Err(Error::config("truncate", "at least one truncation is required"));
        }
        for (key, axis) in self
            .sweep
            .iter()
            .map(|a| ("sweep", a))
            .chain(self.models.iter().filter_map(|m| m.sweep.as_ref().map(|a| ("models.sweep", a))))
        {
            if axis.steps < 1 {
                return Err(Error::config(&format!("{key}.steps"), "must be at least 1"));
            }
            if !axis.from.is_finite() || !axis.to.is_finite() {
                return Err(Error::config(key, "endpoints must be finite"));
            }
        }
        if let Some(s) = &self.scaling {
            if s.sizes.len() < 2 {
                return Err(Error::config("scaling.sizes", "needs at least two sizes"));
            }
        }
        Ok(())
    }

    pub fn model_name(&self) -> Result<&str> {
        self.model
            .as_deref()
            .ok_or_else(|| Error::config("model", "no model given"))
    }

    pub fn build_model(&self) -> Result<ModelInstance> {
        build_model(self.model_name()?, &self.params)
    }
}
