//! The experiment runners behind each subcommand.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::hash::Hasher;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{ExperimentConfig, Method, Truncation};
use super::table::{Cell, Table};
use crate::agp::{agp_norm_from_alpha, assemble_agp, gauge_residual, solve_alpha, solve_alpha_full, AgpSolution};
use crate::autocorr::{
    agp_norm_bound, agp_norm_from_autocorr, scaling_study, AutocorrSpec, QuadOptions, Tabulated,
};
use crate::error::{Error, Result};
use crate::exact::ExactOracle;
use crate::krylov::{lanczos, KrylovData, LanczosOptions};
use crate::models::{build_model, deformation_parameter, normalized_deformation, ModelInstance};

/// Largest time grid tabulated for the autocorrelation route.
pub const MAX_AUTOCORR_GRID: usize = 8_000_000;

/// Agreement required by the truncation report.
pub const REPORT_TOLERANCE: f64 = 0.05;

pub const LANCZOS_COLUMNS: [&str; 4] = ["n", "b_n", "model", "params_hash"];
pub const NORM_COLUMNS: [&str; 8] = [
    "sweep_value",
    "mu",
    "method",
    "truncation",
    "norm",
    "norm_over_L",
    "bound",
    "gauge_residual",
];
pub const SCALING_COLUMNS: [&str; 7] = ["L", "mu", "norm", "norm_over_L", "method", "bound", "fit_slope"];

/// FNV-1a hash of the model name and resolved parameters, as 16 hex digits.
pub fn params_hash(model: &str, params: &BTreeMap<String, f64>) -> String {
    let mut h = fnv::FnvHasher::default();
    h.write(model.as_bytes());
    for (k, v) in params {
        h.write(format!(";{k}={v:.16e}").as_bytes());
    }
    format!("{:016x}", h.finish())
}

fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::config("threads", e.to_string()))?;
    Ok(pool.install(f))
}

/// Lanczos coefficients of the normalized deformation.
pub fn run_lanczos(cfg: &ExperimentConfig) -> Result<Table> {
    let model = cfg.build_model()?;
    let (o0, _) = normalized_deformation(&model)?;
    let k = lanczos(&model.hamiltonian, &o0, &LanczosOptions::default())?;
    let hash = params_hash(&model.name, &model.parameters);
    let mut t = Table::new(&LANCZOS_COLUMNS);
    for (i, &b) in k.b.iter().enumerate() {
        t.push(vec![(i + 1).into(), b.into(), model.name.as_str().into(), hash.as_str().into()]);
    }
    Ok(t)
}

/// One row of a norm table.
#[derive(Debug, Clone, PartialEq)]
pub struct NormRow {
    pub sweep_value: f64,
    pub mu: f64,
    pub method: Method,
    /// `N`, `"full"` or `"exact"`.
    pub truncation: String,
    pub norm: f64,
    pub norm_over_l: f64,
    pub bound: f64,
    pub gauge_residual: Option<f64>,
}

impl NormRow {
    fn cells(&self) -> Vec<Cell> {
        vec![
            self.sweep_value.into(),
            self.mu.into(),
            self.method.as_str().into(),
            self.truncation.as_str().into(),
            self.norm.into(),
            self.norm_over_l.into(),
            self.bound.into(),
            self.gauge_residual.into(),
        ]
    }
}

fn solve(b: &[f64], mu: f64, trunc: Truncation) -> Result<AgpSolution> {
    match (trunc, crate::krylov::max_truncation(b)) {
        (_, None) => Ok(AgpSolution::empty(mu)),
        (Truncation::Full, Some(_)) => solve_alpha_full(b, mu),
        (Truncation::Order(n), Some(m)) => solve_alpha(b, mu, n.min(m)),
    }
}

/// Norm through the autocorrelation route: the oracle's spectral lines are
/// tabulated in time and integrated by quadrature.
pub fn autocorr_norm(oracle: &ExactOracle, mu: f64, deformation_norm_sq: f64) -> Result<f64> {
    if !(mu > 0.0) {
        return Err(Error::Domain("the autocorrelation method needs mu > 0".into()));
    }
    let lines = oracle.spectral_lines(true);
    let omega_max = lines.last().map_or(0.0, |l| l.0);
    if omega_max == 0.0 {
        return Ok(0.0);
    }
    let dt = PI / (64.0 * omega_max);
    let n = (40.0 / (mu * dt)).ceil() as usize + 4;
    if n > MAX_AUTOCORR_GRID {
        return Err(Error::ResourceCap(format!(
            "autocorrelation grid of {n} points exceeds {MAX_AUTOCORR_GRID}"
        )));
    }
    let spec = AutocorrSpec::tabulated(Tabulated::from_lines(&lines, dt, n)?);
    let r = agp_norm_from_autocorr(&spec, mu, &QuadOptions::default())?;
    Ok(deformation_norm_sq * r.value)
}

/// Every requested norm for one model instance.
pub fn evaluate_point(cfg: &ExperimentConfig, model: &ModelInstance, sweep_value: f64) -> Result<Vec<NormRow>> {
    let mu = cfg.mu.resolve(model);
    let (o0, dnorm) = normalized_deformation(model)?;
    let dnorm_sq = dnorm * dnorm;
    let want_residual = cfg.methods.contains(&Method::Krylov) && model.hilbert_dim <= cfg.gauge_dim_cap;
    let opts = LanczosOptions {
        keep_basis: want_residual,
        ..Default::default()
    };
    let k: KrylovData = lanczos(&model.hamiltonian, &o0, &opts)?;
    let m_count = k.max_truncation().map_or(0, |m| m + 1);
    let bound = if m_count == 0 {
        0.0
    } else {
        agp_norm_bound(m_count, mu, dnorm_sq)
    };
    let size = model.system_size as f64;
    let row = |method, truncation: String, norm: f64, residual| NormRow {
        sweep_value,
        mu,
        method,
        truncation,
        norm,
        norm_over_l: norm / size,
        bound,
        gauge_residual: residual,
    };

    let mut rows = Vec::new();
    let needs_oracle = cfg.methods.iter().any(|m| *m != Method::Krylov);
    let oracle = if needs_oracle {
        Some(ExactOracle::new(&model.hamiltonian, &model.deformation)?)
    } else {
        None
    };
    for method in &cfg.methods {
        match method {
            Method::Krylov => {
                for &t in &cfg.truncate {
                    let sol = solve(&k.b, mu, t)?;
                    let residual = match (t, want_residual) {
                        (Truncation::Full, true) => {
                            let a = assemble_agp(&k, &sol)?;
                            Some(gauge_residual(&model.hamiltonian, &o0, &a, mu)?)
                        }
                        _ => None,
                    };
                    rows.push(row(Method::Krylov, t.to_string(), agp_norm_from_alpha(&sol, dnorm_sq), residual));
                }
            }
            Method::Exact => {
                let o = oracle.as_ref().expect("oracle built");
                rows.push(row(Method::Exact, "exact".into(), o.agp_norm(mu, false)?, None));
            }
            Method::Autocorr => {
                let o = oracle.as_ref().expect("oracle built");
                rows.push(row(Method::Autocorr, "full".into(), autocorr_norm(o, mu, dnorm_sq)?, None));
            }
        }
    }
    for r in &rows {
        if !(r.norm >= 0.0) || r.norm > r.bound * (1.0 + 1e-10) {
            return Err(Error::Domain(format!(
                "{} norm {:e} (truncation {}) at sweep value {} violates the bound {:e} (M = {m_count}, mu = {mu:e})",
                r.method.as_str(),
                r.norm,
                r.truncation,
                r.sweep_value,
                r.bound
            )));
        }
    }
    Ok(rows)
}

fn norm_table(rows: impl IntoIterator<Item = NormRow>) -> Table {
    let mut t = Table::new(&NORM_COLUMNS);
    for r in rows {
        t.push(r.cells());
    }
    t
}

/// Norms at the configured parameters; the sweep value column holds the
/// deformation parameter.
pub fn run_agp(cfg: &ExperimentConfig) -> Result<Table> {
    let model = cfg.build_model()?;
    let key = deformation_parameter(&model.name).map(|(k, _)| k);
    let value = key.and_then(|k| model.param(k)).unwrap_or(f64::NAN);
    Ok(norm_table(evaluate_point(cfg, &model, value)?))
}

/// Norms over the sweep grid, in grid order.
pub fn run_agp_sweep(cfg: &ExperimentConfig) -> Result<Table> {
    let axis = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Error::config("sweep", "the sweep subcommand needs a sweep axis"))?;
    let name = cfg.model_name()?;
    let points = axis.values();
    let per_point = with_pool(cfg.threads, || {
        points
            .par_iter()
            .map(|&v| {
                let mut params = cfg.params.clone();
                params.insert(axis.parameter.clone(), v);
                let model = build_model(name, &params)?;
                evaluate_point(cfg, &model, v)
            })
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(norm_table(per_point.into_iter().flatten()))
}

/// Scaling table of an autocorrelation family at `μ = L·2^{−L}`.
pub fn run_scaling(cfg: &ExperimentConfig) -> Result<Table> {
    let sc = cfg
        .scaling
        .as_ref()
        .ok_or_else(|| Error::config("scaling", "the scaling subcommand needs a family"))?;
    let spec = AutocorrSpec::by_name(&sc.family, sc.alpha, sc.eta, sc.sizes.first().copied())
        .map_err(|e| Error::config("scaling.family", e.to_string()))?
        .with_offset(sc.offset)?;
    let study = with_pool(cfg.threads, || scaling_study(&spec, &sc.sizes, &QuadOptions::default()))??;
    let mut t = Table::new(&SCALING_COLUMNS);
    for r in &study.rows {
        let bound = agp_norm_bound(1, r.mu, 1.0);
        if !(r.norm >= 0.0) || r.norm > bound {
            return Err(Error::Domain(format!(
                "norm {:e} at L = {} violates the bound {bound:e}",
                r.norm, r.l
            )));
        }
        t.push(vec![
            r.l.into(),
            r.mu.into(),
            r.norm.into(),
            r.norm_over_l.into(),
            r.method.as_str().into(),
            bound.into(),
            study.fit.slope.into(),
        ]);
    }
    Ok(t)
}

fn report_entry(cfg: &ExperimentConfig, entry: &super::config::ModelEntry) -> Result<Value> {
    let mut params = entry.params.clone();
    let mut sweep = Value::Null;
    if let Some(axis) = &entry.sweep {
        params.insert(axis.parameter.clone(), axis.midpoint());
        sweep = json!({"parameter": axis.parameter, "value": axis.midpoint()});
    }
    let model = build_model(&entry.model, &params)?;
    let mu = cfg.mu.resolve(&model);
    let (o0, dnorm) = normalized_deformation(&model)?;
    let dnorm_sq = dnorm * dnorm;
    let k = lanczos(&model.hamiltonian, &o0, &LanczosOptions::default())?;
    let full = agp_norm_from_alpha(&solve(&k.b, mu, Truncation::Full)?, dnorm_sq);
    let (reference, reference_method) = match ExactOracle::new(&model.hamiltonian, &model.deformation) {
        Ok(o) => (o.agp_norm(mu, false)?, "exact"),
        Err(Error::ResourceCap(_)) => (full, "krylov"),
        Err(e) => return Err(e),
    };
    let m = k.max_truncation();
    let mut truncations = Vec::new();
    let mut needed = None;
    for n in 0..=cfg.max_order.min(m.unwrap_or(0)) {
        let norm = agp_norm_from_alpha(&solve(&k.b, mu, Truncation::Order(n))?, dnorm_sq);
        let ratio = if reference > 0.0 { norm / reference } else { 1.0 };
        if needed.is_none() && (ratio - 1.0).abs() <= REPORT_TOLERANCE {
            needed = Some(n);
        }
        truncations.push(json!({"N": n, "norm": norm, "ratio": ratio}));
    }
    Ok(json!({
        "model": model.name,
        "params": model.parameters,
        "params_hash": params_hash(&model.name, &model.parameters),
        "sweep": sweep,
        "mu": mu,
        "krylov_dim": k.k_dim,
        "lanczos_coefficients": k.b.len(),
        "max_truncation": m,
        "reference_method": reference_method,
        "reference_norm": reference,
        "full_krylov_norm": full,
        "truncations": truncations,
        "n_for_agreement": match needed {
            Some(n) => Value::from(n),
            None => Value::from(format!("not reached at N={}", cfg.max_order)),
        },
    }))
}

/// Per-model Krylov dimension and the smallest truncation order whose norm
/// is within 5% of the reference at the sweep midpoint.
pub fn run_truncation_report(cfg: &ExperimentConfig) -> Result<Value> {
    let entries = if cfg.models.is_empty() {
        vec![super::config::ModelEntry {
            model: cfg.model_name()?.to_string(),
            params: cfg.params.clone(),
            sweep: cfg.sweep.clone(),
        }]
    } else {
        cfg.models.clone()
    };
    let reports = with_pool(cfg.threads, || {
        entries
            .par_iter()
            .map(|e| report_entry(cfg, e))
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(json!({ "tolerance": REPORT_TOLERANCE, "models": reports }))
}
