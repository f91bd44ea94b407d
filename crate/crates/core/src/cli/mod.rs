//! Batch experiment runner: argument parsing, configuration resolution and
//! output. The `krylov-agp` binary is a thin wrapper around [`main_with_args`].

mod config;
mod run;
mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, ValueEnum};
use serde_json::Value;

pub use config::{
    ExperimentConfig, Method, ModelEntry, MuPolicy, OutputFormat, ScalingConfig, Subcommand, SweepAxis,
    Truncation,
};
pub use run::{
    autocorr_norm, evaluate_point, params_hash, run_agp, run_agp_sweep, run_lanczos, run_scaling,
    run_truncation_report, NormRow, LANCZOS_COLUMNS, MAX_AUTOCORR_GRID, NORM_COLUMNS, REPORT_TOLERANCE,
    SCALING_COLUMNS,
};
pub use table::{Cell, Table};

use crate::error::{Error, Result};

/// Process exit code for an error: 2 for configuration problems, 3 for
/// numerical failures and 4 for resource caps.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config { .. } | Error::InvalidParameter { .. } | Error::UnknownModel(_) | Error::Io(_) => 2,
        Error::UnsupportedFamily(_) => 2,
        Error::ResourceCap(_) => 4,
        _ => 3,
    }
}

#[derive(Debug, Parser)]
#[command(name = "krylov-agp", version, about = "Adiabatic gauge potential norms via operator Lanczos")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Subcommand)]
pub enum Command {
    /// Lanczos coefficients of the normalized deformation.
    Lanczos(SharedArgs),
    /// AGP norms at a single parameter point.
    Agp(SharedArgs),
    /// AGP norms over a parameter sweep.
    Sweep(SharedArgs),
    /// Norm scaling of an autocorrelation family at mu = L 2^-L.
    Scaling(SharedArgs),
    /// Krylov dimension and truncation order needed for 5% agreement (JSON).
    TruncationReport(SharedArgs),
}

impl Command {
    fn parts(&self) -> (Subcommand, &SharedArgs) {
        match self {
            Command::Lanczos(a) => (Subcommand::Lanczos, a),
            Command::Agp(a) => (Subcommand::Agp, a),
            Command::Sweep(a) => (Subcommand::Sweep, a),
            Command::Scaling(a) => (Subcommand::Scaling, a),
            Command::TruncationReport(a) => (Subcommand::TruncationReport, a),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Default, Args)]
pub struct SharedArgs {
    /// JSON configuration file; flags override its keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub model: Option<String>,
    /// Model parameter, repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    /// Sweep axis as `parameter:from:to:steps`.
    #[arg(long)]
    pub sweep: Option<String>,
    /// `auto` or a fixed regulator.
    #[arg(long)]
    pub mu: Option<String>,
    /// Truncation orders, e.g. `0..8,full`.
    #[arg(long)]
    pub truncate: Option<String>,
    /// Comma-separated methods: krylov, exact, autocorr.
    #[arg(long = "method")]
    pub methods: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Reserved: all algorithms are deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Autocorrelation family for `scaling`.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub offset: Option<f64>,
    /// Comma-separated system sizes for `scaling`.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// Highest truncation order searched by `truncation-report`.
    #[arg(long)]
    pub max_order: Option<usize>,
    /// Emit the resolved configuration and exit.
    #[arg(long)]
    pub print_config: bool,
}

/// Loads the configuration file, if any, and applies flag overrides.
pub fn resolve_config(sub: Subcommand, a: &SharedArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::config("config", format!("{}: {e}", path.display())))?;
            ExperimentConfig::from_json(&text)?
        }
        None => ExperimentConfig::default(),
    };
    cfg.subcommand = Some(sub);
    if let Some(m) = &a.model {
        cfg.model = Some(m.clone());
    }
    for p in &a.params {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| Error::config("param", format!("expected KEY=VALUE, got `{p}`")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::config(&format!("param.{k}"), format!("`{v}` is not a number")))?;
        cfg.params.insert(k.trim().to_string(), v);
    }
    if let Some(s) = &a.sweep {
        cfg.sweep = Some(SweepAxis::parse(s)?);
    }
    if let Some(m) = &a.mu {
        cfg.mu = MuPolicy::parse(m)?;
    }
    if let Some(t) = &a.truncate {
        cfg.truncate = Truncation::parse_list(t)?;
    }
    if let Some(m) = &a.methods {
        cfg.methods = m
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(Method::parse)
            .collect::<Result<_>>()?;
    }
    if let Some(o) = &a.out {
        cfg.out = Some(o.clone());
    }
    if let Some(f) = a.format {
        cfg.format = match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        };
    }
    if let Some(t) = a.threads {
        cfg.threads = t;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(n) = a.max_order {
        cfg.max_order = n;
    }
    if a.family.is_some() || a.alpha.is_some() || a.eta.is_some() || a.offset.is_some() || a.sizes.is_some() {
        let mut sc = cfg.scaling.take().unwrap_or(ScalingConfig {
            family: String::new(),
            alpha: None,
            eta: None,
            offset: 0.0,
            sizes: (6..=16).collect(),
        });
        if let Some(f) = &a.family {
            sc.family = f.clone();
        }
        sc.alpha = a.alpha.or(sc.alpha);
        sc.eta = a.eta.or(sc.eta);
        sc.offset = a.offset.unwrap_or(sc.offset);
        if let Some(s) = &a.sizes {
            sc.sizes = s.clone();
        }
        if sc.family.is_empty() {
            return Err(Error::config("scaling.family", "no family given"));
        }
        cfg.scaling = Some(sc);
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Output of one subcommand.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Table(Table),
    Json(Value),
}

impl Output {
    pub fn render(&self, format: OutputFormat) -> String {
        match (self, format) {
            (Output::Table(t), OutputFormat::Csv) => t.to_csv_string(),
            (Output::Table(t), OutputFormat::Json) => pretty(&t.to_json()),
            (Output::Json(v), _) => pretty(v),
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

pub fn run(cfg: &ExperimentConfig) -> Result<Output> {
    let sub = cfg
        .subcommand
        .ok_or_else(|| Error::config("subcommand", "no subcommand given"))?;
    Ok(match sub {
        Subcommand::Lanczos => Output::Table(run_lanczos(cfg)?),
        Subcommand::Agp => Output::Table(run_agp(cfg)?),
        Subcommand::Sweep => Output::Table(run_agp_sweep(cfg)?),
        Subcommand::Scaling => Output::Table(run_scaling(cfg)?),
        Subcommand::TruncationReport => Output::Json(run_truncation_report(cfg)?),
    })
}

fn execute(cli: &Cli) -> Result<()> {
    let (sub, args) = cli.command.parts();
    let cfg = resolve_config(sub, args)?;
    if args.print_config {
        println!("{}", cfg.to_json());
        return Ok(());
    }
    let text = run(&cfg)?.render(cfg.format);
    match &cfg.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::config("out", format!("{}: {e}", path.display())))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Parses arguments, runs and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
