//! Driving a sweep from a JSON configuration without the binary.
use krylov_agp::cli::{run, ExperimentConfig, OutputFormat};
use krylov_agp::Result;

fn main() -> Result<()> {
    let cfg = ExperimentConfig::from_json(
        r#"{
            "subcommand": "sweep",
            "model": "two_qubit",
            "params": {"epsilon": 0.5},
            "sweep": {"parameter": "lambda", "from": 0.0, "to": 2.0, "steps": 5},
            "mu": 0.0,
            "truncate": [0, "full"],
            "methods": ["krylov", "exact"]
        }"#,
    )?;
    cfg.validate()?;
    print!("{}", run(&cfg)?.render(OutputFormat::Csv));
    Ok(())
}
