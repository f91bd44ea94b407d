//! Krylov wavefunctions and the autocorrelation they carry.
use krylov_agp::exact::ExactOracle;
use krylov_agp::krylov::{lanczos, propagate_psi, LanczosOptions};
use krylov_agp::models::{build_model_with, normalized_deformation};
use krylov_agp::Result;

fn main() -> Result<()> {
    let model = build_model_with("ising_periodic", &[("L", 6.0), ("h", 0.5)])?;
    let (o0, _) = normalized_deformation(&model)?;
    let data = lanczos(&model.hamiltonian, &o0, &LanczosOptions::default())?;
    let grid: Vec<f64> = (0..=20).map(|i| 0.5 * i as f64).collect();
    let psi = propagate_psi(&data.b, &grid)?;
    let oracle = ExactOracle::new(&model.hamiltonian, &o0)?;
    for (t, c) in grid.iter().zip(psi.autocorrelation()) {
        println!("t = {t:>4}: psi_0 = {c:+.10}, exact {:+.10}", oracle.autocorrelation(*t));
    }
    println!("max norm drift {:.2e}", psi.max_norm_drift);
    Ok(())
}
