//! Exact diagonalization: AGP norm, autocorrelation and response function.
use krylov_agp::exact::ExactOracle;
use krylov_agp::models::{build_model_with, normalized_deformation};
use krylov_agp::Result;

fn main() -> Result<()> {
    let model = build_model_with("chaotic_ising", &[("L", 6.0), ("hx", 0.9)])?;
    let (o0, _) = normalized_deformation(&model)?;
    let oracle = ExactOracle::new(&model.hamiltonian, &o0)?;
    println!("norm at mu = 0.1: {:.10}", oracle.agp_norm(0.1, true)?);
    for t in [0.0, 0.5, 1.0, 2.0, 5.0] {
        println!("C({t}) = {:+.8}", oracle.autocorrelation(t));
    }
    let phi = oracle.response(Some(0.25), Some(4.0))?;
    for (w, v) in phi.centers.iter().zip(&phi.values) {
        println!("Phi({w:.3}) = {v:.6}");
    }
    Ok(())
}
