//! Assembles the gauge potential operator and checks its defining equation.
use krylov_agp::agp::{assemble_agp, gauge_residual, solve_alpha_full};
use krylov_agp::krylov::{lanczos, LanczosOptions};
use krylov_agp::models::{build_model_with, normalized_deformation};
use krylov_agp::Result;

fn main() -> Result<()> {
    let model = build_model_with("four_body", &[("lambda", 0.4)])?;
    let (o0, _) = normalized_deformation(&model)?;
    let data = lanczos(&model.hamiltonian, &o0, &LanczosOptions::with_basis())?;
    let mu = 0.25;
    let sol = solve_alpha_full(&data.b, mu)?;
    let a = assemble_agp(&data, &sol)?;
    println!("A (normalized deformation):");
    for (p, c) in a.as_pauli().unwrap().iter() {
        println!("  {p}  {c:+.12}");
    }
    println!("residual = {:.3e}", gauge_residual(&model.hamiltonian, &o0, &a, mu)?);
    Ok(())
}
