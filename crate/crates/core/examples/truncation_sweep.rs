//! Truncated AGP norms converging to the full Krylov value.
use krylov_agp::agp::{solve_alpha, solve_alpha_full};
use krylov_agp::krylov::{lanczos, LanczosOptions};
use krylov_agp::models::{build_model_with, normalized_deformation};
use krylov_agp::Result;

fn main() -> Result<()> {
    let model = build_model_with("chaotic_ising", &[("L", 7.0), ("hx", 0.9)])?;
    let (o0, _) = normalized_deformation(&model)?;
    let data = lanczos(&model.hamiltonian, &o0, &LanczosOptions::default())?;
    let mu = model.default_mu;
    let full = solve_alpha_full(&data.b, mu)?.norm_sq;
    println!("mu = {mu:.4}, M = {:?}, full = {full:.8}", data.max_truncation());
    for n in 0..=8.min(data.max_truncation().unwrap_or(0)) {
        let s = solve_alpha(&data.b, mu, n)?;
        println!("N = {n}: {:.8} ({:.1}% of full)", s.norm_sq, 100.0 * s.norm_sq / full);
    }
    Ok(())
}
