//! Krylov dimension and AGP norm of the collective-spin model across the transition.
use krylov_agp::agp::solve_alpha_full;
use krylov_agp::krylov::{lanczos, LanczosOptions};
use krylov_agp::models::{build_model_with, normalized_deformation};
use krylov_agp::Result;

fn main() -> Result<()> {
    for s in [10.0, 20.0] {
        for j in [0.1, 0.5, 1.0] {
            let model = build_model_with("lmg", &[("S", s), ("J", j)])?;
            let (o0, d) = normalized_deformation(&model)?;
            let data = lanczos(&model.hamiltonian, &o0, &LanczosOptions::default())?;
            let norm = solve_alpha_full(&data.b, model.default_mu)?.norm_sq * d * d;
            println!("S = {s:>4}, J = {j:.2}: K = {:>4}, mu = {:.3e}, norm = {norm:.6e}", data.b.len(), model.default_mu);
        }
    }
    Ok(())
}
