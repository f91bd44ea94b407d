//! AGP norm from the Lanczos coefficients against the exact oracle.
use krylov_agp::agp::solve_alpha_full;
use krylov_agp::autocorr::agp_norm_bound;
use krylov_agp::exact::agp_norm_exact;
use krylov_agp::krylov::{lanczos, LanczosOptions};
use krylov_agp::models::{build_model_with, normalized_deformation};
use krylov_agp::Result;

fn main() -> Result<()> {
    let model = build_model_with("xxz_open", &[("L", 6.0), ("delta", 0.6)])?;
    let (o0, d) = normalized_deformation(&model)?;
    let data = lanczos(&model.hamiltonian, &o0, &LanczosOptions::default())?;
    let m = data.max_truncation().unwrap_or(0);
    println!("{:>8} {:>16} {:>16} {:>12}", "mu", "krylov", "exact", "bound");
    for mu in [1.0, 0.3, 0.1, 0.03] {
        let krylov = solve_alpha_full(&data.b, mu)?.norm_sq * d * d;
        let exact = agp_norm_exact(&model.hamiltonian, &model.deformation, mu, false)?;
        println!("{mu:>8} {krylov:>16.10} {exact:>16.10} {:>12.4e}", agp_norm_bound(m + 1, mu, d * d));
    }
    Ok(())
}
