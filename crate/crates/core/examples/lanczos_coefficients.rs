//! Lanczos coefficients of the normalized deformation of a spin chain.
use krylov_agp::krylov::{lanczos, LanczosOptions};
use krylov_agp::models::{build_model_with, normalized_deformation};
use krylov_agp::Result;

fn main() -> Result<()> {
    let model = build_model_with("ising_periodic", &[("L", 8.0), ("h", 0.8)])?;
    let (o0, norm) = normalized_deformation(&model)?;
    let data = lanczos(&model.hamiltonian, &o0, &LanczosOptions::default())?;
    println!("‖∂H‖ = {norm:.6}, K + 1 = {}, termination {:?}", data.k_dim, data.termination);
    for (n, b) in data.b.iter().enumerate() {
        println!("b_{:<3} {b:.12}", n + 1);
    }
    Ok(())
}
