//! Moments from Lanczos coefficients, the inverse map and the large-mu series.
use krylov_agp::agp::solve_alpha_full;
use krylov_agp::autocorr::agp_norm_from_moments;
use krylov_agp::krylov::{lanczos_from_moments, moments_from_lanczos};
use krylov_agp::Result;

fn main() -> Result<()> {
    let b: Vec<f64> = (1..=12).map(|n| (n as f64).sqrt()).collect();
    let m = moments_from_lanczos(&b, 12)?;
    println!("moments m_0..m_12: {:?}", m.m);
    println!("recovered b: {:?}", lanczos_from_moments(&m)?);
    let mu = 6.0;
    let exact = solve_alpha_full(&b, mu)?.norm_sq;
    for order in 1..=6 {
        let s = agp_norm_from_moments(&m, mu, order)?;
        println!("order {order}: {:.10} (exact {exact:.10}, last term {:.1e})", s.value, s.error_estimate);
    }
    Ok(())
}
