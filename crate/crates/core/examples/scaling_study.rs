//! Exponential growth of the AGP norm with system size at mu = L 2^-L.
use krylov_agp::autocorr::{scaling_study, AutocorrSpec, QuadOptions};
use krylov_agp::Result;

fn main() -> Result<()> {
    for spec in [AutocorrSpec::gaussian(), AutocorrSpec::su2_cos(8, 1.0)?] {
        let study = scaling_study(&spec, &(6..=16).collect::<Vec<_>>(), &QuadOptions::default())?;
        println!("{}: slope {:.4} (ln 2 = {:.4})", spec.name(), study.fit.slope, 2f64.ln());
        for r in &study.rows {
            println!("  L = {:>2}  mu = {:.3e}  norm/L = {:.6e}  {}", r.l, r.mu, r.norm_over_l, r.method.as_str());
        }
    }
    Ok(())
}
