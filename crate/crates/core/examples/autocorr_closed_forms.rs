//! Norms of the analytic autocorrelation families by quadrature and in closed form.
use krylov_agp::autocorr::{agp_norm_from_autocorr, closed_form_norm, AutocorrSpec, QuadOptions};
use krylov_agp::Result;

fn main() -> Result<()> {
    let quad = QuadOptions::default();
    let families = [
        AutocorrSpec::gaussian(),
        AutocorrSpec::sech(1.0, 0.5)?,
        AutocorrSpec::su2_cos(4, 1.0)?,
        AutocorrSpec::bessel_const(1.0)?,
        AutocorrSpec::bessel_j0sq(1.0)?,
        AutocorrSpec::xy_chain(),
    ];
    let mu = 0.5;
    for spec in families {
        let q = agp_norm_from_autocorr(&spec, mu, &quad)?;
        let closed = closed_form_norm(&spec, mu).map_or("n/a".to_string(), |v| format!("{v:.12}"));
        println!("{:<14} quadrature {:.12} ± {:.1e}  closed form {closed}", spec.name(), q.value, q.error);
    }
    Ok(())
}
