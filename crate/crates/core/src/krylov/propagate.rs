use crate::error::{Error, Result};

/// Krylov wavefunctions `ψₙ(t)` sampled on a time grid.
#[derive(Debug, Clone)]
pub struct PsiTable {
    pub t: Vec<f64>,
    /// `psi[i][n]` is `ψₙ(t[i])`.
    pub psi: Vec<Vec<f64>>,
    /// Largest `|Σₙ ψₙ² − 1|` seen over the grid.
    pub max_norm_drift: f64,
}

impl PsiTable {
    /// `ψ₀(t)` at every grid point, which is the autocorrelation function.
    pub fn autocorrelation(&self) -> Vec<f64> {
        self.psi.iter().map(|row| row[0]).collect()
    }
}

fn derivative(b: &[f64], psi: &[f64], out: &mut [f64]) {
    let k = psi.len();
    for n in 0..k {
        let down = if n >= 1 { b[n - 1] * psi[n - 1] } else { 0.0 };
        let up = if n + 1 < k { b[n] * psi[n + 1] } else { 0.0 };
        out[n] = down - up;
    }
}

/// Integrates `∂ₜψₙ = bₙψₙ₋₁ − bₙ₊₁ψₙ₊₁` from `ψₙ(0) = δₙ₀` with classic RK4,
/// using steps no longer than `0.01 / max b`.
pub fn propagate_psi(b: &[f64], t_grid: &[f64]) -> Result<PsiTable> {
    if b.is_empty() {
        return Err(Error::InsufficientCoefficients("empty coefficient list".into()));
    }
    if t_grid.first().is_some_and(|&t| t < 0.0) || t_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("time grid must be non-decreasing from t ≥ 0".into()));
    }
    let b_max = b.iter().cloned().fold(0.0, f64::max);
    let h_max = if b_max > 0.0 { 0.01 / b_max } else { f64::INFINITY };
    let k = b.len() + 1;
    let mut psi = vec![0.0; k];
    psi[0] = 1.0;
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; k], vec![0.0; k], vec![0.0; k], vec![0.0; k]);
    let mut tmp = vec![0.0; k];
    let mut t = 0.0;
    let mut rows = Vec::with_capacity(t_grid.len());
    let mut drift = 0.0f64;
    for &target in t_grid {
        let span = target - t;
        if span > 0.0 {
            let steps = (span / h_max).ceil().max(1.0) as usize;
            let h = span / steps as f64;
            for _ in 0..steps {
                derivative(b, &psi, &mut k1);
                for n in 0..k {
                    tmp[n] = psi[n] + 0.5 * h * k1[n];
                }
                derivative(b, &tmp, &mut k2);
                for n in 0..k {
                    tmp[n] = psi[n] + 0.5 * h * k2[n];
                }
                derivative(b, &tmp, &mut k3);
                for n in 0..k {
                    tmp[n] = psi[n] + h * k3[n];
                }
                derivative(b, &tmp, &mut k4);
                for n in 0..k {
                    psi[n] += h / 6.0 * (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]);
                }
            }
            t = target;
        }
        drift = drift.max((psi.iter().map(|x| x * x).sum::<f64>() - 1.0).abs());
        rows.push(psi.clone());
    }
    Ok(PsiTable {
        t: t_grid.to_vec(),
        psi: rows,
        max_norm_drift: drift,
    })
}
