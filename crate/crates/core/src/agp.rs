//! The adiabatic gauge potential in the Krylov basis.
//!
//! Only odd Krylov operators enter, `A = Σₖ αₙ𝒪ₙ` with `α_{2k+1} = i aₖ`
//! and real `aₖ`. The coefficients solve the real symmetric positive
//! definite tridiagonal system `T a = (−b₁, 0, …, 0)` with
//!
//! ```text
//! T_kk      = b_{2k+1}² + b_{2k+2}² + μ²
//! T_{k,k+1} = b_{2k+2} b_{2k+3}
//! ```
//!
//! where coefficients beyond the Krylov space are zero. Truncating at order
//! `N` re-solves the leading `(N+1) × (N+1)` block, which is the minimizer of
//! the variational action over the first `N+1` odd operators.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::krylov::{max_truncation, KrylovData};
use crate::operator::{commutator, OperatorSum};

/// Coefficients `aₖ = Im α_{2k+1}` for `k = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct AgpSolution {
    pub a: Vec<f64>,
    pub mu: f64,
    /// `Σ aₖ²`: the norm for a normalized deformation.
    pub norm_sq: f64,
    /// `‖T a − rhs‖∞ / ‖rhs‖∞` after refinement.
    pub relative_residual: f64,
}

impl AgpSolution {
    /// Truncation order `N`, or `None` for the empty ansatz.
    pub fn truncation(&self) -> Option<usize> {
        self.a.len().checked_sub(1)
    }

    pub fn empty(mu: f64) -> Self {
        AgpSolution {
            a: Vec::new(),
            mu,
            norm_sq: 0.0,
            relative_residual: 0.0,
        }
    }
}

/// `b_j` with 1-based index and zero beyond the available coefficients.
fn coef(b: &[f64], j: usize) -> f64 {
    if j == 0 {
        0.0
    } else {
        b.get(j - 1).copied().unwrap_or(0.0)
    }
}

struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl Tridiagonal {
    fn build(b: &[f64], mu: f64, n: usize) -> Self {
        let mu2 = mu * mu;
        let diag = (0..=n)
            .map(|k| coef(b, 2 * k + 1).powi(2) + coef(b, 2 * k + 2).powi(2) + mu2)
            .collect();
        let off = (0..n)
            .map(|k| coef(b, 2 * k + 2) * coef(b, 2 * k + 3))
            .collect();
        Tridiagonal { diag, off }
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        (0..n)
            .map(|k| {
                let mut s = self.diag[k] * x[k];
                if k > 0 {
                    s += self.off[k - 1] * x[k - 1];
                }
                if k + 1 < n {
                    s += self.off[k] * x[k + 1];
                }
                s
            })
            .collect()
    }

    /// Thomas algorithm; fails on a non-positive pivot.
    fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.diag.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let scale = self.diag.iter().cloned().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        for k in 0..n {
            let lower = if k > 0 { self.off[k - 1] } else { 0.0 };
            let pivot = self.diag[k] - if k > 0 { lower * c[k - 1] } else { 0.0 };
            if !(pivot > 1e-14 * scale) {
                return Err(Error::Singular(format!(
                    "pivot {pivot:e} in row {k}; use a regulator mu > 0 (see default_regulator)"
                )));
            }
            c[k] = if k + 1 < n { self.off[k] / pivot } else { 0.0 };
            d[k] = (rhs[k] - if k > 0 { lower * d[k - 1] } else { 0.0 }) / pivot;
        }
        let mut x = d;
        for k in (0..n.saturating_sub(1)).rev() {
            x[k] -= c[k] * x[k + 1];
        }
        Ok(x)
    }
}

/// Solves the truncated system for `a₀ … a_N`.
pub fn solve_alpha(b: &[f64], mu: f64, n_trunc: usize) -> Result<AgpSolution> {
    let m = max_truncation(b).ok_or_else(|| {
        Error::InsufficientCoefficients("no nonzero Lanczos coefficients".into())
    })?;
    if n_trunc > m {
        return Err(Error::InsufficientCoefficients(format!(
            "truncation N = {n_trunc} exceeds the maximum M = {m}"
        )));
    }
    let t = Tridiagonal::build(b, mu, n_trunc);
    let mut rhs = vec![0.0; n_trunc + 1];
    rhs[0] = -b[0];
    let mut a = t.solve(&rhs)?;
    let r: Vec<f64> = rhs.iter().zip(t.apply(&a)).map(|(x, y)| x - y).collect();
    let delta = t.solve(&r)?;
    a.iter_mut().zip(&delta).for_each(|(x, d)| *x += d);
    let rhs_inf = b[0].abs().max(f64::MIN_POSITIVE);
    let res = rhs
        .iter()
        .zip(t.apply(&a))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let norm_sq = a.iter().map(|x| x * x).sum();
    Ok(AgpSolution {
        a,
        mu,
        norm_sq,
        relative_residual: res / rhs_inf,
    })
}

/// Solves at the maximal truncation `N = M`; an empty coefficient list
/// (a deformation commuting with `H`) yields the empty solution.
pub fn solve_alpha_full(b: &[f64], mu: f64) -> Result<AgpSolution> {
    match max_truncation(b) {
        Some(m) => solve_alpha(b, mu, m),
        None => Ok(AgpSolution::empty(mu)),
    }
}

/// `‖∂λH‖² Σ aₖ²`.
pub fn agp_norm_from_alpha(sol: &AgpSolution, deformation_norm_sq: f64) -> f64 {
    deformation_norm_sq * sol.a.iter().map(|x| x * x).sum::<f64>()
}

/// `A = Σₖ i aₖ 𝒪_{2k+1}` for the normalized deformation.
pub fn assemble_agp(krylov: &KrylovData, sol: &AgpSolution) -> Result<OperatorSum> {
    let basis = krylov.basis().ok_or(Error::BasisNotRetained)?;
    // i·aₖ·𝒪_{2k+1} = i·aₖ·i^{2k+1}V_{2k+1} = (−1)^{k+1} aₖ V_{2k+1}
    let terms: Vec<(usize, f64)> = sol
        .a
        .iter()
        .enumerate()
        .map(|(k, &a)| (2 * k + 1, if k % 2 == 0 { -a } else { a }))
        .collect();
    basis.hermitian_combination(&terms)
}

/// Trace-normalized norm of `[H, i∂λH + [H, A]] + μ²A`, which vanishes for the
/// exact regularized gauge potential.
pub fn gauge_residual(
    h: &OperatorSum,
    d_h_normalized: &OperatorSum,
    a_op: &OperatorSum,
    mu: f64,
) -> Result<f64> {
    let inner = d_h_normalized
        .scale(Complex64::new(0.0, 1.0))
        .try_add(&commutator(h, a_op)?)?;
    let r = commutator(h, &inner)?.try_add(&a_op.scale_real(mu * mu))?;
    Ok(r.norm())
}

/// The variational action in real variables,
///
/// `S = (1 + a₀b₁)² + Σ_{k=1}^{N} (a_{k−1}b_{2k} + aₖb_{2k+1})² + a_N² b_{2N+2}² + μ² Σ aₖ²`,
///
/// whose minimizer is [`solve_alpha`] at order `N`.
pub fn variational_action(b: &[f64], a: &[f64], mu: f64) -> f64 {
    let Some(n) = a.len().checked_sub(1) else {
        return 1.0;
    };
    let mut s = (1.0 + a[0] * coef(b, 1)).powi(2);
    for k in 1..=n {
        s += (a[k - 1] * coef(b, 2 * k) + a[k] * coef(b, 2 * k + 1)).powi(2);
    }
    s += (a[n] * coef(b, 2 * n + 2)).powi(2);
    s + mu * mu * a.iter().map(|x| x * x).sum::<f64>()
}

/// Largest violation of `iμαₙ + bₙαₙ₋₁ + bₙ₊₁αₙ₊₁ + iδₙ₀ = 0` over the rows
/// touched by the solution, with `α_{2k+1} = i aₖ` (zero past `N`).
///
/// For `μ > 0` the even coefficients follow from the even rows and the odd
/// rows are checked. At `μ = 0` the even rows decouple and the residual is
/// taken over the rows of the eliminated tridiagonal system instead.
pub fn alpha_recursion_residual(b: &[f64], sol: &AgpSolution) -> f64 {
    let k_len = b.iter().take_while(|&&x| x != 0.0).count();
    if k_len == 0 {
        return 0.0;
    }
    let n = sol.a.len();
    let a_at = |k: usize| sol.a.get(k).copied().unwrap_or(0.0);
    let mu = sol.mu.abs();
    if mu > 0.0 {
        let i = Complex64::new(0.0, 1.0);
        let alpha_odd = |k: usize| i * a_at(k);
        // α_{2k} from the even rows.
        let alpha_even = |k: usize| {
            let lower = if k >= 1 { alpha_odd(k - 1) * coef(b, 2 * k) } else { Complex64::new(0.0, 0.0) };
            let delta = if k == 0 { i } else { Complex64::new(0.0, 0.0) };
            (i / mu) * (lower + alpha_odd(k) * coef(b, 2 * k + 1) + delta)
        };
        let mut worst = 0.0f64;
        for k in 0..=n {
            let row = 2 * k + 1;
            if row > k_len {
                break;
            }
            let r = i * mu * alpha_odd(k)
                + alpha_even(k) * coef(b, row)
                + alpha_even(k + 1) * coef(b, row + 1);
            worst = worst.max(r.norm());
        }
        worst
    } else {
        let m = max_truncation(b).unwrap_or(0);
        let t = Tridiagonal::build(b, 0.0, m);
        let mut x = vec![0.0; m + 1];
        for (k, v) in x.iter_mut().enumerate() {
            *v = a_at(k);
        }
        let tx = t.apply(&x);
        (0..=n.min(m))
            .map(|k| (tx[k] + if k == 0 { b[0] } else { 0.0 }).abs())
            .fold(0.0, f64::max)
    }
}
