//! Exact diagonalization reference values.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{to_dense_capped, OperatorSum};

/// Largest matrix dimension handed to the dense eigensolver.
pub const MAX_DENSE_DIM: usize = 4096;

/// Number of histogram bins used by [`response_function`] by default.
pub const DEFAULT_RESPONSE_BINS: usize = 200;

/// Couplings across an exact degeneracy below this are treated as absent at `μ = 0`.
pub const DEGENERATE_COUPLING_TOL: f64 = 1e-12;

/// Eigenvalues in ascending order and the matching eigenvector columns.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<Complex64>,
    pub dim: usize,
}

impl Spectrum {
    /// `U† O U`.
    pub fn in_eigenbasis(&self, o: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        self.eigenvectors.adjoint() * o * &self.eigenvectors
    }

    /// `U M U†`.
    pub fn from_eigenbasis(&self, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        &self.eigenvectors * m * self.eigenvectors.adjoint()
    }
}

fn dense_matrix(o: &OperatorSum) -> Result<DMatrix<Complex64>> {
    let sites_cap = MAX_DENSE_DIM.trailing_zeros() as usize;
    let d = to_dense_capped(o, sites_cap)?;
    let m = d.as_dense().expect("dense after conversion").clone();
    if m.nrows() > MAX_DENSE_DIM {
        return Err(Error::ResourceCap(format!(
            "dimension {} exceeds the eigensolver cap {MAX_DENSE_DIM}",
            m.nrows()
        )));
    }
    Ok(m)
}

/// Full Hermitian eigendecomposition, using the real solver when `h` is real.
pub fn eigendecompose(h: &OperatorSum) -> Result<Spectrum> {
    let m = dense_matrix(h)?;
    let dim = m.nrows();
    let scale = m.norm().max(1.0);
    let anti = (&m - m.adjoint()).norm();
    if anti > 1e-12 * scale {
        return Err(Error::NotHermitian(anti));
    }
    let (vals, vecs): (Vec<f64>, DMatrix<Complex64>) = if m.iter().all(|z| z.im == 0.0) {
        let re = m.map(|z| z.re);
        let eig = SymmetricEigen::new(re);
        (
            eig.eigenvalues.iter().copied().collect(),
            eig.eigenvectors.map(|x| Complex64::new(x, 0.0)),
        )
    } else {
        let eig = SymmetricEigen::new(m);
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let eigenvalues = order.iter().map(|&k| vals[k]).collect();
    let eigenvectors = DMatrix::from_fn(dim, dim, |r, c| vecs[(r, order[c])]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        dim,
    })
}

/// Binned response `|⟨m|∂λH|n⟩|²` over `|ω_{mn}|`, divided by `𝒟` and the bin width.
#[derive(Debug, Clone)]
pub struct ResponseSamples {
    pub centers: Vec<f64>,
    pub width: f64,
    pub values: Vec<f64>,
}

impl ResponseSamples {
    /// `∫ w(ω) Φ(ω) dω` by the midpoint rule over the bins.
    pub fn integrate(&self, w: impl Fn(f64) -> f64) -> f64 {
        self.centers
            .iter()
            .zip(&self.values)
            .map(|(&c, &v)| w(c) * v * self.width)
            .sum()
    }
}

/// A Hamiltonian diagonalized once together with the matrix elements of one
/// operator, for repeated queries at different `μ` or `t`.
#[derive(Debug, Clone)]
pub struct ExactOracle {
    pub spectrum: Spectrum,
    /// `⟨m|O|n⟩` in the eigenbasis.
    pub elements: DMatrix<Complex64>,
    /// `(O|O)`.
    pub op_norm_sq: f64,
}

impl ExactOracle {
    pub fn new(h: &OperatorSum, op: &OperatorSum) -> Result<Self> {
        h.check_compatible(op)?;
        let spectrum = eigendecompose(h)?;
        let o = dense_matrix(op)?;
        let op_norm_sq = o.norm_squared() / spectrum.dim as f64;
        let elements = spectrum.in_eigenbasis(&o);
        Ok(ExactOracle {
            spectrum,
            elements,
            op_norm_sq,
        })
    }

    fn omega(&self, m: usize, n: usize) -> f64 {
        self.spectrum.eigenvalues[m] - self.spectrum.eigenvalues[n]
    }

    fn degeneracy_tol(&self) -> f64 {
        let e = &self.spectrum.eigenvalues;
        let scale = e.first().map_or(0.0, |x| x.abs()).max(e.last().map_or(0.0, |x| x.abs()));
        1e-10 * scale.max(1.0)
    }

    fn check_degeneracies(&self) -> Result<()> {
        let tol = self.degeneracy_tol();
        let d = self.spectrum.dim;
        for m in 0..d {
            for n in 0..d {
                if m != n
                    && self.omega(m, n).abs() <= tol
                    && self.elements[(m, n)].norm() >= DEGENERATE_COUPLING_TOL
                {
                    return Err(Error::Divergent(format!(
                        "levels {m} and {n} are degenerate with coupling {:e}; use mu > 0",
                        self.elements[(m, n)].norm()
                    )));
                }
            }
        }
        Ok(())
    }

    /// `(1/𝒟) Σ_{m≠n} ω²/(μ²+ω²)² |⟨m|O|n⟩|²`, optionally divided by `(O|O)`.
    pub fn agp_norm(&self, mu: f64, normalized: bool) -> Result<f64> {
        if mu == 0.0 {
            self.check_degeneracies()?;
        }
        let tol = self.degeneracy_tol();
        let mu2 = mu * mu;
        let d = self.spectrum.dim;
        let mut s = 0.0;
        for n in 0..d {
            for m in 0..d {
                if m == n {
                    continue;
                }
                let w = self.omega(m, n);
                if mu == 0.0 && w.abs() <= tol {
                    continue;
                }
                let den = mu2 + w * w;
                s += w * w / (den * den) * self.elements[(m, n)].norm_sqr();
            }
        }
        s /= d as f64;
        Ok(if normalized { s / self.op_norm_sq } else { s })
    }

    /// Dense AGP `⟨m|A|n⟩ = −i ω/(μ²+ω²) ⟨m|O|n⟩` with zero diagonal,
    /// returned in the computational basis.
    pub fn agp_matrix(&self, mu: f64) -> Result<OperatorSum> {
        if mu == 0.0 {
            self.check_degeneracies()?;
        }
        let tol = self.degeneracy_tol();
        let mu2 = mu * mu;
        let d = self.spectrum.dim;
        let a = DMatrix::from_fn(d, d, |m, n| {
            let w = self.omega(m, n);
            if m == n || (mu == 0.0 && w.abs() <= tol) {
                Complex64::new(0.0, 0.0)
            } else {
                self.elements[(m, n)] * Complex64::new(0.0, -w / (mu2 + w * w))
            }
        });
        Ok(OperatorSum::Dense(self.spectrum.from_eigenbasis(&a)))
    }

    /// `(1/𝒟) Σ_{mn} |⟨m|O|n⟩|² cos(ω_{mn} t)`.
    pub fn autocorrelation(&self, t: f64) -> f64 {
        let d = self.spectrum.dim;
        let mut s = 0.0;
        for n in 0..d {
            for m in 0..d {
                s += self.elements[(m, n)].norm_sqr() * (self.omega(m, n) * t).cos();
            }
        }
        s / d as f64
    }

    /// Spectral weight `(1/𝒟)|⟨m|O|n⟩|²` collected into lines at `|ω_{mn}|`,
    /// sorted by frequency. Degenerate frequencies are merged, and the
    /// diagonal weight sits in the line at zero. With `normalized` the
    /// weights sum to one.
    pub fn spectral_lines(&self, normalized: bool) -> Vec<(f64, f64)> {
        let d = self.spectrum.dim;
        let scale = if normalized {
            1.0 / (d as f64 * self.op_norm_sq)
        } else {
            1.0 / d as f64
        };
        let mut raw: Vec<(f64, f64)> = Vec::with_capacity(d * (d + 1) / 2);
        for n in 0..d {
            for m in 0..=n {
                let mut w = self.elements[(m, n)].norm_sqr();
                if m != n {
                    w += self.elements[(n, m)].norm_sqr();
                }
                if w > 0.0 {
                    raw.push((self.omega(m, n).abs(), w * scale));
                }
            }
        }
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let tol = self.degeneracy_tol();
        let mut lines: Vec<(f64, f64)> = Vec::new();
        for (w, c) in raw {
            match lines.last_mut() {
                Some(last) if w - last.0 <= tol => last.1 += c,
                _ => lines.push((if w <= tol { 0.0 } else { w }, c)),
            }
        }
        lines
    }

    /// Histogram of the off-diagonal weight over `|ω|` in `[0, omega_max]`.
    /// Defaults: `omega_max = max |ω|`, width `omega_max / 200`.
    pub fn response(&self, bin_width: Option<f64>, omega_max: Option<f64>) -> Result<ResponseSamples> {
        let e = &self.spectrum.eigenvalues;
        let spread = e.last().copied().unwrap_or(0.0) - e.first().copied().unwrap_or(0.0);
        let omega_max = omega_max.unwrap_or(spread);
        if !(omega_max > 0.0) {
            return Ok(ResponseSamples {
                centers: vec![0.0],
                width: 1.0,
                values: vec![0.0],
            });
        }
        let width = bin_width.unwrap_or(omega_max / DEFAULT_RESPONSE_BINS as f64);
        if !(width > 0.0) {
            return Err(Error::param("bin_width", "must be positive"));
        }
        let bins = ((omega_max / width).round() as usize).max(1);
        let mut values = vec![0.0; bins];
        let d = self.spectrum.dim;
        for n in 0..d {
            for m in 0..d {
                if m == n {
                    continue;
                }
                let w = self.omega(m, n).abs();
                let k = ((w / width) as usize).min(bins - 1);
                if w <= omega_max * (1.0 + 1e-12) {
                    values[k] += self.elements[(m, n)].norm_sqr();
                }
            }
        }
        let scale = 1.0 / (d as f64 * width);
        values.iter_mut().for_each(|v| *v *= scale);
        let centers = (0..bins).map(|k| (k as f64 + 0.5) * width).collect();
        Ok(ResponseSamples {
            centers,
            width,
            values,
        })
    }
}

/// Exact regularized AGP norm of `d_h` under `h`.
pub fn agp_norm_exact(h: &OperatorSum, d_h: &OperatorSum, mu: f64, normalized: bool) -> Result<f64> {
    ExactOracle::new(h, d_h)?.agp_norm(mu, normalized)
}

/// Exact regularized AGP as a dense operator.
pub fn agp_matrix_exact(h: &OperatorSum, d_h: &OperatorSum, mu: f64) -> Result<OperatorSum> {
    ExactOracle::new(h, d_h)?.agp_matrix(mu)
}

/// Infinite-temperature autocorrelation `(𝒪(t)|𝒪)`.
pub fn autocorrelation(h: &OperatorSum, o_normalized: &OperatorSum, t: f64) -> Result<f64> {
    Ok(ExactOracle::new(h, o_normalized)?.autocorrelation(t))
}

/// Binned response function of `d_h`.
pub fn response_function(
    h: &OperatorSum,
    d_h: &OperatorSum,
    bin_width: Option<f64>,
    omega_max: Option<f64>,
) -> Result<ResponseSamples> {
    ExactOracle::new(h, d_h)?.response(bin_width, omega_max)
}
