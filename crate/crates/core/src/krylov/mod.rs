//! Operator-space Lanczos iteration and related Krylov-chain tools.

mod moments;
mod propagate;
mod space;
mod symmetry;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{inner_product, OperatorSum};

pub use moments::{lanczos_from_moments, moments_from_lanczos, MomentSequence};
pub use propagate::{propagate_psi, PsiTable};

use space::{ClassVec, Space};

/// Default relative termination tolerance on `b_n`.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reorthogonalization {
    /// Classical Gram–Schmidt against every earlier vector of the same class,
    /// repeated once when the first pass removes more than half of `‖w‖²`.
    Full,
    /// Plain three-term recurrence.
    None,
}

#[derive(Debug, Clone)]
pub struct LanczosOptions {
    /// Upper bound on the number of coefficients; `None` means the
    /// operator-space bound `𝒟² − 𝒟`.
    pub max_steps: Option<usize>,
    pub tol: f64,
    pub keep_basis: bool,
    pub reorth: Reorthogonalization,
    /// Project every new vector onto the symmetry sector shared by `h` and
    /// `o0` (translations, reflection and z-axis rotations of Pauli chains;
    /// basis reversal, such as `m → −m` of a spin, for dense matrices).
    pub symmetry_projection: bool,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            max_steps: None,
            tol: DEFAULT_TOLERANCE,
            keep_basis: false,
            reorth: Reorthogonalization::Full,
            symmetry_projection: true,
        }
    }
}

impl LanczosOptions {
    pub fn with_basis() -> Self {
        LanczosOptions {
            keep_basis: true,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// `b_n` fell below tolerance: the Krylov space closed.
    Closed,
    MaxSteps,
}

/// The orthonormal Krylov operators `𝒪ₙ = iⁿVₙ`, stored as real coordinates.
#[derive(Debug, Clone)]
pub struct KrylovBasis {
    space: Space,
    vectors: Vec<ClassVec>,
}

impl KrylovBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Materializes `𝒪ₙ`.
    pub fn operator(&self, n: usize) -> Result<OperatorSum> {
        let v = self.vectors.get(n).ok_or_else(|| {
            Error::Dimension(format!("basis has {} operators, asked for {n}", self.len()))
        })?;
        let herm = self.space.to_operator(v);
        Ok(match n % 4 {
            0 => herm,
            1 => herm.scale(Complex64::new(0.0, 1.0)),
            2 => herm.scale_real(-1.0),
            _ => herm.scale(Complex64::new(0.0, -1.0)),
        })
    }

    /// The Hermitian factor `Vₙ = i⁻ⁿ𝒪ₙ`.
    pub fn hermitian_factor(&self, n: usize) -> Result<OperatorSum> {
        self.vectors
            .get(n)
            .map(|v| self.space.to_operator(v))
            .ok_or_else(|| Error::Dimension(format!("no basis operator {n}")))
    }

    /// `Σ cₖ V_{nₖ}` for real `cₖ`, formed in coordinates before materializing.
    pub fn hermitian_combination(&self, terms: &[(usize, f64)]) -> Result<OperatorSum> {
        let mut acc: [Option<ClassVec>; 2] = [None, None];
        for &(n, c) in terms {
            let v = self
                .vectors
                .get(n)
                .ok_or_else(|| Error::Dimension(format!("no basis operator {n}")))?;
            let slot = acc[v.class].get_or_insert_with(|| ClassVec {
                class: v.class,
                coords: Vec::new(),
            });
            if slot.coords.len() < v.coords.len() {
                slot.coords.resize(v.coords.len(), 0.0);
            }
            axpy(&mut slot.coords, c, &v.coords);
        }
        let mut parts = acc.iter().flatten().map(|v| self.space.to_operator(v));
        let zero = self.space.to_operator(&ClassVec {
            class: 0,
            coords: Vec::new(),
        });
        Ok(match (parts.next(), parts.next()) {
            (None, _) => zero,
            (Some(a), None) => a,
            (Some(a), Some(b)) => &a + &b,
        })
    }

    /// Whether the real-matrix class splitting was active.
    pub fn class_split(&self) -> bool {
        self.space.is_split()
    }
}

/// Lanczos coefficients `b₁..b_K` and, optionally, the Krylov basis.
#[derive(Debug, Clone)]
pub struct KrylovData {
    pub b: Vec<f64>,
    /// Number of Krylov operators `K + 1`.
    pub k_dim: usize,
    pub termination: Termination,
    basis: Option<KrylovBasis>,
}

impl KrylovData {
    pub fn basis(&self) -> Option<&KrylovBasis> {
        self.basis.as_ref()
    }

    pub fn operator(&self, n: usize) -> Result<OperatorSum> {
        self.basis.as_ref().ok_or(Error::BasisNotRetained)?.operator(n)
    }

    /// Largest admissible truncation order `M`: the odd operators are
    /// `𝒪₁, 𝒪₃, …, 𝒪_{2M+1}`.
    pub fn max_truncation(&self) -> Option<usize> {
        max_truncation(&self.b)
    }
}

/// `M = ⌈K/2⌉ − 1` for `K` nonzero coefficients; `None` if there are none.
pub fn max_truncation(b: &[f64]) -> Option<usize> {
    let k = b.iter().take_while(|&&x| x != 0.0).count();
    k.div_ceil(2).checked_sub(1)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len());
    let (a, b) = (&a[..n], &b[..n]);
    let mut acc = [0.0f64; 8];
    let mut ca = a.chunks_exact(8);
    let mut cb = b.chunks_exact(8);
    for (x, y) in ca.by_ref().zip(cb.by_ref()) {
        for k in 0..8 {
            acc[k] += x[k] * y[k];
        }
    }
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    acc.iter().sum::<f64>() + tail
}

fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Runs the operator Lanczos algorithm for the Liouvillian `ℒ = [h, ·]`
/// starting from the normalized Hermitian operator `o0`.
pub fn lanczos(h: &OperatorSum, o0: &OperatorSum, opts: &LanczosOptions) -> Result<KrylovData> {
    h.check_compatible(o0)?;
    let norm = inner_product(o0, o0)?.re;
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm));
    }
    let h_anti = h.anti_hermitian_part_norm();
    if h_anti > 1e-12 * h.norm().max(1.0) {
        return Err(Error::NotHermitian(h_anti));
    }
    let o_anti = o0.anti_hermitian_part_norm();
    if o_anti > 1e-12 {
        return Err(Error::NotHermitian(o_anti));
    }

    let dim = h.dim();
    let bound = dim
        .checked_mul(dim)
        .map(|d2| d2 - dim)
        .unwrap_or(usize::MAX);
    let max_steps = opts.max_steps.unwrap_or(bound).min(bound);

    let (mut space, v0) = Space::new(h, o0, opts.symmetry_projection);
    let mut vectors: Vec<ClassVec> = vec![v0];
    let mut b: Vec<f64> = Vec::new();
    let mut b_max = 0.0f64;
    let mut termination = Termination::MaxSteps;

    loop {
        let n = b.len() + 1;
        let mut w = space.apply(&vectors[n - 1]);
        space.symmetrize(&mut w);
        let len = space.class_len(w.class);
        w.coords.resize(len, 0.0);
        if n >= 2 {
            let prev = &vectors[n - 2];
            debug_assert_eq!(prev.class, w.class);
            axpy(&mut w.coords, b[n - 2], &prev.coords);
        }
        if opts.reorth == Reorthogonalization::Full {
            for _ in 0..2 {
                let before = dot(&w.coords, &w.coords);
                let coefs: Vec<(usize, f64)> = vectors
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| v.class == w.class)
                    .map(|(k, v)| (k, dot(&v.coords, &w.coords)))
                    .collect();
                for (k, c) in coefs {
                    axpy(&mut w.coords, -c, &vectors[k].coords);
                }
                if dot(&w.coords, &w.coords) > 0.5 * before {
                    break;
                }
            }
        }
        let bn = dot(&w.coords, &w.coords).sqrt();
        if bn <= opts.tol * b_max.max(1.0) {
            termination = Termination::Closed;
            break;
        }
        if b.len() >= max_steps {
            break;
        }
        b_max = b_max.max(bn);
        w.coords.iter_mut().for_each(|x| *x /= bn);
        b.push(bn);
        vectors.push(w);
    }

    let k_dim = b.len() + 1;
    let basis = if opts.keep_basis {
        space.release_cache();
        Some(KrylovBasis { space, vectors })
    } else {
        None
    };
    Ok(KrylovData {
        b,
        k_dim,
        termination,
        basis,
    })
}
