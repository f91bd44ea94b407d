//! Operator algebra over two interchangeable backends.
//!
//! [`OperatorSum::Pauli`] holds a sparse linear combination of Pauli strings;
//! [`OperatorSum::Dense`] holds an explicit complex matrix. Both expose the
//! same products, commutators and the trace-normalized inner product
//! `(A|B) = Tr(A†B) / D`.

mod pauli;

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub use pauli::{pauli_multiply, Pauli, PauliString, Phase, MAX_SITES};

/// Coefficients with magnitude below this are removed after every operation.
pub const DROP_TOLERANCE: f64 = 1e-14;

/// Default largest site count that [`to_dense`] will expand.
pub const DEFAULT_DENSE_SITE_CAP: usize = 12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    SparsePauli,
    Dense,
}

impl Backend {
    fn name(self) -> &'static str {
        match self {
            Backend::SparsePauli => "sparse-pauli",
            Backend::Dense => "dense",
        }
    }
}

/// Sparse sum `Σ c_P P` over Pauli strings on a fixed number of sites.
///
/// Terms are kept sorted by string so iteration order is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_sites: usize,
    terms: Vec<(PauliString, Complex64)>,
}

impl PauliSum {
    pub fn zero(n_sites: usize) -> Self {
        PauliSum {
            n_sites,
            terms: Vec::new(),
        }
    }

    /// Collects terms, merging repeated strings and dropping tiny coefficients.
    pub fn from_terms<I>(n_sites: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliString, Complex64)>,
    {
        let mut acc: HashMap<PauliString, Complex64> = HashMap::new();
        for (p, c) in terms {
            if p.n_sites() != n_sites {
                return Err(Error::Dimension(format!(
                    "string {p} does not live on {n_sites} sites"
                )));
            }
            *acc.entry(p).or_insert(ZERO) += c;
        }
        Ok(Self::finish(n_sites, acc))
    }

    fn finish(n_sites: usize, acc: HashMap<PauliString, Complex64>) -> Self {
        let mut terms: Vec<_> = acc
            .into_iter()
            .filter(|(_, c)| c.norm() >= DROP_TOLERANCE)
            .collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        PauliSum { n_sites, terms }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(PauliString, Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &PauliString) -> Complex64 {
        self.terms
            .binary_search_by(|t| t.0.cmp(p))
            .map(|k| self.terms[k].1)
            .unwrap_or(ZERO)
    }

    fn combine(&self, other: &PauliSum, sign: f64) -> PauliSum {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let pick = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            let (p, c) = match pick {
                std::cmp::Ordering::Less => {
                    i += 1;
                    self.terms[i - 1]
                }
                std::cmp::Ordering::Greater => {
                    j += 1;
                    (other.terms[j - 1].0, other.terms[j - 1].1 * sign)
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                    (self.terms[i - 1].0, self.terms[i - 1].1 + other.terms[j - 1].1 * sign)
                }
            };
            if c.norm() >= DROP_TOLERANCE {
                out.push((p, c));
            }
        }
        PauliSum {
            n_sites: self.n_sites,
            terms: out,
        }
    }

    fn product(&self, other: &PauliSum) -> PauliSum {
        let mut acc: HashMap<PauliString, Complex64> = HashMap::new();
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                let (ph, r) = p.mul_unchecked(q);
                *acc.entry(r).or_insert(ZERO) += ph.to_complex() * a * b;
            }
        }
        Self::finish(self.n_sites, acc)
    }

    /// `[self, other]`, using that Pauli strings either commute or anticommute.
    fn commutator(&self, other: &PauliSum) -> PauliSum {
        let mut acc: HashMap<PauliString, Complex64> = HashMap::new();
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                if p.commutes_with(q) {
                    continue;
                }
                let (ph, r) = p.mul_unchecked(q);
                *acc.entry(r).or_insert(ZERO) += ph.to_complex() * a * b * 2.0;
            }
        }
        Self::finish(self.n_sites, acc)
    }

    fn map(&self, f: impl Fn(Complex64) -> Complex64) -> PauliSum {
        PauliSum {
            n_sites: self.n_sites,
            terms: self
                .terms
                .iter()
                .map(|&(p, c)| (p, f(c)))
                .filter(|(_, c)| c.norm() >= DROP_TOLERANCE)
                .collect(),
        }
    }

    fn inner(&self, other: &PauliSum) -> Complex64 {
        let (mut i, mut j) = (0, 0);
        let mut s = ZERO;
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].0.cmp(&other.terms[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    s += self.terms[i].1.conj() * other.terms[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        s
    }

    fn to_matrix(&self) -> DMatrix<Complex64> {
        let d = 1usize << self.n_sites;
        let mut m = DMatrix::from_element(d, d, ZERO);
        for (p, c) in &self.terms {
            for col in 0..d {
                let (row, v) = p.column_entry(col);
                m[(row, col)] += c * v;
            }
        }
        m
    }
}

/// A linear operator in either backend.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorSum {
    Pauli(PauliSum),
    Dense(DMatrix<Complex64>),
}

impl OperatorSum {
    pub fn zero_pauli(n_sites: usize) -> Self {
        OperatorSum::Pauli(PauliSum::zero(n_sites))
    }

    pub fn from_pauli_terms<I>(n_sites: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliString, Complex64)>,
    {
        Ok(OperatorSum::Pauli(PauliSum::from_terms(n_sites, terms)?))
    }

    /// Sum with real coefficients, the common case for Hamiltonians.
    pub fn from_real_terms<I>(n_sites: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliString, f64)>,
    {
        Self::from_pauli_terms(
            n_sites,
            terms.into_iter().map(|(p, c)| (p, Complex64::new(c, 0.0))),
        )
    }

    pub fn from_string(p: PauliString) -> Self {
        OperatorSum::Pauli(PauliSum {
            n_sites: p.n_sites(),
            terms: vec![(p, Complex64::new(1.0, 0.0))],
        })
    }

    pub fn dense(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Dimension(format!(
                "dense operator must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(OperatorSum::Dense(m))
    }

    pub fn dense_identity(dim: usize) -> Self {
        OperatorSum::Dense(DMatrix::identity(dim, dim))
    }

    pub fn backend(&self) -> Backend {
        match self {
            OperatorSum::Pauli(_) => Backend::SparsePauli,
            OperatorSum::Dense(_) => Backend::Dense,
        }
    }

    /// Hilbert-space dimension (saturates for very large site counts).
    pub fn dim(&self) -> usize {
        match self {
            OperatorSum::Pauli(s) => 1usize.checked_shl(s.n_sites as u32).unwrap_or(usize::MAX),
            OperatorSum::Dense(m) => m.nrows(),
        }
    }

    pub fn as_pauli(&self) -> Option<&PauliSum> {
        match self {
            OperatorSum::Pauli(s) => Some(s),
            OperatorSum::Dense(_) => None,
        }
    }

    pub fn as_dense(&self) -> Option<&DMatrix<Complex64>> {
        match self {
            OperatorSum::Dense(m) => Some(m),
            OperatorSum::Pauli(_) => None,
        }
    }

    pub(crate) fn check_compatible(&self, other: &OperatorSum) -> Result<()> {
        match (self, other) {
            (OperatorSum::Pauli(a), OperatorSum::Pauli(b)) if a.n_sites != b.n_sites => {
                Err(Error::Dimension(format!(
                    "operators on {} and {} sites",
                    a.n_sites, b.n_sites
                )))
            }
            (OperatorSum::Dense(a), OperatorSum::Dense(b)) if a.nrows() != b.nrows() => {
                Err(Error::Dimension(format!(
                    "dense operators of dimension {} and {}",
                    a.nrows(),
                    b.nrows()
                )))
            }
            (a, b) if a.backend() != b.backend() => Err(Error::BackendMismatch {
                left: a.backend().name(),
                right: b.backend().name(),
            }),
            _ => Ok(()),
        }
    }

    pub fn try_add(&self, other: &OperatorSum) -> Result<OperatorSum> {
        self.check_compatible(other)?;
        Ok(match (self, other) {
            (OperatorSum::Pauli(a), OperatorSum::Pauli(b)) => OperatorSum::Pauli(a.combine(b, 1.0)),
            (OperatorSum::Dense(a), OperatorSum::Dense(b)) => OperatorSum::Dense(a + b),
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, other: &OperatorSum) -> Result<OperatorSum> {
        self.check_compatible(other)?;
        Ok(match (self, other) {
            (OperatorSum::Pauli(a), OperatorSum::Pauli(b)) => {
                OperatorSum::Pauli(a.combine(b, -1.0))
            }
            (OperatorSum::Dense(a), OperatorSum::Dense(b)) => OperatorSum::Dense(a - b),
            _ => unreachable!(),
        })
    }

    /// Operator product `self · other`.
    pub fn try_mul(&self, other: &OperatorSum) -> Result<OperatorSum> {
        self.check_compatible(other)?;
        Ok(match (self, other) {
            (OperatorSum::Pauli(a), OperatorSum::Pauli(b)) => OperatorSum::Pauli(a.product(b)),
            (OperatorSum::Dense(a), OperatorSum::Dense(b)) => OperatorSum::Dense(a * b),
            _ => unreachable!(),
        })
    }

    pub fn scale(&self, s: Complex64) -> OperatorSum {
        match self {
            OperatorSum::Pauli(a) => OperatorSum::Pauli(a.map(|c| c * s)),
            OperatorSum::Dense(m) => OperatorSum::Dense(m * s),
        }
    }

    pub fn scale_real(&self, s: f64) -> OperatorSum {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn dagger(&self) -> OperatorSum {
        match self {
            OperatorSum::Pauli(a) => OperatorSum::Pauli(a.map(|c| c.conj())),
            OperatorSum::Dense(m) => OperatorSum::Dense(m.adjoint()),
        }
    }

    /// `(self|self)`, the squared trace-normalized norm.
    pub fn norm_sq(&self) -> f64 {
        match self {
            OperatorSum::Pauli(a) => a.terms.iter().map(|(_, c)| c.norm_sqr()).sum::<f64>() + 0.0,
            OperatorSum::Dense(m) => m.norm_squared() / m.nrows() as f64,
        }
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Normalized trace `Tr(self) / D`.
    pub fn trace_normalized(&self) -> Complex64 {
        match self {
            OperatorSum::Pauli(a) => a.coefficient(&PauliString::identity(a.n_sites)),
            OperatorSum::Dense(m) => m.trace() / m.nrows() as f64,
        }
    }

    /// Norm of the anti-Hermitian part `(A − A†)/2`; zero for Hermitian operators.
    pub fn anti_hermitian_part_norm(&self) -> f64 {
        match self {
            OperatorSum::Pauli(a) => a.terms.iter().map(|(_, c)| c.im * c.im).sum::<f64>().sqrt(),
            OperatorSum::Dense(m) => {
                ((m - m.adjoint()) * Complex64::new(0.5, 0.0)).norm() / (m.nrows() as f64).sqrt()
            }
        }
    }

    /// Norm of the Hermitian part `(A + A†)/2`; zero for anti-Hermitian operators.
    pub fn hermitian_part_norm(&self) -> f64 {
        match self {
            OperatorSum::Pauli(a) => a.terms.iter().map(|(_, c)| c.re * c.re).sum::<f64>().sqrt(),
            OperatorSum::Dense(m) => {
                ((m + m.adjoint()) * Complex64::new(0.5, 0.0)).norm() / (m.nrows() as f64).sqrt()
            }
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.anti_hermitian_part_norm() <= tol
    }

    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        self.hermitian_part_norm() <= tol
    }

    /// True when every coefficient (Pauli) or entry (dense) is zero.
    pub fn is_zero(&self) -> bool {
        match self {
            OperatorSum::Pauli(a) => a.is_empty(),
            OperatorSum::Dense(m) => m.iter().all(|c| c.norm() < DROP_TOLERANCE),
        }
    }

    /// True when the operator is a real matrix in the computational basis.
    pub fn is_real_matrix(&self, tol: f64) -> bool {
        match self {
            OperatorSum::Pauli(a) => a.terms.iter().all(|(p, c)| {
                if p.y_count() % 2 == 0 {
                    c.im.abs() <= tol
                } else {
                    c.re.abs() <= tol
                }
            }),
            OperatorSum::Dense(m) => m.iter().all(|c| c.im.abs() <= tol),
        }
    }
}

impl Add for &OperatorSum {
    type Output = OperatorSum;
    fn add(self, rhs: &OperatorSum) -> OperatorSum {
        self.try_add(rhs).expect("incompatible operators in +")
    }
}

impl Sub for &OperatorSum {
    type Output = OperatorSum;
    fn sub(self, rhs: &OperatorSum) -> OperatorSum {
        self.try_sub(rhs).expect("incompatible operators in -")
    }
}

impl Mul for &OperatorSum {
    type Output = OperatorSum;
    fn mul(self, rhs: &OperatorSum) -> OperatorSum {
        self.try_mul(rhs).expect("incompatible operators in *")
    }
}

impl Neg for &OperatorSum {
    type Output = OperatorSum;
    fn neg(self) -> OperatorSum {
        self.scale_real(-1.0)
    }
}

/// `[a, b] = a·b − b·a`.
pub fn commutator(a: &OperatorSum, b: &OperatorSum) -> Result<OperatorSum> {
    a.check_compatible(b)?;
    Ok(match (a, b) {
        (OperatorSum::Pauli(x), OperatorSum::Pauli(y)) => OperatorSum::Pauli(x.commutator(y)),
        (OperatorSum::Dense(x), OperatorSum::Dense(y)) => OperatorSum::Dense(x * y - y * x),
        _ => unreachable!(),
    })
}

/// `(a|b) = Tr(a†b) / D`.
pub fn inner_product(a: &OperatorSum, b: &OperatorSum) -> Result<Complex64> {
    a.check_compatible(b)?;
    Ok(match (a, b) {
        (OperatorSum::Pauli(x), OperatorSum::Pauli(y)) => x.inner(y),
        (OperatorSum::Dense(x), OperatorSum::Dense(y)) => {
            x.iter().zip(y.iter()).map(|(p, q)| p.conj() * q).sum::<Complex64>()
                / x.nrows() as f64
        }
        _ => unreachable!(),
    })
}

/// The Liouvillian `ℒ(o) = [h, o]`.
pub fn liouvillian_apply(h: &OperatorSum, o: &OperatorSum) -> Result<OperatorSum> {
    commutator(h, o)
}

/// Expands to the dense backend with the default site cap.
pub fn to_dense(o: &OperatorSum) -> Result<OperatorSum> {
    to_dense_capped(o, DEFAULT_DENSE_SITE_CAP)
}

/// Expands to a `2^L × 2^L` matrix; bit `i` of a basis index is site `i`.
pub fn to_dense_capped(o: &OperatorSum, max_sites: usize) -> Result<OperatorSum> {
    match o {
        OperatorSum::Dense(_) => Ok(o.clone()),
        OperatorSum::Pauli(s) => {
            if s.n_sites > max_sites {
                return Err(Error::ResourceCap(format!(
                    "dense expansion of {} sites exceeds the cap of {max_sites}",
                    s.n_sites
                )));
            }
            Ok(OperatorSum::Dense(s.to_matrix()))
        }
    }
}
