//! AGP norms computed from autocorrelation functions.
//!
//! For a normalized deformation with autocorrelation `𝒞(t)` the regularized
//! norm is `½∫₀^∞ (1/μ − t) 𝒞(t) e^{−μt} dt`, equivalently the spectral
//! average of `ω²/(μ² + ω²)²`.

mod quadrature;
pub mod special;

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::krylov::MomentSequence;

pub use quadrature::{integrate, QuadResult};
use quadrature::Integrator;
use special::{bessel_envelope, bessel_j, bessel_j_all, binomial, elliptic_ke, erfc};

/// Quadrature settings for [`agp_norm_from_autocorr`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    /// Absolute error target, tail bound included.
    pub tol: f64,
    pub max_evaluations: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            tol: 1e-8,
            max_evaluations: 50_000_000,
        }
    }
}

/// `𝒞(t)` sampled on a uniform grid starting at `t = 0`, interpolated with
/// four-point Lagrange polynomials and continued to `t < 0` by evenness.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    dt: f64,
    values: Vec<f64>,
}

impl Tabulated {
    pub fn new(dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::param("dt", "grid spacing must be positive"));
        }
        if values.len() < 4 {
            return Err(Error::param("values", "need at least four samples"));
        }
        if (values[0] - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!(
                "autocorrelation must equal 1 at t = 0, got {}",
                values[0]
            )));
        }
        Ok(Tabulated { dt, values })
    }

    /// Samples `f` at `t = k·dt` for `k = 0..n`.
    pub fn from_fn(dt: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(dt, (0..n).map(|k| f(k as f64 * dt)).collect())
    }

    /// Samples `Σ wⱼ cos(ωⱼ t)` at `t = k·dt` for `k = 0..n`, e.g. from
    /// [`ExactOracle::spectral_lines`](crate::exact::ExactOracle::spectral_lines).
    pub fn from_lines(lines: &[(f64, f64)], dt: f64, n: usize) -> Result<Self> {
        const RESEED: usize = 256;
        let mut values = vec![0.0; n];
        for &(omega, weight) in lines {
            let step = num_complex::Complex64::from_polar(1.0, omega * dt);
            let mut z = num_complex::Complex64::new(1.0, 0.0);
            for (k, v) in values.iter_mut().enumerate() {
                if k % RESEED == 0 {
                    z = num_complex::Complex64::from_polar(1.0, omega * dt * k as f64);
                }
                *v += weight * z.re;
                z *= step;
            }
        }
        Self::new(dt, values)
    }

    pub fn t_max(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.dt
    }

    fn sample(&self, k: i64) -> f64 {
        self.values[k.unsigned_abs() as usize]
    }

    fn eval(&self, t: f64) -> f64 {
        let t = t.abs();
        let n = self.values.len() as i64;
        let x = t / self.dt;
        let base = (x.floor() as i64 - 1).min(n - 4);
        let mut s = 0.0;
        for i in 0..4 {
            let xi = (base + i) as f64;
            let mut w = 1.0;
            for j in 0..4 {
                if j != i {
                    w *= (x - (base + j) as f64) / (xi - (base + j) as f64);
                }
            }
            s += w * self.sample(base + i);
        }
        s
    }

    /// Mean over the last decade `[t_max/10, t_max]` of the grid.
    fn late_average(&self) -> f64 {
        let start = self.values.len() / 10;
        let tail = &self.values[start..];
        tail.iter().sum::<f64>() / tail.len() as f64
    }
}

/// Autocorrelation families with known or tabulated `𝒞(t)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `e^{−t²/2}`.
    Gaussian,
    /// `sech(αt)^η`.
    Sech { alpha: f64, eta: f64 },
    /// `cos(αt)^L`.
    Su2Cos { l: u32, alpha: f64 },
    /// `J₁(2αt)/(αt)`, the constant-coefficient chain `bₙ = α`.
    BesselConst { alpha: f64 },
    /// `J₀(αt)²`.
    BesselJ0Sq { alpha: f64 },
    /// `J₀(4t)² + J₁(4t)²`.
    XyChain,
    /// Critical transverse-field Ising chain with deformation `Σᵢ σᶻᵢ`:
    /// `(1/L) Σ_{l,m} 𝒞_{l,m}(t)` over an open set of `L` sites.
    IsingCritical { l: usize },
    Tabulated(Tabulated),
}

/// An autocorrelation function `𝒞(t) = c + (1 − c)·𝒞_family(t)`, where the
/// offset `c` is zero unless set with [`AutocorrSpec::with_offset`].
#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrSpec {
    family: Family,
    offset: f64,
}

fn positive(key: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::param(key, "must be positive and finite"))
    }
}

/// `𝒞_{l,m}(t) = J_{2d}(2t)² − J_{2d+1}(2t) J_{2d−1}(2t)` with `d = l − m`.
pub fn ising_pair_correlation(l: i64, m: i64, t: f64) -> f64 {
    let d = l - m;
    let x = 2.0 * t;
    let j = bessel_j(2 * d, x);
    j * j - bessel_j(2 * d + 1, x) * bessel_j(2 * d - 1, x)
}

/// Frequency-domain weight `ω²/(μ² + ω²)²` of a single spectral line.
pub fn frequency_weight(omega: f64, mu: f64) -> f64 {
    let w2 = omega * omega;
    if w2 == 0.0 {
        return 0.0;
    }
    let d = mu * mu + w2;
    w2 / (d * d)
}

impl AutocorrSpec {
    fn from_family(family: Family) -> Self {
        AutocorrSpec {
            family,
            offset: 0.0,
        }
    }

    pub fn gaussian() -> Self {
        Self::from_family(Family::Gaussian)
    }

    pub fn sech(alpha: f64, eta: f64) -> Result<Self> {
        Ok(Self::from_family(Family::Sech {
            alpha: positive("alpha", alpha)?,
            eta: positive("eta", eta)?,
        }))
    }

    pub fn su2_cos(l: u32, alpha: f64) -> Result<Self> {
        if l == 0 {
            return Err(Error::param("L", "must be at least 1"));
        }
        Ok(Self::from_family(Family::Su2Cos {
            l,
            alpha: positive("alpha", alpha)?,
        }))
    }

    pub fn bessel_const(alpha: f64) -> Result<Self> {
        Ok(Self::from_family(Family::BesselConst {
            alpha: positive("alpha", alpha)?,
        }))
    }

    pub fn bessel_j0sq(alpha: f64) -> Result<Self> {
        Ok(Self::from_family(Family::BesselJ0Sq {
            alpha: positive("alpha", alpha)?,
        }))
    }

    pub fn xy_chain() -> Self {
        Self::from_family(Family::XyChain)
    }

    pub fn ising_critical(l: usize) -> Result<Self> {
        if l == 0 {
            return Err(Error::param("L", "must be at least 1"));
        }
        Ok(Self::from_family(Family::IsingCritical { l }))
    }

    pub fn tabulated(table: Tabulated) -> Self {
        Self::from_family(Family::Tabulated(table))
    }

    /// Builds a family by name with parameters `alpha`, `eta`, `L` as needed.
    pub fn by_name(name: &str, alpha: Option<f64>, eta: Option<f64>, l: Option<usize>) -> Result<Self> {
        let need_l = || l.ok_or_else(|| Error::param("L", "required for this family"));
        let a = alpha.unwrap_or(1.0);
        match name {
            "gaussian" => Ok(Self::gaussian()),
            "sech" => Self::sech(a, eta.unwrap_or(1.0)),
            "su2_cos" => Self::su2_cos(need_l()? as u32, a),
            "bessel_const" => Self::bessel_const(a),
            "bessel_j0sq" => Self::bessel_j0sq(a),
            "xy_chain" => Ok(Self::xy_chain()),
            "ising_critical" => Self::ising_critical(need_l()?),
            other => Err(Error::UnsupportedFamily(other.to_string())),
        }
    }

    /// Mixes in a constant: `𝒞 → c + (1 − c)𝒞`.
    pub fn with_offset(mut self, c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::param("offset", "must be finite"));
        }
        self.offset = c + (1.0 - c) * self.offset;
        Ok(self)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn name(&self) -> &'static str {
        match self.family {
            Family::Gaussian => "gaussian",
            Family::Sech { .. } => "sech",
            Family::Su2Cos { .. } => "su2_cos",
            Family::BesselConst { .. } => "bessel_const",
            Family::BesselJ0Sq { .. } => "bessel_j0sq",
            Family::XyChain => "xy_chain",
            Family::IsingCritical { .. } => "ising_critical",
            Family::Tabulated(_) => "tabulated",
        }
    }

    /// The same family at system size `l` for the size-dependent families
    /// (`su2_cos`, `ising_critical`); other families are returned unchanged.
    pub fn for_size(&self, l: usize) -> Result<Self> {
        let family = match &self.family {
            Family::Su2Cos { alpha, .. } => Family::Su2Cos {
                l: u32::try_from(l).map_err(|_| Error::param("L", "too large"))?,
                alpha: *alpha,
            },
            Family::IsingCritical { .. } => Family::IsingCritical { l },
            other => return Ok(AutocorrSpec { family: other.clone(), offset: self.offset }),
        };
        if l == 0 {
            return Err(Error::param("L", "must be at least 1"));
        }
        Ok(AutocorrSpec {
            family,
            offset: self.offset,
        })
    }

    fn family_eval(&self, t: f64) -> f64 {
        match &self.family {
            Family::Gaussian => (-0.5 * t * t).exp(),
            Family::Sech { alpha, eta } => {
                let e = (-(alpha * t).abs()).exp();
                (2.0 * e / (1.0 + e * e)).powf(*eta)
            }
            Family::Su2Cos { l, alpha } => (alpha * t).cos().powi(*l as i32),
            Family::BesselConst { alpha } => {
                let x = alpha * t;
                if x.abs() < 1e-8 {
                    1.0 - 0.5 * x * x
                } else {
                    bessel_j(1, 2.0 * x) / x
                }
            }
            Family::BesselJ0Sq { alpha } => bessel_j(0, alpha * t).powi(2),
            Family::XyChain => {
                let j = bessel_j_all(1, 4.0 * t.abs());
                j[0] * j[0] + j[1] * j[1]
            }
            Family::IsingCritical { l } => {
                let l = *l;
                let j = bessel_j_all(2 * l + 1, 2.0 * t.abs());
                let jn = |n: i64| {
                    let v = j[n.unsigned_abs() as usize];
                    if n < 0 && n % 2 != 0 {
                        -v
                    } else {
                        v
                    }
                };
                let mut s = 0.0;
                for d in -(l as i64 - 1)..=(l as i64 - 1) {
                    let pairs = (l as i64 - d.abs()) as f64;
                    let c = jn(2 * d).powi(2) - jn(2 * d + 1) * jn(2 * d - 1);
                    s += pairs * c;
                }
                s / l as f64
            }
            Family::Tabulated(tab) => tab.eval(t),
        }
    }

    fn family_plateau(&self) -> f64 {
        match &self.family {
            Family::Su2Cos { l, .. } if l % 2 == 0 => binomial(*l, l / 2) / 2f64.powi(*l as i32),
            Family::Tabulated(tab) => tab.late_average(),
            _ => 0.0,
        }
    }

    /// `𝒞(t)`.
    pub fn eval(&self, t: f64) -> f64 {
        self.offset + (1.0 - self.offset) * self.family_eval(t)
    }

    /// Infinite-time average `c̄` of `𝒞`.
    pub fn plateau(&self) -> f64 {
        self.offset + (1.0 - self.offset) * self.family_plateau()
    }

    /// `𝒞(t) − c̄`, formed without evaluating the constant twice.
    pub fn fluctuation(&self, t: f64) -> f64 {
        (1.0 - self.offset) * (self.family_eval(t) - self.family_plateau())
    }

    /// Upper bound on `|𝒞(s) − c̄|` for all `s ≥ t ≥ 0`.
    fn envelope(&self, t: f64) -> f64 {
        let scale = (1.0 - self.offset).abs();
        let bound = match &self.family {
            Family::Gaussian => (-0.5 * t * t).exp(),
            Family::Sech { alpha, eta } => (2.0 * (-alpha * t).exp()).powf(*eta).min(1.0),
            Family::Su2Cos { .. } => {
                let c = self.family_plateau();
                c.max(1.0 - c)
            }
            Family::BesselConst { alpha } => {
                let x = 2.0 * alpha * t;
                if x <= 2.0 {
                    1.0
                } else {
                    2.0 * bessel_envelope(x) / x
                }
            }
            Family::BesselJ0Sq { alpha } => bessel_envelope(alpha * t).powi(2),
            Family::XyChain => 2.0 * bessel_envelope(4.0 * t).powi(2),
            Family::IsingCritical { l } => 2.0 * *l as f64 * bessel_envelope(2.0 * t).powi(2),
            Family::Tabulated(tab) => {
                let c = tab.late_average();
                let k0 = ((t / tab.dt).floor() as usize).saturating_sub(2);
                let m = tab.values[k0.min(tab.values.len() - 1)..]
                    .iter()
                    .map(|v| (v - c).abs())
                    .fold(0.0, f64::max);
                1.5 * m
            }
        };
        scale * bound
    }

    /// Panel width that resolves the fastest oscillation of the family.
    fn time_scale(&self) -> f64 {
        match &self.family {
            Family::Gaussian => 0.5,
            Family::Sech { alpha, .. } => 0.5 / alpha,
            Family::Su2Cos { l, alpha } => 1.0 / (*l as f64 * alpha),
            Family::BesselConst { alpha } | Family::BesselJ0Sq { alpha } => 0.5 / alpha,
            Family::XyChain => 0.125,
            Family::IsingCritical { .. } => 0.25,
            Family::Tabulated(tab) => 4.0 * tab.dt,
        }
    }

    fn horizon(&self) -> Option<f64> {
        match &self.family {
            Family::Tabulated(tab) => Some(tab.t_max()),
            _ => None,
        }
    }
}

/// `∫_T^∞ |1/μ − t| e^{−μt} dt`.
fn tail_weight(t: f64, mu: f64) -> f64 {
    let e = (-mu * t).exp();
    if mu * t >= 1.0 {
        t * e / mu
    } else {
        2.0 * (-1.0f64).exp() / (mu * mu) - t * e / mu
    }
}

/// A quadrature norm with its certified error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AutocorrNorm {
    pub value: f64,
    /// Panel error estimates plus the bound on the truncated tail.
    pub error: f64,
    /// Upper integration limit reached.
    pub horizon: f64,
    pub evaluations: usize,
}

/// `½∫₀^∞ (1/μ − t) 𝒞(t) e^{−μt} dt` by adaptive Gauss–Kronrod quadrature
/// of `𝒞 − c̄`. The interval `[0, T]` doubles until the envelope bound on the
/// tail drops below the tolerance, up to `T = 10³/μ`.
pub fn agp_norm_from_autocorr(spec: &AutocorrSpec, mu: f64, quad: &QuadOptions) -> Result<AutocorrNorm> {
    let mu = mu.abs();
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::Domain("the autocorrelation route needs μ > 0".into()));
    }
    let inv_mu = 1.0 / mu;
    let f = |t: f64| 0.5 * (inv_mu - t) * spec.fluctuation(t) * (-mu * t).exp();
    let width = spec.time_scale().min(inv_mu);
    let mut cap = 1e3 * inv_mu;
    if let Some(h) = spec.horizon() {
        cap = cap.min(h);
    }
    let mut t_end = (4.0 * inv_mu).min(cap);
    let mut integ = Integrator::new(f);
    integ.add_interval(0.0, t_end, width);
    loop {
        let converged = integ.refine(0.5 * quad.tol, quad.max_evaluations);
        let res = integ.result();
        let tail = 0.5 * spec.envelope(t_end) * tail_weight(t_end, mu);
        if !converged {
            return Err(Error::NonConvergent {
                value: res.value,
                error: res.error + tail,
            });
        }
        if res.error + tail <= quad.tol {
            return Ok(AutocorrNorm {
                value: res.value,
                error: res.error + tail,
                horizon: t_end,
                evaluations: res.evaluations,
            });
        }
        if t_end >= cap {
            return Err(Error::NonConvergent {
                value: res.value,
                error: res.error + tail,
            });
        }
        let next = (2.0 * t_end).min(cap);
        integ.add_interval(t_end, next, width);
        t_end = next;
    }
}

/// Closed-form norm for the families that have one. The Gaussian, Bessel and
/// XY expressions are the standard ones halved, which puts them on the same
/// footing as the spectral sum `Σ w(ω)·ω²/(μ² + ω²)²`.
pub fn closed_form_norm(spec: &AutocorrSpec, mu: f64) -> Result<f64> {
    let mu = mu.abs();
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::Domain("closed forms need μ > 0".into()));
    }
    let base = match &spec.family {
        Family::Gaussian => {
            if mu > 35.0 {
                return Err(Error::Domain(format!("μ = {mu} overflows the Gaussian closed form")));
            }
            let m2 = mu * mu;
            0.5 * ((PI / 2.0).sqrt() * (0.5 * m2).exp() * (m2 + 1.0) * erfc(mu / 2f64.sqrt()) / mu - 1.0)
        }
        Family::BesselConst { alpha } => {
            let a2 = alpha * alpha;
            0.5 * (((4.0 * a2 / (mu * mu) + 1.0).sqrt() - 1.0) / a2
                - 2.0 / (mu * (4.0 * a2 + mu * mu).sqrt()))
        }
        Family::Su2Cos { l, alpha } => {
            let scale = 2f64.powi(-(*l as i32));
            (0..=*l)
                .map(|k| {
                    let omega = (*l as f64 - 2.0 * k as f64) * alpha;
                    binomial(*l, k) * scale * frequency_weight(omega, mu)
                })
                .sum()
        }
        Family::BesselJ0Sq { alpha } => {
            let m = -4.0 * alpha * alpha / (mu * mu);
            let (k, e) = elliptic_ke(m);
            -(e - (1.0 - m) * k) / (PI * mu * mu * (1.0 - m))
        }
        Family::XyChain => {
            let m = -64.0 / (mu * mu);
            let (k, e) = elliptic_ke(m);
            ((mu * mu + 32.0) * k - mu * mu * e) / (16.0 * PI * mu * mu)
        }
        _ => return Err(Error::UnsupportedFamily(spec.name().to_string())),
    };
    Ok((1.0 - spec.offset) * base)
}

/// Partial sum of the large-μ moment series with its truncation estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSeries {
    pub value: f64,
    /// Magnitude of the last included term.
    pub error_estimate: f64,
    /// The last term is not smaller than the one before it.
    pub divergent: bool,
}

/// `Σ_{n=1}^{order} n(−1)^{n+1} m_{2n} / μ^{2n+2}`.
pub fn agp_norm_from_moments(m: &MomentSequence, mu: f64, order: usize) -> Result<MomentSeries> {
    if !(mu.abs() > 0.0) || !mu.is_finite() {
        return Err(Error::Domain("the moment series needs μ ≠ 0".into()));
    }
    if order >= m.m.len() {
        return Err(Error::InsufficientCoefficients(format!(
            "order {order} needs m_{}, only up to m_{} available",
            2 * order,
            m.order()
        )));
    }
    let mu2 = mu * mu;
    let terms: Vec<f64> = (1..=order)
        .map(|n| {
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            sign * n as f64 * m.m[n] / mu2.powi(n as i32 + 1)
        })
        .collect();
    let last = terms.last().map_or(0.0, |t| t.abs());
    let divergent = terms.len() >= 2 && last >= terms[terms.len() - 2].abs();
    Ok(MomentSeries {
        value: terms.iter().sum(),
        error_estimate: last,
        divergent,
    })
}

/// Upper bound `(M/μ²)·‖∂λH‖²`; infinite at `μ = 0`.
pub fn agp_norm_bound(m_count: usize, mu: f64, deformation_norm_sq: f64) -> f64 {
    m_count as f64 / (mu * mu) * deformation_norm_sq
}

/// Ordinary least-squares line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Dimension("a fit needs at least two paired points".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LinearFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    Quadrature,
    ClosedForm,
}

impl NormMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            NormMethod::Quadrature => "quadrature",
            NormMethod::ClosedForm => "closed_form",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRow {
    pub l: usize,
    pub mu: f64,
    pub norm: f64,
    pub norm_over_l: f64,
    pub method: NormMethod,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingStudy {
    pub rows: Vec<ScalingRow>,
    /// Fit of `ln(norm)` against `L` over the largest half of the sizes.
    pub fit: LinearFit,
}

/// The regulator `L·2^{−L}`.
pub fn size_regulator(l: usize) -> f64 {
    l as f64 * 2f64.powi(-(l as i32))
}

/// Norms at `μ = L·2^{−L}` for every `L`, by quadrature with the closed form
/// as fallback, plus the log-slope fit.
pub fn scaling_study(spec: &AutocorrSpec, sizes: &[usize], quad: &QuadOptions) -> Result<ScalingStudy> {
    if sizes.len() < 2 {
        return Err(Error::param("L", "a scaling study needs at least two sizes"));
    }
    let rows: Vec<ScalingRow> = sizes
        .par_iter()
        .map(|&l| {
            let s = spec.for_size(l)?;
            let mu = size_regulator(l);
            let (norm, method) = match agp_norm_from_autocorr(&s, mu, quad) {
                Ok(r) => (r.value, NormMethod::Quadrature),
                Err(e @ Error::NonConvergent { .. }) => match closed_form_norm(&s, mu) {
                    Ok(v) => (v, NormMethod::ClosedForm),
                    Err(_) => return Err(e),
                },
                Err(e) => return Err(e),
            };
            Ok(ScalingRow {
                l,
                mu,
                norm,
                norm_over_l: norm / l as f64,
                method,
            })
        })
        .collect::<Result<_>>()?;
    let mut order: Vec<&ScalingRow> = rows.iter().collect();
    order.sort_by_key(|r| r.l);
    order.dedup_by_key(|r| r.l);
    let keep = order.len().div_ceil(2).max(2).min(order.len());
    let top = &order[order.len() - keep..];
    if top.iter().any(|r| !(r.norm > 0.0)) {
        return Err(Error::Domain("log fit needs positive norms".into()));
    }
    let x: Vec<f64> = top.iter().map(|r| r.l as f64).collect();
    let y: Vec<f64> = top.iter().map(|r| r.norm.ln()).collect();
    let fit = linear_fit(&x, &y)?;
    Ok(ScalingStudy { rows, fit })
}
