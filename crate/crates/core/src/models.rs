//! Hamiltonians and deformation operators for the supported models.
//!
//! | name             | parameters      | deformation `∂H`       | backend |
//! |------------------|-----------------|------------------------|---------|
//! | `two_level`      | lambda, delta   | `σᶻ`                   | Pauli   |
//! | `two_qubit`      | epsilon, lambda | `ε(σᶻ₁ + σᶻ₂)`         | Pauli   |
//! | `four_body`      | lambda          | `σᶻ₁ + σᶻ₂`            | Pauli   |
//! | `ising_periodic` | L, h            | `Σ σˣᵢ`                | Pauli   |
//! | `chaotic_ising`  | L, hx, hz       | `Σ σˣᵢ`                | Pauli   |
//! | `xxz_open`       | L, delta        | `Σ σᶻᵢσᶻᵢ₊₁`           | Pauli   |
//! | `lmg`            | S, J            | `Ẑ²` (λ = 2J)          | dense   |
//! | `su2_ladder`     | S, alpha        | `J₊ + J₋`              | dense   |

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{OperatorSum, Pauli, PauliString, MAX_SITES};

/// Longitudinal field at which the tilted-field Ising chain is strongly chaotic.
pub const CHAOTIC_HZ: f64 = 0.809_016_994_374_947_5;

pub const MODEL_NAMES: [&str; 8] = [
    "two_level",
    "two_qubit",
    "four_body",
    "ising_periodic",
    "chaotic_ising",
    "xxz_open",
    "lmg",
    "su2_ladder",
];

/// A built model: Hamiltonian, unnormalized deformation and metadata.
#[derive(Debug, Clone)]
pub struct ModelInstance {
    pub name: String,
    pub hamiltonian: OperatorSum,
    pub deformation: OperatorSum,
    pub parameters: BTreeMap<String, f64>,
    pub hilbert_dim: usize,
    /// The conventional regulator, as returned by [`default_regulator`].
    pub default_mu: f64,
    /// Effective system size `L` used for `μ = L 2^{-L}` and `‖A‖²/L`.
    pub system_size: usize,
}

impl ModelInstance {
    pub fn param(&self, key: &str) -> Option<f64> {
        self.parameters.get(key).copied()
    }
}

/// Parameter keys accepted by each model; the first entry of each pair is the key,
/// the second an optional default.
fn schema(name: &str) -> Option<&'static [(&'static str, Option<f64>)]> {
    Some(match name {
        "two_level" => &[("lambda", None), ("delta", None)],
        "two_qubit" => &[("epsilon", None), ("lambda", None)],
        "four_body" => &[("lambda", None)],
        "ising_periodic" => &[("L", None), ("h", None)],
        "chaotic_ising" => &[("L", None), ("hx", None), ("hz", Some(CHAOTIC_HZ))],
        "xxz_open" => &[("L", None), ("delta", None)],
        "lmg" => &[("S", None), ("J", None)],
        "su2_ladder" => &[("S", None), ("alpha", None)],
        _ => return None,
    })
}

/// The parameter that plays the role of `λ` in `∂λH`, and `dλ/dkey`.
pub fn deformation_parameter(name: &str) -> Option<(&'static str, f64)> {
    Some(match name {
        "two_level" | "two_qubit" | "four_body" => ("lambda", 1.0),
        "ising_periodic" => ("h", 1.0),
        "chaotic_ising" => ("hx", 1.0),
        "xxz_open" => ("delta", 1.0),
        "lmg" => ("J", 2.0),
        "su2_ladder" => ("alpha", 1.0),
        _ => return None,
    })
}

fn resolve(name: &str, params: &BTreeMap<String, f64>) -> Result<BTreeMap<String, f64>> {
    let schema = schema(name).ok_or_else(|| Error::UnknownModel(name.to_string()))?;
    for key in params.keys() {
        if !schema.iter().any(|(k, _)| k == key) {
            return Err(Error::param(key, format!("not a parameter of model `{name}`")));
        }
    }
    let mut out = BTreeMap::new();
    for &(key, default) in schema {
        let v = params
            .get(key)
            .copied()
            .or(default)
            .ok_or_else(|| Error::param(key, "required parameter missing"))?;
        if !v.is_finite() {
            return Err(Error::param(key, "must be finite"));
        }
        out.insert(key.to_string(), v);
    }
    Ok(out)
}

fn chain_length(p: &BTreeMap<String, f64>) -> Result<usize> {
    let l = p["L"];
    if l.fract() != 0.0 || l < 2.0 {
        return Err(Error::param("L", format!("chain length must be an integer ≥ 2, got {l}")));
    }
    if l > MAX_SITES as f64 {
        return Err(Error::ResourceCap(format!(
            "chain length {l} exceeds {MAX_SITES} sites"
        )));
    }
    Ok(l as usize)
}

/// Returns `2S` for a valid spin, enforcing half-integrality and `S ≥ min`.
fn twice_spin(p: &BTreeMap<String, f64>, min: f64) -> Result<usize> {
    let s = p["S"];
    let two_s = 2.0 * s;
    if two_s.fract() != 0.0 || s < min {
        return Err(Error::param(
            "S",
            format!("spin must be an integer or half-integer ≥ {min}, got {s}"),
        ));
    }
    if two_s > 8190.0 {
        return Err(Error::ResourceCap(format!("spin {s} is too large for a dense matrix")));
    }
    Ok(two_s as usize)
}

fn string(n: usize, ops: &[(usize, Pauli)]) -> PauliString {
    PauliString::from_sites(n, ops).expect("site indices in range")
}

fn single_site_sum(n: usize, p: Pauli) -> Vec<PauliString> {
    (0..n).map(|i| string(n, &[(i, p)])).collect()
}

fn bond_sum(n: usize, p: Pauli, periodic: bool) -> Vec<PauliString> {
    let bonds = if periodic { n } else { n - 1 };
    (0..bonds)
        .map(|i| string(n, &[(i, p), ((i + 1) % n, p)]))
        .collect()
}

fn weighted(strings: Vec<PauliString>, w: f64) -> impl Iterator<Item = (PauliString, f64)> {
    strings.into_iter().map(move |s| (s, w))
}

/// Spin-`S` matrices `(S_z, S_+)` in the basis `m = S, S−1, …, −S`.
pub fn spin_matrices(two_s: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let d = two_s + 1;
    let s = two_s as f64 / 2.0;
    let m = |k: usize| s - k as f64;
    let sz = DMatrix::from_fn(d, d, |r, c| if r == c { m(r) } else { 0.0 });
    let sp = DMatrix::from_fn(d, d, |r, c| {
        if c == r + 1 {
            let mc = m(c);
            (s * (s + 1.0) - mc * (mc + 1.0)).sqrt()
        } else {
            0.0
        }
    });
    (sz, sp)
}

fn complexify(m: &DMatrix<f64>) -> OperatorSum {
    OperatorSum::Dense(m.map(|x| Complex64::new(x, 0.0)))
}

/// Builds a model by name from its parameters.
pub fn build_model(name: &str, params: &BTreeMap<String, f64>) -> Result<ModelInstance> {
    let p = resolve(name, params)?;
    let (hamiltonian, deformation, system_size) = match name {
        "two_level" => {
            let h = OperatorSum::from_real_terms(
                1,
                [
                    (string(1, &[(0, Pauli::Z)]), p["lambda"]),
                    (string(1, &[(0, Pauli::X)]), p["delta"]),
                ],
            )?;
            let d = OperatorSum::from_real_terms(1, [(string(1, &[(0, Pauli::Z)]), 1.0)])?;
            (h, d, 1)
        }
        "two_qubit" => {
            let (eps, lam) = (p["epsilon"], p["lambda"]);
            let field = -eps * (1.0 - lam);
            let h = OperatorSum::from_real_terms(
                2,
                weighted(bond_sum(2, Pauli::X, false), -1.0)
                    .chain(weighted(bond_sum(2, Pauli::Z, false), -1.0))
                    .chain(weighted(single_site_sum(2, Pauli::Z), field)),
            )?;
            let d = OperatorSum::from_real_terms(2, weighted(single_site_sum(2, Pauli::Z), eps))?;
            (h, d, 2)
        }
        "four_body" => {
            let z12 = vec![string(4, &[(1, Pauli::Z)]), string(4, &[(2, Pauli::Z)])];
            let h = OperatorSum::from_real_terms(
                4,
                weighted(bond_sum(4, Pauli::X, true), 1.0)
                    .chain(weighted(z12.clone(), p["lambda"])),
            )?;
            let d = OperatorSum::from_real_terms(4, weighted(z12, 1.0))?;
            (h, d, 4)
        }
        "ising_periodic" => {
            let l = chain_length(&p)?;
            let h = OperatorSum::from_real_terms(
                l,
                weighted(bond_sum(l, Pauli::Z, true), 1.0)
                    .chain(weighted(single_site_sum(l, Pauli::X), p["h"])),
            )?;
            let d = OperatorSum::from_real_terms(l, weighted(single_site_sum(l, Pauli::X), 1.0))?;
            (h, d, l)
        }
        "chaotic_ising" => {
            let l = chain_length(&p)?;
            let h = OperatorSum::from_real_terms(
                l,
                weighted(bond_sum(l, Pauli::Z, true), 1.0)
                    .chain(weighted(single_site_sum(l, Pauli::X), p["hx"]))
                    .chain(weighted(single_site_sum(l, Pauli::Z), p["hz"])),
            )?;
            let d = OperatorSum::from_real_terms(l, weighted(single_site_sum(l, Pauli::X), 1.0))?;
            (h, d, l)
        }
        "xxz_open" => {
            let l = chain_length(&p)?;
            let h = OperatorSum::from_real_terms(
                l,
                weighted(bond_sum(l, Pauli::X, false), 1.0)
                    .chain(weighted(bond_sum(l, Pauli::Y, false), 1.0))
                    .chain(weighted(bond_sum(l, Pauli::Z, false), p["delta"])),
            )?;
            let d = OperatorSum::from_real_terms(l, weighted(bond_sum(l, Pauli::Z, false), 1.0))?;
            (h, d, l)
        }
        "lmg" => {
            let two_s = twice_spin(&p, 1.0)?;
            let s = two_s as f64 / 2.0;
            let (sz, sp) = spin_matrices(two_s);
            let x = (&sp + sp.transpose()) * (0.5 / s);
            let z = sz / s;
            let z2 = &z * &z;
            let h = &x + &z2 * (2.0 * p["J"]);
            (complexify(&h), complexify(&z2), two_s + 1)
        }
        "su2_ladder" => {
            let two_s = twice_spin(&p, 0.5)?;
            let (_, sp) = spin_matrices(two_s);
            let ladder = &sp + sp.transpose();
            (complexify(&(&ladder * p["alpha"])), complexify(&ladder), two_s)
        }
        _ => unreachable!("schema covers every name"),
    };
    let hilbert_dim = hamiltonian.dim();
    let mut m = ModelInstance {
        name: name.to_string(),
        hamiltonian,
        deformation,
        parameters: p,
        hilbert_dim,
        default_mu: 0.0,
        system_size,
    };
    m.default_mu = default_regulator(&m);
    Ok(m)
}

/// Convenience wrapper taking `(key, value)` pairs.
pub fn build_model_with(name: &str, params: &[(&str, f64)]) -> Result<ModelInstance> {
    let map = params.iter().map(|&(k, v)| (k.to_string(), v)).collect();
    build_model(name, &map)
}

/// `L 2^{-L}` for many-body models (with `L = 2S+1` for LMG and `L = 2S` for
/// the SU(2) ladder); zero for the non-degenerate two-level and two-qubit systems.
pub fn default_regulator(m: &ModelInstance) -> f64 {
    match m.name.as_str() {
        "two_level" | "two_qubit" => 0.0,
        _ => {
            let l = m.system_size as f64;
            l * (-l).exp2()
        }
    }
}

/// `(∂H / ‖∂H‖, ‖∂H‖)` with `‖·‖` the trace-normalized norm.
pub fn normalized_deformation(m: &ModelInstance) -> Result<(OperatorSum, f64)> {
    let norm = m.deformation.norm();
    if norm == 0.0 || m.deformation.is_zero() {
        return Err(Error::ZeroOperator);
    }
    Ok((m.deformation.scale_real(1.0 / norm), norm))
}
