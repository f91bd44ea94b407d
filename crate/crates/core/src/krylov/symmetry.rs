//! Symmetries shared by the Hamiltonian and the seed operator.
//!
//! The Krylov space of a symmetric seed stays inside the symmetric sector,
//! but round-off leaks tiny symmetry-breaking components into every vector.
//! Those components carry frequencies outside the seed's spectral support,
//! and the recursion amplifies them until the chain no longer closes at the
//! true Krylov dimension. Projecting each new vector back onto the sector
//! removes the leak.

use num_complex::Complex64;

use crate::operator::{commutator, OperatorSum, PauliString, PauliSum};

/// Site permutations (as a closed group) and rotations about the z axis
/// that leave both `H` and the seed invariant.
#[derive(Debug, Clone, Default)]
pub(crate) struct Symmetries {
    /// Every group element except the identity.
    pub perms: Vec<Vec<usize>>,
    /// `[Σᵢ Zᵢ, ·]` annihilates `H` and the seed.
    pub u1: bool,
}

fn invariant_under(s: &PauliSum, perm: &[usize]) -> bool {
    s.iter().all(|(p, c)| {
        let d = s.coefficient(&p.permuted(perm)) - c;
        d.norm() <= 1e-12 * (1.0 + c.norm())
    })
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

fn group_closure(n: usize, generators: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let identity: Vec<usize> = (0..n).collect();
    let mut group = vec![identity];
    let mut k = 0;
    while k < group.len() {
        for g in generators {
            let next = compose(g, &group[k]);
            if !group.contains(&next) {
                group.push(next);
            }
        }
        k += 1;
    }
    group.remove(0);
    group
}

fn commutes_with_total_z(s: &PauliSum) -> bool {
    let n = s.n_sites();
    let sz = (0..n).map(|i| {
        let p = PauliString::new(n, 0, 1 << i).expect("site within range");
        (p, Complex64::new(1.0, 0.0))
    });
    let Ok(sz) = OperatorSum::from_pauli_terms(n, sz) else {
        return false;
    };
    let op = OperatorSum::Pauli(s.clone());
    commutator(&sz, &op).is_ok_and(|c| c.norm() <= 1e-12 * (1.0 + op.norm()))
}

impl Symmetries {
    pub fn detect(h: &PauliSum, o0: &PauliSum) -> Self {
        let n = h.n_sites();
        if n < 2 {
            return Symmetries::default();
        }
        let translation: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let reflection: Vec<usize> = (0..n).map(|i| n - 1 - i).collect();
        let generators: Vec<Vec<usize>> = [translation, reflection]
            .into_iter()
            .filter(|g| invariant_under(h, g) && invariant_under(o0, g))
            .collect();
        Symmetries {
            perms: group_closure(n, &generators),
            u1: commutes_with_total_z(h) && commutes_with_total_z(o0),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.perms.is_empty() && !self.u1
    }
}

/// Projects the coefficients of one U(1) block onto zero total charge.
///
/// The block consists of the `2^w` strings sharing an X/Y support of `w`
/// sites (bit `k` of the index set means Y on the `k`-th support site).
/// Each site is rewritten in terms of σ±, components with unequal numbers
/// of raising and lowering factors are dropped, and the result is mapped
/// back.
pub(crate) fn project_charge_block(d: &mut [Complex64], w: usize) {
    let i = Complex64::new(0.0, 1.0);
    for k in 0..w {
        let bit = 1 << k;
        for s in 0..d.len() {
            if s & bit == 0 {
                let (a, b) = (d[s], d[s | bit]);
                d[s] = a - i * b;
                d[s | bit] = a + i * b;
            }
        }
    }
    for (t, v) in d.iter_mut().enumerate() {
        if 2 * (t.count_ones() as usize) != w {
            *v = Complex64::new(0.0, 0.0);
        }
    }
    for k in 0..w {
        let bit = 1 << k;
        for s in 0..d.len() {
            if s & bit == 0 {
                let (p, m) = (d[s], d[s | bit]);
                d[s] = (p + m) * 0.5;
                d[s | bit] = i * (p - m) * 0.5;
            }
        }
    }
}
