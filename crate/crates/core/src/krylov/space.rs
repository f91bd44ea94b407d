//! Real coordinates for Hermitian operators and the Liouvillian acting on them.
//!
//! Writing the Krylov operators as `𝒪ₙ = iⁿ Vₙ` with `Vₙ` Hermitian turns the
//! recursion into a real one driven by `𝕃V = −i[H, V]`, which maps Hermitian
//! operators to Hermitian operators and is antisymmetric in any orthonormal
//! Hermitian basis. When `H` is a real matrix the space splits into two
//! classes (real-symmetric and imaginary-antisymmetric operators) which `𝕃`
//! swaps, so each vector lives in one class and is automatically orthogonal
//! to every vector of the other class.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::operator::{OperatorSum, PauliString};

use super::symmetry::{project_charge_block, Symmetries};

/// A Hermitian operator in class-local real coordinates.
#[derive(Debug, Clone)]
pub(crate) struct ClassVec {
    pub class: usize,
    pub coords: Vec<f64>,
}

#[derive(Debug, Clone, Default)]
struct ClassIndex {
    strings: Vec<PauliString>,
    lookup: HashMap<PauliString, u32>,
    rows: Vec<Option<Box<[(u32, f64)]>>>,
    orbits: Vec<Option<Box<[u32]>>>,
}

impl ClassIndex {
    fn intern(&mut self, p: PauliString) -> u32 {
        if let Some(&k) = self.lookup.get(&p) {
            return k;
        }
        let k = self.strings.len() as u32;
        self.strings.push(p);
        self.lookup.insert(p, k);
        self.rows.push(None);
        self.orbits.push(None);
        k
    }
}

/// Pauli-string coordinates, indexed lazily as the Krylov space grows.
#[derive(Debug, Clone)]
pub(crate) struct PauliSpace {
    n_sites: usize,
    h: Vec<(PauliString, f64)>,
    split: bool,
    sym: Symmetries,
    classes: [ClassIndex; 2],
}

impl PauliSpace {
    fn class_of(&self, p: &PauliString) -> usize {
        if self.split {
            (p.y_count() % 2) as usize
        } else {
            0
        }
    }

    fn ensure_row(&mut self, class: usize, i: usize) {
        if self.classes[class].rows[i].is_some() {
            return;
        }
        let p = self.classes[class].strings[i];
        let mut row = Vec::with_capacity(self.h.len());
        for k in 0..self.h.len() {
            let (q, coef) = self.h[k];
            if q.commutes_with(&p) {
                continue;
            }
            // −i[Q, P] = −2i·QP = −2i·φR with φ = ±i.
            let (phase, r) = q.mul_unchecked(&p);
            let w = if phase.exponent() == 1 { 2.0 * coef } else { -2.0 * coef };
            let target = self.class_of(&r);
            let j = self.classes[target].intern(r);
            row.push((j, w));
        }
        self.classes[class].rows[i] = Some(row.into_boxed_slice());
    }

    fn apply(&mut self, v: &ClassVec) -> ClassVec {
        let target = if self.split { 1 - v.class } else { v.class };
        for (i, &x) in v.coords.iter().enumerate() {
            if x != 0.0 {
                self.ensure_row(v.class, i);
            }
        }
        let mut out = vec![0.0; self.classes[target].strings.len()];
        let rows = &self.classes[v.class].rows;
        for (i, &x) in v.coords.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            for &(j, w) in rows[i].as_deref().expect("row cached above") {
                out[j as usize] += w * x;
            }
        }
        ClassVec {
            class: target,
            coords: out,
        }
    }

    fn ensure_orbit(&mut self, class: usize, i: usize) {
        if self.classes[class].orbits[i].is_some() {
            return;
        }
        let p = self.classes[class].strings[i];
        let images: Vec<u32> = (0..self.sym.perms.len())
            .map(|g| {
                let q = p.permuted(&self.sym.perms[g]);
                self.classes[class].intern(q)
            })
            .collect();
        self.classes[class].orbits[i] = Some(images.into_boxed_slice());
    }

    /// Averages `v` over the permutation group.
    fn project_permutations(&mut self, v: &mut ClassVec) {
        if self.sym.perms.is_empty() {
            return;
        }
        let c = v.class;
        for (i, &x) in v.coords.iter().enumerate() {
            if x != 0.0 {
                self.ensure_orbit(c, i);
            }
        }
        let weight = 1.0 / (self.sym.perms.len() + 1) as f64;
        let mut out = vec![0.0; self.classes[c].strings.len()];
        let orbits = &self.classes[c].orbits;
        for (i, &x) in v.coords.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            out[i] += weight * x;
            for &j in orbits[i].as_deref().expect("orbit cached above") {
                out[j as usize] += weight * x;
            }
        }
        v.coords = out;
    }

    /// Removes components that do not commute with the total z spin.
    fn project_charge(&mut self, v: &mut ClassVec) {
        let c = v.class;
        let n = self.n_sites;
        let mut blocks: Vec<(u64, u64)> = v
            .coords
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0.0)
            .map(|(i, _)| {
                let p = self.classes[c].strings[i];
                (p.x_mask(), p.z_mask() & !p.x_mask())
            })
            .collect();
        blocks.sort_unstable();
        blocks.dedup();
        let zero = Complex64::new(0.0, 0.0);
        for (x, z_off) in blocks {
            let sites: Vec<usize> = (0..n).filter(|&i| (x >> i) & 1 == 1).collect();
            let w = sites.len();
            let string = |s: usize| {
                let z = sites
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| (s >> k) & 1 == 1)
                    .fold(z_off, |z, (_, &site)| z | (1 << site));
                PauliString::new(n, x, z).expect("masks within range")
            };
            let mut d = vec![zero; 1 << w];
            let mut scale = 0.0f64;
            for (s, slot) in d.iter_mut().enumerate() {
                if let Some(&k) = self.classes[c].lookup.get(&string(s)) {
                    if let Some(&val) = v.coords.get(k as usize) {
                        *slot = Complex64::new(val, 0.0);
                        scale = scale.max(val.abs());
                    }
                }
            }
            project_charge_block(&mut d, w);
            for (s, val) in d.iter().enumerate() {
                if self.split && (s.count_ones() as usize) % 2 != c {
                    continue;
                }
                let p = string(s);
                let k = match self.classes[c].lookup.get(&p) {
                    Some(&k) => k as usize,
                    None if val.re.abs() > 1e-12 * scale => self.classes[c].intern(p) as usize,
                    None => continue,
                };
                if v.coords.len() <= k {
                    v.coords.resize(k + 1, 0.0);
                }
                v.coords[k] = val.re;
            }
        }
    }

    fn symmetrize(&mut self, v: &mut ClassVec) {
        if self.sym.u1 {
            self.project_charge(v);
        }
        self.project_permutations(v);
    }

    fn to_operator(&self, v: &ClassVec) -> OperatorSum {
        let strings = &self.classes[v.class].strings;
        OperatorSum::from_real_terms(
            self.n_sites,
            v.coords.iter().enumerate().map(|(i, &c)| (strings[i], c)),
        )
        .expect("strings share the site count")
    }
}

/// Hermitian-matrix coordinates: diagonal, then real parts, then imaginary
/// parts of the strict upper triangle, scaled to be orthonormal.
#[derive(Debug, Clone)]
pub(crate) struct DenseSpace {
    dim: usize,
    h: DMatrix<Complex64>,
    split: bool,
    /// `h` and the seed are invariant under reversing the basis order.
    reversal: bool,
}

fn reversal_invariant(m: &DMatrix<Complex64>) -> bool {
    let d = m.nrows();
    let tol = 1e-12 * (1.0 + m.norm());
    (0..d).all(|i| (0..d).all(|j| (m[(i, j)] - m[(d - 1 - i, d - 1 - j)]).norm() <= tol))
}

impl DenseSpace {
    /// Averages `v` with its image under basis reversal.
    fn symmetrize(&self, v: &mut ClassVec) {
        let m = self.to_matrix(v);
        let d = self.dim;
        let avg = DMatrix::from_fn(d, d, |i, j| (m[(i, j)] + m[(d - 1 - i, d - 1 - j)]) * 0.5);
        v.coords = self.class_coords(&avg, v.class);
    }

    fn n_pairs(&self) -> usize {
        self.dim * (self.dim - 1) / 2
    }

    /// Half-open coordinate range covered by `class`.
    fn range(&self, class: usize) -> (usize, usize) {
        let (d, p) = (self.dim, self.n_pairs());
        match (self.split, class) {
            (false, _) => (0, d + 2 * p),
            (true, 0) => (0, d + p),
            (true, _) => (d + p, d + 2 * p),
        }
    }

    fn full_coords(&self, m: &DMatrix<Complex64>) -> Vec<f64> {
        let d = self.dim;
        let sd = (1.0 / d as f64).sqrt();
        let so = (2.0 / d as f64).sqrt();
        let mut re = Vec::with_capacity(self.n_pairs());
        let mut im = Vec::with_capacity(self.n_pairs());
        for i in 0..d {
            for j in i + 1..d {
                // Average the two triangles so round-off stays symmetric.
                let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                re.push(so * z.re);
                im.push(so * z.im);
            }
        }
        let mut out: Vec<f64> = (0..d).map(|i| sd * m[(i, i)].re).collect();
        out.extend(re);
        out.extend(im);
        out
    }

    fn class_coords(&self, m: &DMatrix<Complex64>, class: usize) -> Vec<f64> {
        let (a, b) = self.range(class);
        self.full_coords(m)[a..b].to_vec()
    }

    fn to_matrix(&self, v: &ClassVec) -> DMatrix<Complex64> {
        let (d, p) = (self.dim, self.n_pairs());
        let (start, _) = self.range(v.class);
        let mut full = vec![0.0; d + 2 * p];
        full[start..start + v.coords.len()].copy_from_slice(&v.coords);
        let sd = (d as f64).sqrt();
        let so = (d as f64 / 2.0).sqrt();
        let mut m = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
        for i in 0..d {
            m[(i, i)] = Complex64::new(sd * full[i], 0.0);
        }
        let mut k = 0;
        for i in 0..d {
            for j in i + 1..d {
                let z = Complex64::new(so * full[d + k], so * full[d + p + k]);
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
                k += 1;
            }
        }
        m
    }

    fn apply(&self, v: &ClassVec) -> ClassVec {
        let m = self.to_matrix(v);
        let c = &self.h * &m - &m * &self.h;
        let w = c * Complex64::new(0.0, -1.0);
        let target = if self.split { 1 - v.class } else { v.class };
        ClassVec {
            class: target,
            coords: self.class_coords(&w, target),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum Space {
    Pauli(PauliSpace),
    Dense(DenseSpace),
}

impl Space {
    /// Sets up coordinates for `h` and returns the space with `o0` embedded.
    /// `o0` must be Hermitian; `h` must be Hermitian and share its backend.
    /// With `project` set, shared symmetries of `h` and `o0` are detected
    /// (lattice symmetries and z rotations for Pauli sums, reversal of the
    /// basis order for dense matrices) and [`Space::symmetrize`] projects
    /// onto that sector.
    pub fn new(h: &OperatorSum, o0: &OperatorSum, project: bool) -> (Space, ClassVec) {
        match (h, o0) {
            (OperatorSum::Pauli(hs), OperatorSum::Pauli(os)) => {
                let h_terms: Vec<_> = hs.iter().map(|&(p, c)| (p, c.re)).collect();
                let h_real = h_terms.iter().all(|(p, _)| p.y_count() % 2 == 0);
                let parities: Vec<u32> = os.iter().map(|(p, _)| p.y_count() % 2).collect();
                let single = parities.windows(2).all(|w| w[0] == w[1]);
                let split = h_real && single;
                let mut space = PauliSpace {
                    n_sites: hs.n_sites(),
                    h: h_terms,
                    split,
                    sym: if project { Symmetries::detect(hs, os) } else { Symmetries::default() },
                    classes: Default::default(),
                };
                let class = if split {
                    parities.first().copied().unwrap_or(0) as usize
                } else {
                    0
                };
                let mut coords = Vec::with_capacity(os.len());
                for &(p, c) in os.iter() {
                    let k = space.classes[class].intern(p) as usize;
                    if coords.len() <= k {
                        coords.resize(k + 1, 0.0);
                    }
                    coords[k] = c.re;
                }
                (Space::Pauli(space), ClassVec { class, coords })
            }
            (OperatorSum::Dense(hm), OperatorSum::Dense(om)) => {
                let tiny = 1e-14 * (1.0 + hm.norm());
                let h_real = hm.iter().all(|z| z.im.abs() <= tiny);
                let otiny = 1e-14 * (1.0 + om.norm());
                let o_real = om.iter().all(|z| z.im.abs() <= otiny);
                let o_imag = om.iter().all(|z| z.re.abs() <= otiny);
                let split = h_real && (o_real || o_imag);
                let space = DenseSpace {
                    dim: hm.nrows(),
                    h: hm.clone(),
                    split,
                    reversal: project && reversal_invariant(hm) && reversal_invariant(om),
                };
                let class = usize::from(split && !o_real);
                let coords = space.class_coords(om, class);
                (Space::Dense(space), ClassVec { class, coords })
            }
            _ => unreachable!("backends checked by the caller"),
        }
    }

    pub fn apply(&mut self, v: &ClassVec) -> ClassVec {
        match self {
            Space::Pauli(s) => s.apply(v),
            Space::Dense(s) => s.apply(v),
        }
    }

    /// Projects `v` onto the symmetry sector of the seed.
    pub fn symmetrize(&mut self, v: &mut ClassVec) {
        match self {
            Space::Pauli(s) if !s.sym.is_trivial() => s.symmetrize(v),
            Space::Dense(s) if s.reversal => s.symmetrize(v),
            _ => {}
        }
    }

    /// Current number of coordinates in `class`.
    pub fn class_len(&self, class: usize) -> usize {
        match self {
            Space::Pauli(s) => s.classes[class].strings.len(),
            Space::Dense(s) => {
                let (a, b) = s.range(class);
                b - a
            }
        }
    }

    /// The Hermitian operator with the given coordinates.
    pub fn to_operator(&self, v: &ClassVec) -> OperatorSum {
        match self {
            Space::Pauli(s) => s.to_operator(v),
            Space::Dense(s) => OperatorSum::Dense(s.to_matrix(v)),
        }
    }

    /// Drops cached Liouvillian rows once iteration is over.
    pub fn release_cache(&mut self) {
        if let Space::Pauli(s) = self {
            for c in &mut s.classes {
                c.rows = Vec::new();
                c.orbits = Vec::new();
                c.lookup = HashMap::new();
            }
        }
    }

    pub fn is_split(&self) -> bool {
        match self {
            Space::Pauli(s) => s.split,
            Space::Dense(s) => s.split,
        }
    }
}
