//! Pauli strings in symplectic (x, z) bitmask form.
//!
//! A string on `n` sites is stored as two masks. Bit `i` of `x` set means an
//! X component at site `i`, bit `i` of `z` a Z component; both set is a Y.
//! The string itself is always the Hermitian product `⊗ P_i` with
//! `P ∈ {I, X, Y, Z}`, so phases only arise from multiplication.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported number of sites for the bitmask encoding.
pub const MAX_SITES: usize = 64;

/// One of the four phases `{+1, +i, -1, -i}`, stored as the exponent of `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(e: i64) -> Self {
        Phase(e.rem_euclid(4) as u8)
    }

    /// Exponent `k` with `phase = i^k`, in `0..4`.
    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

/// Single-site Pauli label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn from_char(c: char) -> Option<Self> {
        match c {
            'I' | 'i' | '_' => Some(Pauli::I),
            'X' | 'x' => Some(Pauli::X),
            'Y' | 'y' => Some(Pauli::Y),
            'Z' | 'z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// A tensor product of single-site Pauli operators.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n_sites: u8,
    x: u64,
    z: u64,
}

fn site_mask(n_sites: usize) -> u64 {
    if n_sites >= 64 {
        u64::MAX
    } else {
        (1u64 << n_sites) - 1
    }
}

impl PauliString {
    /// Builds a string from raw masks. Bits at or beyond `n_sites` are rejected.
    pub fn new(n_sites: usize, x: u64, z: u64) -> Result<Self> {
        if n_sites > MAX_SITES {
            return Err(Error::ResourceCap(format!(
                "{n_sites} sites exceeds the {MAX_SITES}-site bitmask encoding"
            )));
        }
        let mask = site_mask(n_sites);
        if x & !mask != 0 || z & !mask != 0 {
            return Err(Error::Dimension(format!(
                "mask bits set beyond site count {n_sites}"
            )));
        }
        Ok(PauliString {
            n_sites: n_sites as u8,
            x,
            z,
        })
    }

    pub fn identity(n_sites: usize) -> Self {
        assert!(n_sites <= MAX_SITES);
        PauliString {
            n_sites: n_sites as u8,
            x: 0,
            z: 0,
        }
    }

    /// The string with `ops[k].1` acting on site `ops[k].0` and identity elsewhere.
    pub fn from_sites(n_sites: usize, ops: &[(usize, Pauli)]) -> Result<Self> {
        let mut x = 0u64;
        let mut z = 0u64;
        for &(site, p) in ops {
            if site >= n_sites {
                return Err(Error::Dimension(format!(
                    "site {site} out of range for {n_sites} sites"
                )));
            }
            let bit = 1u64 << site;
            if (x | z) & bit != 0 {
                return Err(Error::Dimension(format!("site {site} given twice")));
            }
            let (bx, bz) = p.bits();
            if bx {
                x |= bit;
            }
            if bz {
                z |= bit;
            }
        }
        PauliString::new(n_sites, x, z)
    }

    /// Parses a label such as `"XIZY"`; character `k` acts on site `k`.
    pub fn parse(label: &str) -> Result<Self> {
        let ops: Vec<(usize, Pauli)> = label
            .chars()
            .enumerate()
            .map(|(k, c)| {
                Pauli::from_char(c)
                    .map(|p| (k, p))
                    .ok_or_else(|| Error::Domain(format!("bad Pauli label character `{c}`")))
            })
            .collect::<Result<_>>()?;
        PauliString::from_sites(label.chars().count(), &ops)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites as usize
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn site(&self, i: usize) -> Pauli {
        Pauli::from_bits(self.x >> i & 1 == 1, self.z >> i & 1 == 1)
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Number of sites carrying a Y. The string is a real matrix iff this is even.
    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// Product `self · other = phase · result`, tracked exactly.
    pub fn multiply(&self, other: &PauliString) -> Result<(Phase, PauliString)> {
        if self.n_sites != other.n_sites {
            return Err(Error::Dimension(format!(
                "cannot multiply Pauli strings on {} and {} sites",
                self.n_sites, other.n_sites
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    /// Writing each string as `i^{x·z} X^x Z^z`, the product phase exponent is
    /// `x1·z1 + x2·z2 + 2 z1·x2 − x3·z3 (mod 4)`.
    #[inline]
    pub(crate) fn mul_unchecked(&self, other: &PauliString) -> (Phase, PauliString) {
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let e = (self.x & self.z).count_ones() as i64 + (other.x & other.z).count_ones() as i64
            + 2 * (self.z & other.x).count_ones() as i64
            - (x & z).count_ones() as i64;
        (
            Phase::from_exponent(e),
            PauliString {
                n_sites: self.n_sites,
                x,
                z,
            },
        )
    }

    /// The string with site `i` moved to site `perm[i]`.
    pub(crate) fn permuted(&self, perm: &[usize]) -> PauliString {
        let (mut x, mut z) = (0u64, 0u64);
        for (i, &j) in perm.iter().enumerate() {
            x |= ((self.x >> i) & 1) << j;
            z |= ((self.z >> i) & 1) << j;
        }
        PauliString {
            n_sites: self.n_sites,
            x,
            z,
        }
    }

    /// Matrix element `⟨row|P|col⟩` in the computational basis, where bit `i`
    /// of a basis index is the state of site `i`. The only nonzero entry in
    /// column `col` sits at `row = col ^ x`.
    pub fn column_entry(&self, col: usize) -> (usize, Complex64) {
        let sign = if (col as u64 & self.z).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        let ph = Phase::from_exponent(self.y_count() as i64).to_complex();
        (col ^ self.x as usize, ph * sign)
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n_sites() {
            let c = match self.site(i) {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Convenience wrapper for [`PauliString::multiply`].
pub fn pauli_multiply(p: &PauliString, q: &PauliString) -> Result<(Phase, PauliString)> {
    p.multiply(q)
}
