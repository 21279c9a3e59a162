//! Arithmetic in ℤ/n: canonical representatives, units and Galois orbits of
//! characters.
//!
//! Every bracket `[x]` (the rest of `x` modulo `n`) is [`reduce`]. Residues are
//! always stored in `[0, n)`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Mul, Neg};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The modulus `n ≥ 2` of the cyclic deck group ℤ/n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Modulus(u32);

impl Modulus {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidModulus(n as i64));
        }
        Ok(Self(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn residue(self, x: i64) -> Residue {
        reduce(x, self)
    }
}

impl TryFrom<u32> for Modulus {
    type Error = Error;
    fn try_from(n: u32) -> Result<Self> {
        Self::new(n)
    }
}

impl From<Modulus> for u32 {
    fn from(m: Modulus) -> u32 {
        m.0
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A residue class modulo `n`, stored as its representative in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u32,
    modulus: Modulus,
}

impl Residue {
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Multiplicative inverse, when `self` is a unit.
    pub fn inverse(self) -> Option<Residue> {
        let n = self.modulus.0 as i64;
        let g = (self.value as i64).extended_gcd(&n);
        if g.gcd != 1 {
            return None;
        }
        Some(reduce(g.x, self.modulus))
    }
}

impl Mul<i64> for Residue {
    type Output = Residue;

    fn mul(self, other: i64) -> Residue {
        let n = self.modulus.0 as i64;
        reduce(self.value as i64 * other.rem_euclid(n), self.modulus)
    }
}

impl Neg for Residue {
    type Output = Residue;

    fn neg(self) -> Residue {
        reduce(-(self.value as i64), self.modulus)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

/// The index `j` of the character `χ_j(ζ) = ζ^j` of ℤ/n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharacterIndex(Residue);

impl CharacterIndex {
    pub fn new(j: i64, n: Modulus) -> Self {
        Self(reduce(j, n))
    }

    pub fn residue(self) -> Residue {
        self.0
    }

    pub fn value(self) -> u32 {
        self.0.value
    }

    pub fn modulus(self) -> Modulus {
        self.0.modulus
    }

    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }

    /// The conjugate character `n − j`.
    pub fn dual(self) -> Self {
        Self(-self.0)
    }
}

/// `x mod n` in `[0, n)`.
pub fn reduce(x: i64, n: Modulus) -> Residue {
    Residue {
        value: x.rem_euclid(n.0 as i64) as u32,
        modulus: n,
    }
}

pub fn is_unit(r: Residue) -> bool {
    (r.value as u64).gcd(&(r.modulus.0 as u64)) == 1
}

/// All units of ℤ/n in ascending order.
pub fn units(n: Modulus) -> Vec<Residue> {
    (1..n.0 as i64)
        .map(|x| reduce(x, n))
        .filter(|&r| is_unit(r))
        .collect()
}

/// `{ [h·j] : h a unit mod n }`.
pub fn galois_orbit(j: CharacterIndex) -> Result<BTreeSet<Residue>> {
    if j.is_zero() {
        return Err(Error::ZeroCharacter);
    }
    Ok(units(j.modulus())
        .into_iter()
        .map(|h| j.residue() * h.value as i64)
        .collect())
}

/// Euler's totient by trial factorisation.
pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}
