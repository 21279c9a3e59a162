//! The rigid rank-2 monodromy triple of a Gauss hypergeometric equation.
//!
//! With local exponents `{0, 1−c}` at 0, `{0, c−a−b}` at 1 and `{a, b}` at ∞,
//! let `B` be the companion matrix of `(t − 1)(t − e(−c))` and `A` the
//! companion matrix of `(t − e(−a))(t − e(−b))`, where `e(x) = e^{2πix}`.
//! Companion matrices of the same shape differ in one column, so
//!
//! ```text
//! g0 = B,   ginf = A⁻¹,   g1 = B⁻¹A
//! ```
//!
//! satisfies `g0·g1·ginf = I` with `g1 − I` of rank one. All entries lie in
//! ℤ[ζ_n] because the eigenvalues are n-th roots of unity. The triple is
//! irreducible iff `{e(−a), e(−b)}` and `{1, e(−c)}` are disjoint.

use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::{frac, HypergeometricParams};
use crate::cyclotomic::CyclotomicField;
use crate::error::{Error, Result};
use crate::residue::Modulus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    #[serde(rename = "g0")]
    G0,
    #[serde(rename = "g1")]
    G1,
    #[serde(rename = "ginf")]
    GInf,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::G0, Generator::G1, Generator::GInf];

    pub fn name(self) -> &'static str {
        match self {
            Self::G0 => "g0",
            Self::G1 => "g1",
            Self::GInf => "ginf",
        }
    }
}

/// A product of generators, read left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Generator>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        let names: Vec<_> = self.0.iter().map(|g| g.name()).collect();
        write!(f, "{}", names.join("*"))
    }
}

impl std::str::FromStr for Word {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "e" {
            return Ok(Word::default());
        }
        s.split('*')
            .map(|g| match g.trim() {
                "g0" => Ok(Generator::G0),
                "g1" => Ok(Generator::G1),
                "ginf" => Ok(Generator::GInf),
                other => Err(format!("unknown generator {other:?}")),
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Local exponents reduced modulo 1, as numerators over `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentKey {
    pub n: u32,
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl ExponentKey {
    pub fn new(p: &HypergeometricParams, n: Modulus) -> Self {
        let num = |x: Ratio<i64>| {
            let scaled = frac(x) * Ratio::from_integer(n.get() as i64);
            assert!(scaled.is_integer(), "parameter denominators must divide n");
            scaled.to_integer() as u32
        };
        Self {
            n: n.get(),
            a: num(p.a),
            b: num(p.b),
            c: num(p.c),
        }
    }

    /// Eigenvalues at 0 and ∞ overlap.
    pub fn is_reducible(&self) -> bool {
        self.a == 0 || self.b == 0 || self.a == self.c || self.b == self.c
    }
}

/// Three 2×2 matrices over ℤ[ζ_N] with `g0·g1·ginf = I`.
#[derive(Debug, Clone)]
pub struct MonodromyTriple {
    field: Arc<CyclotomicField>,
    pub g0: IntMatrix,
    pub g1: IntMatrix,
    pub ginf: IntMatrix,
    params: Option<HypergeometricParams>,
}

impl MonodromyTriple {
    /// Assembles a triple from explicit generators; fails unless the product
    /// is the identity.
    pub fn from_generators(
        field: Arc<CyclotomicField>,
        g0: IntMatrix,
        g1: IntMatrix,
        ginf: IntMatrix,
    ) -> Result<Self> {
        let t = Self {
            field,
            g0,
            g1,
            ginf,
            params: None,
        };
        if !t.product_is_identity() {
            return Err(Error::InvalidWeights(
                "g0*g1*ginf is not the identity".into(),
            ));
        }
        Ok(t)
    }

    /// All three generators equal to the identity.
    pub fn trivial(level: u32) -> Self {
        let field = CyclotomicField::new(level);
        let id = IntMatrix::identity(&field);
        Self {
            g0: id.clone(),
            g1: id.clone(),
            ginf: id,
            field,
            params: None,
        }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn level(&self) -> u32 {
        self.field.level()
    }

    pub fn params(&self) -> Option<&HypergeometricParams> {
        self.params.as_ref()
    }

    pub fn generator(&self, g: Generator) -> &IntMatrix {
        match g {
            Generator::G0 => &self.g0,
            Generator::G1 => &self.g1,
            Generator::GInf => &self.ginf,
        }
    }

    pub fn product_is_identity(&self) -> bool {
        let f = &*self.field;
        self.g0
            .mul(f, &self.g1)
            .and_then(|p| p.mul(f, &self.ginf))
            .is_some_and(|p| p.is_identity(f))
    }

    /// Matrix of a word; `None` on coefficient overflow.
    pub fn evaluate(&self, word: &Word) -> Option<IntMatrix> {
        let f = &*self.field;
        word.0.iter().try_fold(IntMatrix::identity(f), |acc, &g| {
            acc.mul(f, self.generator(g))
        })
    }
}

/// The rigid triple for the given parameters at level `n`.
pub fn levelt_triple(p: &HypergeometricParams, n: Modulus) -> Result<MonodromyTriple> {
    let key = ExponentKey::new(p, n);
    if key.is_reducible() {
        return Err(Error::ReducibleParameters);
    }
    Ok(build(p, key))
}

/// Same construction without the irreducibility guard; the irreducibility
/// oracle needs the reducible triples too.
pub fn levelt_triple_unchecked(p: &HypergeometricParams, n: Modulus) -> MonodromyTriple {
    build(p, ExponentKey::new(p, n))
}

fn build(p: &HypergeometricParams, key: ExponentKey) -> MonodromyTriple {
    let field = CyclotomicField::new(key.n);
    let f = &*field;
    let (a, b, c) = (key.a as i64, key.b as i64, key.c as i64);
    let one = f.int_one();
    let zero = f.int_zero();
    let overflow = "entries of the rigid triple are small";

    // g0: companion of t² − (1 + β)t + β with β = ζ^{−c}
    let beta = f.int_root(-c);
    let one_plus_beta = f.int_add(&one, &beta).expect(overflow);
    let g0 = IntMatrix::from_entries(
        f,
        [
            zero.clone(),
            f.int_neg(&beta),
            one.clone(),
            one_plus_beta.clone(),
        ],
    );

    // ginf = A⁻¹ where A is the companion of t² + p₁t + p₀,
    // p₀ = ζ^{−a−b}, p₁ = −(ζ^{−a} + ζ^{−b}); A⁻¹ = [[−p₁/p₀, 1], [−1/p₀, 0]]
    let p0_inv = f.int_root(a + b);
    let sum = f.int_add(&f.int_root(-a), &f.int_root(-b)).expect(overflow);
    let ginf = IntMatrix::from_entries(
        f,
        [
            f.int_mul(&sum, &p0_inv).expect(overflow),
            one.clone(),
            f.int_neg(&p0_inv),
            zero.clone(),
        ],
    );

    // g1 = g0⁻¹·A, with g0⁻¹ = β⁻¹[[1 + β, β], [−1, 0]]
    let beta_inv = f.int_root(c);
    let g0_inv = IntMatrix::from_entries(
        f,
        [
            f.int_mul(&one_plus_beta, &beta_inv).expect(overflow),
            one.clone(),
            f.int_neg(&beta_inv),
            zero.clone(),
        ],
    );
    let p1 = f.int_neg(&sum);
    let p0 = f.int_root(-a - b);
    let companion_a = IntMatrix::from_entries(f, [zero, f.int_neg(&p0), one, f.int_neg(&p1)]);
    let g1 = g0_inv.mul(f, &companion_a).expect(overflow);

    let t = MonodromyTriple {
        field: Arc::clone(&field),
        g0,
        g1,
        ginf,
        params: Some(*p),
    };
    debug_assert!(t.product_is_identity());
    t
}
