//! Irreducibility and finiteness of the monodromy of the eigenspace local
//! systems, decided two ways:
//!
//! * the arithmetic criterion: an absolutely irreducible representation
//!   preserving a Hermitian form over an abelian number field has finite image
//!   iff every Galois conjugate of the form is definite. The conjugates of the
//!   form on the `χ_j`-eigenspace are the forms on the `χ_{hj}`-eigenspaces, so
//!   the test reduces to `Σ_i [m_i·hj] ≠ 2n` for all units `h`;
//! * an exact matrix oracle: the rigid rank-2 triple with the prescribed local
//!   eigenvalues ([`levelt`]), closed up as a group over ℤ[ζ_n]
//!   ([`closure`]), with its invariant Hermitian form solved for directly
//!   ([`hermitian`]).

pub mod closure;
pub mod hermitian;
pub mod levelt;
pub mod matrix;
pub mod sweep;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hodge::{sigma_sum, WeightTuple};
use crate::residue::{reduce, units, CharacterIndex};

pub use closure::{
    finite_order_bound, group_closure, group_closure_with, has_finite_order,
    infinite_order_witness, ClosureOptions,
};
pub use hermitian::{has_common_eigenvector, invariant_hermitian_form, HermitianForm};
pub use levelt::{levelt_triple, Generator, MonodromyTriple, Word};

/// Parameters `(a, b, c)` of the Gauss hypergeometric equation attached to a
/// character, already multiplied by `j` and not reduced modulo 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HypergeometricParams {
    #[serde(with = "crate::ratio_string")]
    pub a: Ratio<i64>,
    #[serde(with = "crate::ratio_string")]
    pub b: Ratio<i64>,
    #[serde(with = "crate::ratio_string")]
    pub c: Ratio<i64>,
}

impl HypergeometricParams {
    /// The four quantities whose integrality makes the equation reducible.
    pub fn reducibility_quantities(&self) -> [Ratio<i64>; 4] {
        [self.a, self.b, self.a - self.c, self.b - self.c]
    }
}

/// `a = m₃/n, b = 1 − m₀/n, c = 2 − m₀/n − m₂/n`, scaled by `j`.
pub fn params_from_weights(w: &WeightTuple, j: CharacterIndex) -> HypergeometricParams {
    let n = w.n() as i64;
    let [m0, _, m2, m3] = w.m().map(|x| x as i64);
    let j = j.value() as i64;
    let a = Ratio::new(m3, n);
    let b = Ratio::from_integer(1) - Ratio::new(m0, n);
    let c = Ratio::from_integer(2) - Ratio::new(m0, n) - Ratio::new(m2, n);
    let j = Ratio::from_integer(j);
    HypergeometricParams {
        a: a * j,
        b: b * j,
        c: c * j,
    }
}

/// None of `ja, jb, j(a−c), j(b−c)` is an integer.
pub fn is_irreducible(w: &WeightTuple, j: CharacterIndex) -> bool {
    if j.is_zero() {
        return false;
    }
    params_from_weights(w, j)
        .reducibility_quantities()
        .iter()
        .all(|q| !q.is_integer())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InfiniteWitness {
    /// A word in the generators whose matrix has infinite order.
    Word { word: Word },
    /// A unit `h` for which the `χ_{hj}` form is indefinite (`Σ = 2n`).
    IndefiniteConjugate {
        unit: u32,
        character: u32,
        sigma: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FinitenessVerdict {
    /// `order` is known when the group was enumerated.
    Finite {
        order: Option<u64>,
    },
    Infinite {
        witness: InfiniteWitness,
    },
    Inconclusive {
        cap: usize,
        max_word_len: usize,
        explored: usize,
        reason: String,
    },
}

impl FinitenessVerdict {
    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite { .. })
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::Infinite { .. })
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Self::Inconclusive { .. })
    }

    /// Whether two verdicts contradict each other (inconclusive never does).
    pub fn disagrees_with(&self, other: &Self) -> bool {
        (self.is_finite() && other.is_infinite()) || (self.is_infinite() && other.is_finite())
    }
}

/// Finite iff every Galois conjugate `χ_{hj}` has a definite form.
pub fn finiteness_by_signature(w: &WeightTuple, j: CharacterIndex) -> Result<FinitenessVerdict> {
    if j.is_zero() {
        return Err(Error::ZeroCharacter);
    }
    if !is_irreducible(w, j) {
        return Err(Error::PreconditionIrreducibility { j: j.value() });
    }
    for h in units(w.modulus()) {
        let conj =
            CharacterIndex::new((j.residue() * h.value() as i64).value() as i64, w.modulus());
        let sigma = sigma_sum(w, conj)?;
        if sigma == 2 * w.n() {
            return Ok(FinitenessVerdict::Infinite {
                witness: InfiniteWitness::IndefiniteConjugate {
                    unit: h.value(),
                    character: conj.value(),
                    sigma,
                },
            });
        }
    }
    Ok(FinitenessVerdict::Finite { order: None })
}

/// The character `j` with `j(m₀ + m₃) ≡ −1 (mod n)`; its form is indefinite.
pub fn find_infinite_character(w: &WeightTuple) -> Result<CharacterIndex> {
    let n = w.modulus();
    if w.total() != w.n() {
        return Err(Error::InvalidWeights(format!(
            "weights must sum to exactly n = {}",
            w.n()
        )));
    }
    let [m0, _, _, m3] = w.m();
    let s = reduce(m0 as i64 + m3 as i64, n);
    let inv = s.inverse().ok_or(Error::NoUnit {
        value: s.value(),
        n: n.get(),
    })?;
    if reduce(n.get() as i64 - 1, n).inverse().is_none() {
        return Err(Error::NoUnit {
            value: n.get() - 1,
            n: n.get(),
        });
    }
    let j = CharacterIndex::new(-(inv.value() as i64), n);
    // m'_0 + m'_3 = n − 1 and 2 ≤ m'_1 + m'_2 ≤ 2n − 2 squeeze the sum to 2n
    let sigma = sigma_sum(w, j)?;
    assert_eq!(sigma, 2 * w.n(), "indefinite character has Σ = 2n");
    Ok(j)
}

/// Integer shifts leave everything here unchanged; helper for tests and the
/// triple construction.
pub(crate) fn frac(x: Ratio<i64>) -> Ratio<i64> {
    let f = x - x.floor();
    debug_assert!(f >= Ratio::zero() && f < Ratio::from_integer(1));
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(n: u32, m: [u32; 4]) -> WeightTuple {
        WeightTuple::new(n, m).unwrap()
    }

    #[test]
    fn params_examples() {
        let t = w(5, [1, 1, 1, 2]);
        let p = params_from_weights(&t, t.character(1));
        assert_eq!(
            (p.a, p.b, p.c),
            (Ratio::new(2, 5), Ratio::new(4, 5), Ratio::new(8, 5))
        );
        // A = (1−b)n = m₀, B = (b+1−c)n = m₂, C = an = m₃, n − A − B − C = m₁
        let n = Ratio::from_integer(5);
        let one = Ratio::from_integer(1);
        let (a_, b_, c_) = ((one - p.b) * n, (p.b + one - p.c) * n, p.a * n);
        assert_eq!(n - a_ - b_ - c_, Ratio::from_integer(1));

        let t = w(7, [1, 1, 1, 4]);
        let p = params_from_weights(&t, t.character(1));
        assert_eq!(
            (p.a, p.b, p.c),
            (Ratio::new(4, 7), Ratio::new(6, 7), Ratio::new(12, 7))
        );
    }

    #[test]
    fn irreducibility_examples() {
        let t = w(5, [1, 1, 1, 2]);
        assert!((1..5).all(|j| is_irreducible(&t, t.character(j))));
        let t = w(6, [1, 2, 2, 1]);
        assert!(!is_irreducible(&t, t.character(3)));
        assert!(is_irreducible(&t, t.character(1)));
        assert!(!is_irreducible(&t, t.character(0)));
    }

    #[test]
    fn signature_criterion_examples() {
        let t = w(5, [1, 1, 1, 2]);
        match finiteness_by_signature(&t, t.character(4)).unwrap() {
            FinitenessVerdict::Infinite {
                witness:
                    InfiniteWitness::IndefiniteConjugate {
                        character, sigma, ..
                    },
            } => {
                assert!([2, 3].contains(&character));
                assert_eq!(sigma, 10);
            }
            v => panic!("expected infinite, got {v:?}"),
        }
        let t = w(4, [1, 1, 1, 1]);
        assert!(finiteness_by_signature(&t, t.character(1))
            .unwrap()
            .is_finite());
        let t = w(6, [1, 1, 1, 3]);
        assert!(finiteness_by_signature(&t, t.character(1))
            .unwrap()
            .is_finite());
        let t = w(6, [1, 2, 2, 1]);
        assert_eq!(
            finiteness_by_signature(&t, t.character(3)),
            Err(Error::PreconditionIrreducibility { j: 3 })
        );
    }

    #[test]
    fn infinite_character_examples() {
        let t = w(5, [1, 1, 1, 2]);
        assert_eq!(find_infinite_character(&t).unwrap().value(), 3);
        assert_eq!(sigma_sum(&t, t.character(3)).unwrap(), 10);
        let t = w(7, [1, 1, 1, 4]);
        assert_eq!(find_infinite_character(&t).unwrap().value(), 4);
        let t = w(11, [1, 2, 3, 5]);
        assert_eq!(find_infinite_character(&t).unwrap().value(), 9);
        assert_eq!(t.scaled(t.character(9)), [9, 7, 5, 1]);
        // m₀ + m₃ = 4 is not a unit mod 8
        let t = w(8, [1, 1, 3, 3]);
        assert_eq!(
            find_infinite_character(&t),
            Err(Error::NoUnit { value: 4, n: 8 })
        );
    }

    fn weight_tuple() -> impl Strategy<Value = WeightTuple> {
        (4u32..40)
            .prop_flat_map(|n| (Just(n), prop::array::uniform3(1u32..=n - 3)))
            .prop_filter_map("valid tuple", |(n, m)| {
                let rest: u32 = m.iter().sum();
                (rest < n).then(|| WeightTuple::new(n, [m[0], m[1], m[2], n - rest]).ok())?
            })
    }

    proptest! {
        #[test]
        fn irreducible_iff_nondegenerate(t in weight_tuple(), j in 1i64..40) {
            let j = t.character(j);
            prop_assume!(!j.is_zero());
            prop_assert_eq!(is_irreducible(&t, j), t.degenerate_branch(j).is_none());
        }

        #[test]
        fn criterion_is_galois_covariant(t in weight_tuple(), j in 1i64..40, h in 1i64..40) {
            let j = t.character(j);
            let h = reduce(h, t.modulus());
            prop_assume!(!j.is_zero() && is_irreducible(&t, j) && h.inverse().is_some());
            let hj = t.character((j.residue() * h.value() as i64).value() as i64);
            let a = finiteness_by_signature(&t, j).unwrap();
            let b = finiteness_by_signature(&t, hj).unwrap();
            prop_assert_eq!(a.is_finite(), b.is_finite());
        }
    }
}
