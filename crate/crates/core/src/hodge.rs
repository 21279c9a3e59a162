//! Hodge numbers and Hermitian signatures of the rank-2 eigenspace local
//! systems of a cyclic cover of ℙ¹ branched at ∞, 0, 1, x.
//!
//! For a character `j ≠ 0` put `μ_{i,j} = [m_i·j]/n`. The (1,0)-part of the
//! `χ_j`-eigenspace has dimension `−1 + Σ_i μ_{i,j}` and the invariant Hermitian
//! form has index `(−1 + Σμ, 3 − Σμ)`. Everything here reduces to the integer
//! `Σ_i [m_i·j] ∈ {n, 2n, 3n}`.

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::residue::{is_unit, reduce, CharacterIndex, Modulus};

/// The covering datum `(n; m₀, m₁, m₂, m₃)`: branch exponents at ∞, 0, 1, x.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawWeights", into = "RawWeights")]
pub struct WeightTuple {
    n: Modulus,
    m: [u32; 4],
}

#[derive(Serialize, Deserialize)]
struct RawWeights {
    n: u32,
    m: [u32; 4],
}

impl TryFrom<RawWeights> for WeightTuple {
    type Error = Error;
    fn try_from(raw: RawWeights) -> Result<Self> {
        WeightTuple::new(raw.n, raw.m)
    }
}

impl From<WeightTuple> for RawWeights {
    fn from(w: WeightTuple) -> Self {
        RawWeights {
            n: w.n.get(),
            m: w.m,
        }
    }
}

impl WeightTuple {
    /// Requires `Σ m_i ≡ 0 (mod n)`, `0 < m_i ≤ n − 3` and
    /// `gcd(m₀, …, m₃, n) = 1`.
    ///
    /// The sum is usually exactly `n`; sums of `2n` are accepted so that unit
    /// rescalings such as `n = 8, m = (4,4,3,5)` can be analysed directly.
    pub fn new(n: u32, m: [u32; 4]) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidWeights(format!(
                "n must be at least 4 to admit 0 < m_i <= n-3, got {n}"
            )));
        }
        let n_mod = Modulus::new(n)?;
        let total: u32 = m.iter().sum();
        if !total.is_multiple_of(n) {
            return Err(Error::InvalidWeights(format!(
                "weights must sum to n (or a multiple of n): {total} vs n = {n}"
            )));
        }
        for (i, &mi) in m.iter().enumerate() {
            if mi == 0 || mi > n - 3 {
                return Err(Error::InvalidWeights(format!(
                    "m_{i} = {mi} outside 1..={}",
                    n - 3
                )));
            }
        }
        let g = m.iter().fold(n, |g, &mi| g.gcd(&mi));
        if g != 1 {
            return Err(Error::InvalidWeights(format!(
                "gcd(m_0..m_3, n) = {g}, expected 1"
            )));
        }
        Ok(Self { n: n_mod, m })
    }

    pub fn n(&self) -> u32 {
        self.n.get()
    }

    pub fn modulus(&self) -> Modulus {
        self.n
    }

    pub fn m(&self) -> [u32; 4] {
        self.m
    }

    pub fn total(&self) -> u32 {
        self.m.iter().sum()
    }

    pub fn all_units(&self) -> bool {
        self.m.iter().all(|&mi| is_unit(reduce(mi as i64, self.n)))
    }

    pub fn character(&self, j: i64) -> CharacterIndex {
        CharacterIndex::new(j, self.n)
    }

    /// `[m_i·j]` for each branch point.
    pub fn scaled(&self, j: CharacterIndex) -> [u32; 4] {
        self.m
            .map(|mi| reduce(mi as i64 * j.value() as i64, self.n).value())
    }

    /// First branch index `i` with `n | j·m_i`, if any.
    pub fn degenerate_branch(&self, j: CharacterIndex) -> Option<usize> {
        self.scaled(j).iter().position(|&v| v == 0)
    }

    fn check_character(&self, j: CharacterIndex) -> Result<()> {
        assert_eq!(j.modulus(), self.n, "character modulus must match n");
        if j.is_zero() {
            return Err(Error::ZeroCharacter);
        }
        if let Some(branch) = self.degenerate_branch(j) {
            return Err(Error::DegenerateCharacter {
                j: j.value(),
                branch,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SplitClass {
    /// `Σ = n`: the (1,0)-part vanishes.
    Zero,
    /// `Σ = 2n`: one-dimensional (1,0)-part, indefinite form.
    AmpleCandidate,
    /// `Σ = 3n`: the whole eigenspace is of type (1,0), definite form.
    Flat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    pub p: u32,
    pub q: u32,
}

impl Signature {
    pub fn is_definite(self) -> bool {
        self.p == 0 || self.q == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenspaceReport {
    pub j: u32,
    pub sigma: u32,
    pub dim_h10: u32,
    pub dim_h01: u32,
    pub signature: Signature,
    pub split_class: SplitClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EigenspaceEntry {
    Regular(EigenspaceReport),
    DegenerateCharacter { j: u32, branch: usize },
}

impl EigenspaceEntry {
    pub fn report(&self) -> Option<&EigenspaceReport> {
        match self {
            Self::Regular(r) => Some(r),
            Self::DegenerateCharacter { .. } => None,
        }
    }
}

/// `μ_{i,j} = [m_i·j]/n`.
pub fn mu(w: &WeightTuple, i: usize, j: CharacterIndex) -> Result<Ratio<i64>> {
    assert!(i < 4, "branch index out of range");
    if j.is_zero() {
        return Err(Error::ZeroCharacter);
    }
    let v = w.scaled(j)[i];
    if v == 0 {
        return Err(Error::DegenerateCharacter {
            j: j.value(),
            branch: i,
        });
    }
    Ok(Ratio::new(v as i64, w.n() as i64))
}

/// `Σ_i [m_i·j]`, always one of `n, 2n, 3n`.
pub fn sigma_sum(w: &WeightTuple, j: CharacterIndex) -> Result<u32> {
    w.check_character(j)?;
    let sigma: u32 = w.scaled(j).iter().sum();
    debug_assert!(sigma.is_multiple_of(w.n()) && (1..=3).contains(&(sigma / w.n())));
    Ok(sigma)
}

/// `(dim H^{1,0}, dim H^{0,1})` of the `χ_j`-eigenspace.
pub fn hodge_dims(w: &WeightTuple, j: CharacterIndex) -> Result<(u32, u32)> {
    let h10 = sigma_sum(w, j)? / w.n() - 1;
    Ok((h10, 2 - h10))
}

/// Positivity and negativity index of the invariant Hermitian form.
pub fn signature(w: &WeightTuple, j: CharacterIndex) -> Result<Signature> {
    let (p, q) = hodge_dims(w, j)?;
    Ok(Signature { p, q })
}

pub fn split_class(w: &WeightTuple, j: CharacterIndex) -> Result<SplitClass> {
    Ok(match sigma_sum(w, j)? / w.n() {
        1 => SplitClass::Zero,
        2 => SplitClass::AmpleCandidate,
        _ => SplitClass::Flat,
    })
}

pub fn report(w: &WeightTuple, j: CharacterIndex) -> Result<EigenspaceReport> {
    let sigma = sigma_sum(w, j)?;
    let (dim_h10, dim_h01) = hodge_dims(w, j)?;
    Ok(EigenspaceReport {
        j: j.value(),
        sigma,
        dim_h10,
        dim_h01,
        signature: Signature {
            p: dim_h10,
            q: dim_h01,
        },
        split_class: split_class(w, j)?,
    })
}

/// One entry per `j = 1..n−1`; degenerate characters are flagged in place.
pub fn eigenspace_table(w: &WeightTuple) -> Vec<EigenspaceEntry> {
    (1..w.n() as i64)
        .map(|j| {
            let j = w.character(j);
            match report(w, j) {
                Ok(r) => EigenspaceEntry::Regular(r),
                Err(Error::DegenerateCharacter { j, branch }) => {
                    EigenspaceEntry::DegenerateCharacter { j, branch }
                }
                Err(e) => unreachable!("nonzero character failed: {e}"),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(n: u32, m: [u32; 4]) -> WeightTuple {
        WeightTuple::new(n, m).unwrap()
    }

    fn dims(t: &[EigenspaceEntry]) -> Vec<u32> {
        t.iter().map(|e| e.report().unwrap().dim_h10).collect()
    }

    #[test]
    fn weight_validation() {
        assert!(WeightTuple::new(5, [1, 1, 1, 3]).is_err());
        assert!(WeightTuple::new(5, [1, 1, 0, 3]).is_err());
        assert!(WeightTuple::new(6, [1, 1, 1, 4]).is_err()); // 4 > n-3
        assert!(WeightTuple::new(8, [2, 2, 2, 2]).is_err()); // gcd 2
        assert!(WeightTuple::new(8, [4, 4, 3, 5]).is_ok());
        let err = WeightTuple::new(5, [1, 1, 1, 3]).unwrap_err().to_string();
        assert!(err.contains("weights must sum to n"), "{err}");
    }

    #[test]
    fn mu_examples() {
        let t = w(5, [1, 1, 1, 2]);
        assert_eq!(mu(&t, 3, t.character(2)).unwrap(), Ratio::new(4, 5));
        assert_eq!(mu(&t, 0, t.character(1)).unwrap(), Ratio::new(1, 5));
        let t = w(6, [1, 2, 2, 1]);
        assert_eq!(
            mu(&t, 1, t.character(3)),
            Err(Error::DegenerateCharacter { j: 3, branch: 1 })
        );
    }

    #[test]
    fn sigma_examples() {
        let t = w(8, [4, 4, 3, 5]);
        for h in [1, 3, 5, 7] {
            assert_eq!(sigma_sum(&t, t.character(h)).unwrap(), 16);
        }
        let t = w(5, [1, 1, 1, 2]);
        assert_eq!(sigma_sum(&t, t.character(1)).unwrap(), 5);
        assert_eq!(sigma_sum(&t, t.character(4)).unwrap(), 15);
        assert_eq!(sigma_sum(&t, t.character(0)), Err(Error::ZeroCharacter));
    }

    #[test]
    fn hodge_and_signature_examples() {
        let t = w(5, [1, 1, 1, 2]);
        assert_eq!(hodge_dims(&t, t.character(1)).unwrap(), (0, 2));
        assert_eq!(hodge_dims(&t, t.character(4)).unwrap(), (2, 0));
        assert_eq!(
            signature(&t, t.character(2)).unwrap(),
            Signature { p: 1, q: 1 }
        );
        assert_eq!(
            signature(&t, t.character(4)).unwrap(),
            Signature { p: 2, q: 0 }
        );
        let t = w(7, [1, 1, 1, 4]);
        assert_eq!(hodge_dims(&t, t.character(3)).unwrap(), (1, 1));
        let t = w(4, [1, 1, 1, 1]);
        assert_eq!(
            signature(&t, t.character(1)).unwrap(),
            Signature { p: 0, q: 2 }
        );
    }

    #[test]
    fn table_examples() {
        let t = eigenspace_table(&w(5, [1, 1, 1, 2]));
        let classes: Vec<_> = t.iter().map(|e| e.report().unwrap().split_class).collect();
        assert_eq!(
            classes,
            vec![
                SplitClass::Zero,
                SplitClass::AmpleCandidate,
                SplitClass::AmpleCandidate,
                SplitClass::Flat
            ]
        );
        assert_eq!(dims(&t), vec![0, 1, 1, 2]);
        assert_eq!(dims(&t).iter().sum::<u32>(), 4);

        let t = eigenspace_table(&w(7, [1, 1, 1, 4]));
        assert_eq!(dims(&t), vec![0, 0, 1, 1, 2, 2]);
    }

    #[test]
    fn degenerate_entries_are_flagged() {
        let t = eigenspace_table(&w(6, [1, 2, 2, 1]));
        assert_eq!(t.len(), 5);
        assert_eq!(
            t[2],
            EigenspaceEntry::DegenerateCharacter { j: 3, branch: 1 }
        );
        assert!(t[0].report().is_some());
    }

    fn weight_tuple() -> impl Strategy<Value = WeightTuple> {
        (4u32..60)
            .prop_flat_map(|n| (Just(n), prop::array::uniform4(1u32..=n - 3)))
            .prop_filter_map("needs a valid tuple", |(n, mut m)| {
                // Adjust m₃ so the sum is n; keeps the strategy dense.
                let rest: u32 = m[..3].iter().sum();
                if rest >= n {
                    return None;
                }
                m[3] = n - rest;
                WeightTuple::new(n, m).ok()
            })
    }

    proptest! {
        #[test]
        fn complementary_characters(t in weight_tuple(), j in 1i64..60) {
            let j = t.character(j);
            prop_assume!(!j.is_zero() && t.degenerate_branch(j).is_none());
            let a = sigma_sum(&t, j).unwrap();
            let b = sigma_sum(&t, j.dual()).unwrap();
            prop_assert_eq!(a + b, 4 * t.n());
            prop_assert!([t.n(), 2 * t.n(), 3 * t.n()].contains(&a));
            let s = signature(&t, j).unwrap();
            let sd = signature(&t, j.dual()).unwrap();
            prop_assert_eq!(s, Signature { p: sd.q, q: sd.p });
            let flat = split_class(&t, j).unwrap() == SplitClass::Flat;
            let zero_dual = split_class(&t, j.dual()).unwrap() == SplitClass::Zero;
            prop_assert_eq!(flat, zero_dual);
        }

        #[test]
        fn genus_from_dimensions(t in weight_tuple()) {
            prop_assume!(t.all_units());
            let total: u32 = eigenspace_table(&t)
                .iter()
                .map(|e| e.report().unwrap().dim_h10)
                .sum();
            prop_assert_eq!(total, t.n() - 1);
        }
    }
}
