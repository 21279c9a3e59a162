//! Certificates that a family yields a fibred surface whose direct image
//! `V = f_*ω_{S/B}` has a unitary flat summand with infinite monodromy, and
//! hence is not semiample.
//!
//! The flat summand is `V_{n−1}`: `Σ m_i = n` forces `Σ_i [m_i(n−1)] = 3n`, so
//! the whole rank-2 eigenspace is of type (1,0). Its monodromy is infinite
//! because a Galois conjugate `χ_{j*}` with `j*(m₀ + m₃) ≡ −1` carries an
//! indefinite form.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hodge::{
    eigenspace_table, sigma_sum, signature, EigenspaceEntry, Signature, SplitClass, WeightTuple,
};
use crate::monodromy::{
    find_infinite_character, finiteness_by_signature, group_closure_with, invariant_hermitian_form,
    is_irreducible, levelt_triple, params_from_weights, ClosureOptions, FinitenessVerdict,
};
use crate::residue::{is_unit, reduce};
use crate::surface::{
    admissible_exists, admissible_families, invariants, invariants_for, is_admissible,
    smoothness_check, standard_family, FamilyData, Normalizer, SmoothnessReport, SurfaceInvariants,
};

pub const LIMITATIONS: &str = "This certificate checks arithmetic and combinatorial data only. \
The existence of the surface as a smooth complex manifold, the identification of the fibration \
with the Albanese map, rigidity, and the failure of semiampleness itself are not computed; \
they follow from the recorded data through the theory of abelian covers and the fact that a \
unitary flat summand with infinite monodromy is not semiample.";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingEntry {
    pub j: u32,
    #[serde(rename = "dim_Vj")]
    pub dim_vj: u32,
    pub split_class: SplitClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingReport {
    pub entries: Vec<SplittingEntry>,
    /// Characters with some `j·m_i ≡ 0`; never silently dropped.
    pub degenerate: Vec<u32>,
    #[serde(rename = "rank_V")]
    pub rank_v: u32,
    pub rank_flat: u32,
    pub rank_ample_candidate: u32,
    /// `rank_flat ≤ rank Q ≤ rank_flat + rank_ample_candidate`.
    pub rank_q_bounds: [u32; 2],
    /// Only defined when admissible families of this degree exist.
    #[serde(rename = "deg_V")]
    pub deg_v: Option<i64>,
}

/// Decomposition of `V = ⊕_j V_j` by split class.
pub fn splitting(w: &WeightTuple) -> SplittingReport {
    let mut entries = Vec::new();
    let mut degenerate = Vec::new();
    for e in eigenspace_table(w) {
        match e {
            EigenspaceEntry::Regular(r) => entries.push(SplittingEntry {
                j: r.j,
                dim_vj: r.dim_h10,
                split_class: r.split_class,
            }),
            EigenspaceEntry::DegenerateCharacter { j, .. } => degenerate.push(j),
        }
    }
    let count = |c: SplitClass| entries.iter().filter(|e| e.split_class == c).count() as u32;
    let rank_flat = 2 * count(SplitClass::Flat);
    let rank_ample_candidate = count(SplitClass::AmpleCandidate);
    SplittingReport {
        rank_v: entries.iter().map(|e| e.dim_vj).sum(),
        rank_flat,
        rank_ample_candidate,
        rank_q_bounds: [rank_flat, rank_flat + rank_ample_candidate],
        deg_v: admissible_exists(w.n()).then(|| invariants_for(w.n() as i64).deg_v),
        entries,
        degenerate,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatCensusEntry {
    pub j: u32,
    pub verdict: FinitenessVerdict,
}

/// Each flat character with the signature-criterion verdict on its monodromy.
pub fn flat_summand_census(w: &WeightTuple) -> Result<Vec<FlatCensusEntry>> {
    splitting(w)
        .entries
        .iter()
        .filter(|e| e.split_class == SplitClass::Flat)
        .map(|e| {
            Ok(FlatCensusEntry {
                j: e.j,
                verdict: finiteness_by_signature(w, w.character(e.j as i64))?,
            })
        })
        .collect()
}

/// `j*` is the Galois conjugate `[h·(n−1)]` of the flat character and has an
/// indefinite form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndefiniteWitness {
    pub j_star: u32,
    pub flat_character: u32,
    pub unit: u32,
    pub sigma: u32,
    pub signature: Signature,
}

impl IndefiniteWitness {
    pub fn is_valid(&self, w: &WeightTuple) -> bool {
        let n = w.modulus();
        let h = reduce(self.unit as i64, n);
        is_unit(h)
            && (h * self.flat_character as i64).value() == self.j_star
            && self.flat_character == w.n() - 1
            && sigma_sum(w, w.character(self.j_star as i64)) == Ok(2 * w.n())
            && self.sigma == 2 * w.n()
            && self.signature == Signature { p: 1, q: 1 }
    }
}

fn indefinite_witness(w: &WeightTuple) -> Result<IndefiniteWitness> {
    let j = find_infinite_character(w)?;
    let n = w.n();
    // [h·(n−1)] = j*  ⟺  h = −j*
    let unit = reduce(-(j.value() as i64), w.modulus()).value();
    Ok(IndefiniteWitness {
        j_star: j.value(),
        flat_character: n - 1,
        unit,
        sigma: sigma_sum(w, j)?,
        signature: signature(w, j)?,
    })
}

/// Matrix-oracle cross-check on the flat character and on `j*`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleAgreement {
    pub character: u32,
    pub criterion: FinitenessVerdict,
    pub oracle: FinitenessVerdict,
    pub j_star_form_signature: Option<Signature>,
    /// `None` when the closure was inconclusive.
    pub agrees: Option<bool>,
}

fn oracle_check(
    w: &WeightTuple,
    witness: &IndefiniteWitness,
    opts: &ClosureOptions,
) -> Result<OracleAgreement> {
    let flat = w.character(witness.flat_character as i64);
    let criterion = finiteness_by_signature(w, flat)?;
    let t = levelt_triple(&params_from_weights(w, flat), w.modulus())?;
    let oracle = group_closure_with(&t, opts);
    let tj = levelt_triple(
        &params_from_weights(w, w.character(witness.j_star as i64)),
        w.modulus(),
    )?;
    let form = invariant_hermitian_form(&tj).ok().map(|f| f.signature);
    let agrees = if oracle.is_inconclusive() {
        None
    } else {
        Some(!criterion.disagrees_with(&oracle) && form == Some(witness.signature))
    };
    Ok(OracleAgreement {
        character: flat.value(),
        criterion,
        oracle,
        j_star_form_signature: form,
        agrees,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Counterexample,
    NotCertified { reason: String },
}

impl Verdict {
    pub fn is_counterexample(&self) -> bool {
        matches!(self, Self::Counterexample)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub family: FamilyData,
    pub admissible: bool,
    pub admissibility_reason: Option<String>,
    pub smooth: bool,
    pub smoothness: SmoothnessReport,
    pub invariants: Option<SurfaceInvariants>,
    pub splitting: SplittingReport,
    pub irreducible_all: bool,
    pub infinite_witness: Option<IndefiniteWitness>,
    pub flat_census: Vec<FlatCensusEntry>,
    pub oracle: Option<OracleAgreement>,
    pub verdict: Verdict,
    pub limitations: String,
}

/// Runs every check and assembles the verdict; failures become
/// `NOT_CERTIFIED` with the first reason. With `oracle` set, the matrix group
/// of the flat character is also enumerated.
pub fn certify(f: &FamilyData, oracle: Option<&ClosureOptions>) -> Certificate {
    let w = f.weights();
    let adm = is_admissible(f);
    let smoothness = smoothness_check(f);
    let invariants = invariants(f).ok();
    let split = splitting(w);
    let irreducible_all = (1..w.n() as i64)
        .map(|j| w.character(j))
        .filter(|&j| w.degenerate_branch(j).is_none())
        .all(|j| is_irreducible(w, j));
    let witness = indefinite_witness(w);
    let flat_census = flat_summand_census(w).unwrap_or_default();
    let oracle = match (oracle, &witness) {
        (Some(opts), Ok(wit)) => oracle_check(w, wit, opts).ok(),
        _ => None,
    };

    let reason = if !adm.admissible {
        Some(format!(
            "admissibility: {}",
            adm.reason.clone().unwrap_or_default()
        ))
    } else if !smoothness.smooth {
        Some("smoothness: some inertia element or crossing fails".to_string())
    } else if !split.degenerate.is_empty() {
        Some(format!("degenerate characters {:?}", split.degenerate))
    } else if !irreducible_all {
        Some("some character has reducible monodromy".to_string())
    } else if split.rank_flat < 2 {
        Some("no flat summand".to_string())
    } else {
        match &witness {
            Err(e) => Some(format!("no indefinite conjugate: {e}")),
            Ok(wit) if !wit.is_valid(w) => Some("indefinite witness failed validation".to_string()),
            Ok(_) => None,
        }
    };
    Certificate {
        family: *f,
        admissible: adm.admissible,
        admissibility_reason: adm.reason,
        smooth: smoothness.smooth,
        smoothness,
        invariants,
        splitting: split,
        irreducible_all,
        infinite_witness: witness.ok(),
        flat_census,
        oracle,
        verdict: match reason {
            None => Verdict::Counterexample,
            Some(reason) => Verdict::NotCertified { reason },
        },
        limitations: LIMITATIONS.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShimuraReport {
    pub count: u32,
    /// Pairs `{j, n−j}` with `Σ = 2n`.
    pub pairs: Vec<[u32; 2]>,
    pub candidate: bool,
}

/// Character pairs contributing a one-dimensional `V_j ⊗ V_{−j}`; a single
/// such pair makes the family a Shimura-curve candidate.
pub fn shimura_count(w: &WeightTuple) -> ShimuraReport {
    let n = w.n();
    let pairs: Vec<[u32; 2]> = (1..=n / 2)
        .filter(|&j| sigma_sum(w, w.character(j as i64)) == Ok(2 * n))
        .map(|j| [j, n - j])
        .collect();
    ShimuraReport {
        count: pairs.len() as u32,
        candidate: pairs.len() == 1,
        pairs,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EnumerationMode {
    StandardOnly,
    All,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationEntry {
    pub family: FamilyData,
    /// Number of admissible tuples represented, when normalizing.
    pub class_size: Option<usize>,
    pub smooth: bool,
    pub j_star: Option<u32>,
    pub rank_flat: u32,
    pub rank_ample_candidate: u32,
    pub shimura_count: u32,
    pub verdict: Verdict,
}

impl EnumerationEntry {
    fn from_certificate(c: &Certificate, class_size: Option<usize>) -> Self {
        Self {
            family: c.family,
            class_size,
            smooth: c.smooth,
            j_star: c.infinite_witness.as_ref().map(|w| w.j_star),
            rank_flat: c.splitting.rank_flat,
            rank_ample_candidate: c.splitting.rank_ample_candidate,
            shimura_count: shimura_count(c.family.weights()).count,
            verdict: c.verdict.clone(),
        }
    }
}

/// Certifies the standard family, or every admissible family, for each
/// `n ∈ [n_min, n_max]`. Output is sorted by `(n, m, n')` regardless of the
/// parallel schedule.
pub fn enumerate_families(
    n_min: u32,
    n_max: u32,
    mode: EnumerationMode,
    normalized: bool,
) -> Result<Vec<EnumerationEntry>> {
    if n_min < 5 || n_min > n_max {
        return Err(Error::InvalidFamily(format!(
            "need 5 <= n_min <= n_max, got {n_min}..{n_max}"
        )));
    }
    let per_n: Vec<Vec<EnumerationEntry>> = (n_min..=n_max)
        .into_par_iter()
        .map(|n| {
            let families = match mode {
                EnumerationMode::StandardOnly => standard_family(n).into_iter().collect(),
                EnumerationMode::All => admissible_families(n),
            };
            let grouped: Vec<(FamilyData, Option<usize>)> = if normalized {
                let mut norm = Normalizer::new(n);
                let mut classes = std::collections::BTreeMap::new();
                for f in &families {
                    *classes.entry(norm.canonical(f)).or_insert(0usize) += 1;
                }
                classes.into_iter().map(|(f, k)| (f, Some(k))).collect()
            } else {
                families.into_iter().map(|f| (f, None)).collect()
            };
            grouped
                .par_iter()
                .map(|(f, k)| EnumerationEntry::from_certificate(&certify(f, None), *k))
                .collect()
        })
        .collect();
    Ok(per_n.into_iter().flatten().collect())
}
