//! Exhaustive comparison of the arithmetic criteria with the matrix oracle
//! over all weight tuples up to a bound.
//!
//! The triple, and hence every oracle answer, only depends on the local
//! exponents modulo 1, so oracle work is done once per [`ExponentKey`] and
//! fanned out over a thread pool. Results are sorted, so the output does not
//! depend on scheduling.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::closure::{group_closure_with, ClosureOptions};
use super::hermitian::{has_common_eigenvector, invariant_hermitian_form};
use super::levelt::{levelt_triple_unchecked, ExponentKey};
use super::{finiteness_by_signature, is_irreducible, params_from_weights, FinitenessVerdict};
use crate::hodge::{signature, Signature, WeightTuple};

/// Every valid tuple `(n; m₀..m₃)` with `Σ m_i = n` for `4 ≤ n ≤ n_max`, in
/// lexicographic order.
pub fn weight_tuples(n_max: u32) -> Vec<WeightTuple> {
    let mut out = Vec::new();
    for n in 4..=n_max {
        let top = n - 3;
        for m0 in 1..=top {
            for m1 in 1..=top {
                for m2 in 1..=top {
                    let used = m0 + m1 + m2;
                    if used >= n || n - used > top {
                        continue;
                    }
                    if let Ok(w) = WeightTuple::new(n, [m0, m1, m2, n - used]) {
                        out.push(w);
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct OracleAnswer {
    common_eigenvector: bool,
    verdict: Option<FinitenessVerdict>,
    signature: Option<Signature>,
}

fn oracle(key: ExponentKey, w: &WeightTuple, j: u32, opts: &ClosureOptions) -> OracleAnswer {
    let t = levelt_triple_unchecked(&params_from_weights(w, w.character(j as i64)), w.modulus());
    let common_eigenvector = has_common_eigenvector(&t);
    if key.is_reducible() {
        return OracleAnswer {
            common_eigenvector,
            verdict: None,
            signature: None,
        };
    }
    OracleAnswer {
        common_eigenvector,
        verdict: Some(group_closure_with(&t, opts)),
        signature: invariant_hermitian_form(&t).ok().map(|f| f.signature),
    }
}

/// One `(w, j)` comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepInstance {
    pub n: u32,
    pub m: [u32; 4],
    pub j: u32,
    pub irreducible: bool,
    pub oracle_irreducible: bool,
    /// Criterion verdict; only for irreducible characters.
    pub criterion_finite: Option<bool>,
    pub oracle: Option<FinitenessVerdict>,
    pub signature: Option<Signature>,
    pub oracle_signature: Option<Signature>,
}

impl SweepInstance {
    pub fn finiteness_disagrees(&self) -> bool {
        match (self.criterion_finite, &self.oracle) {
            (Some(f), Some(v)) => (f && v.is_infinite()) || (!f && v.is_finite()),
            _ => false,
        }
    }

    pub fn irreducibility_disagrees(&self) -> bool {
        self.irreducible != self.oracle_irreducible
    }

    pub fn signature_disagrees(&self) -> bool {
        self.irreducible && self.signature != self.oracle_signature
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub n_max: u32,
    pub tuples: usize,
    /// Irreducible characters compared for finiteness.
    pub instances: usize,
    pub agreements: usize,
    pub disagreements: usize,
    pub inconclusive: usize,
    /// Inconclusive at the primary caps and decided at the escalated ones.
    pub resolved_by_escalation: usize,
    pub finite: usize,
    pub infinite: usize,
    pub irreducibility_checks: usize,
    pub irreducibility_disagreements: usize,
    pub signature_checks: usize,
    pub signature_disagreements: usize,
    pub distinct_triples: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub summary: SweepSummary,
    pub instances: Vec<SweepInstance>,
}

impl SweepReport {
    pub fn inconclusive_instances(&self) -> impl Iterator<Item = &SweepInstance> {
        self.instances.iter().filter(|i| {
            i.oracle
                .as_ref()
                .is_some_and(FinitenessVerdict::is_inconclusive)
        })
    }

    pub fn is_consistent(&self) -> bool {
        let s = &self.summary;
        s.disagreements == 0
            && s.irreducibility_disagreements == 0
            && s.signature_disagreements == 0
    }
}

/// Runs the sweep. Oracle closures that come back inconclusive at `primary`
/// are rerun at `escalation` when given.
pub fn sweep(
    n_max: u32,
    primary: &ClosureOptions,
    escalation: Option<&ClosureOptions>,
) -> SweepReport {
    let tuples = weight_tuples(n_max);
    let pairs: Vec<(WeightTuple, u32)> = tuples
        .iter()
        .flat_map(|w| (1..w.n()).map(move |j| (*w, j)))
        .collect();

    let mut representatives: BTreeMap<ExponentKey, (WeightTuple, u32)> = BTreeMap::new();
    for &(w, j) in &pairs {
        let key = ExponentKey::new(&params_from_weights(&w, w.character(j as i64)), w.modulus());
        representatives.entry(key).or_insert((w, j));
    }
    let answer_primary: BTreeMap<ExponentKey, OracleAnswer> = representatives
        .par_iter()
        .map(|(&key, (w, j))| (key, oracle(key, w, *j, primary)))
        .collect();
    let mut answers = answer_primary.clone();
    if let Some(esc) = escalation {
        let retried: Vec<(ExponentKey, OracleAnswer)> = answer_primary
            .par_iter()
            .filter(|(_, a)| {
                a.verdict
                    .as_ref()
                    .is_some_and(FinitenessVerdict::is_inconclusive)
            })
            .map(|(&key, _)| {
                let (w, j) = &representatives[&key];
                (key, oracle(key, w, *j, esc))
            })
            .collect();
        answers.extend(retried);
    }

    let mut summary = SweepSummary {
        n_max,
        tuples: tuples.len(),
        distinct_triples: answers.len(),
        ..SweepSummary::default()
    };
    let mut instances = Vec::with_capacity(pairs.len());
    for (w, j) in pairs {
        let cj = w.character(j as i64);
        let key = ExponentKey::new(&params_from_weights(&w, cj), w.modulus());
        let ans = &answers[&key];
        let irreducible = is_irreducible(&w, cj);
        let criterion_finite = irreducible.then(|| {
            finiteness_by_signature(&w, cj)
                .expect("irreducible characters satisfy the criterion's hypotheses")
                .is_finite()
        });
        let inst = SweepInstance {
            n: w.n(),
            m: w.m(),
            j,
            irreducible,
            oracle_irreducible: !ans.common_eigenvector,
            criterion_finite,
            oracle: if irreducible {
                ans.verdict.clone()
            } else {
                None
            },
            signature: signature(&w, cj).ok(),
            oracle_signature: if irreducible { ans.signature } else { None },
        };

        summary.irreducibility_checks += 1;
        summary.irreducibility_disagreements += inst.irreducibility_disagrees() as usize;
        if irreducible {
            summary.instances += 1;
            summary.signature_checks += 1;
            summary.signature_disagreements += inst.signature_disagrees() as usize;
            let v = inst
                .oracle
                .as_ref()
                .expect("irreducible keys carry a verdict");
            if inst.finiteness_disagrees() {
                summary.disagreements += 1;
            } else if v.is_inconclusive() {
                summary.inconclusive += 1;
            } else {
                summary.agreements += 1;
            }
            if v.is_finite() {
                summary.finite += 1;
            } else if v.is_infinite() {
                summary.infinite += 1;
            }
            let was_inconclusive = answer_primary[&key]
                .verdict
                .as_ref()
                .is_some_and(FinitenessVerdict::is_inconclusive);
            if was_inconclusive && !v.is_inconclusive() {
                summary.resolved_by_escalation += 1;
            }
        }
        instances.push(inst);
    }
    SweepReport { summary, instances }
}
