//! The fibred surface attached to a family `(n; m₀..m₃; n₀, n₁, n₂)`.
//!
//! The surface is a `(ℤ/n)²`-cover of the degree-5 del Pezzo surface (ℙ¹×ℙ¹
//! blown up at three points of the diagonal), branched along three horizontal
//! and three vertical lines, the diagonal and the three exceptional curves.
//! Only the combinatorics is modelled: the inertia elements of the ten branch
//! curves, the fifteen crossings between them, and the numerical invariants.

use std::collections::HashMap;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hodge::WeightTuple;
use crate::residue::{is_unit, reduce, units, Modulus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawFamily", into = "RawFamily")]
pub struct FamilyData {
    w: WeightTuple,
    base: [u32; 3],
}

#[derive(Serialize, Deserialize)]
struct RawFamily {
    n: u32,
    m: [u32; 4],
    nw: [u32; 3],
}

impl TryFrom<RawFamily> for FamilyData {
    type Error = Error;

    fn try_from(r: RawFamily) -> Result<Self> {
        Self::new(r.n, r.m, r.nw)
    }
}

impl From<FamilyData> for RawFamily {
    fn from(f: FamilyData) -> Self {
        Self {
            n: f.n(),
            m: f.m(),
            nw: f.base,
        }
    }
}

impl FamilyData {
    /// Checks the shape of the data: a valid weight tuple with `Σ m_i = n`,
    /// and base weights with `1 ≤ n_i ≤ n − 1`, `Σ n_i = n`. Admissibility is
    /// a separate question ([`is_admissible`]).
    pub fn new(n: u32, m: [u32; 4], nw: [u32; 3]) -> Result<Self> {
        let w = WeightTuple::new(n, m)?;
        if w.total() != n {
            return Err(Error::InvalidWeights(format!(
                "weights must sum to n: {} vs n = {n}",
                w.total()
            )));
        }
        if let Some(&bad) = nw.iter().find(|&&x| x == 0 || x >= n) {
            return Err(Error::InvalidFamily(format!(
                "base weight {bad} outside 1..={}",
                n - 1
            )));
        }
        let total: u32 = nw.iter().sum();
        if total != n {
            return Err(Error::InvalidFamily(format!(
                "base weights must sum to n: {total} vs n = {n}"
            )));
        }
        Ok(Self { w, base: nw })
    }

    pub fn weights(&self) -> &WeightTuple {
        &self.w
    }

    pub fn n(&self) -> u32 {
        self.w.n()
    }

    pub fn m(&self) -> [u32; 4] {
        self.w.m()
    }

    pub fn base_weights(&self) -> [u32; 3] {
        self.base
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub reason: Option<String>,
}

/// The first violated constraint other than `gcd(n, 6) = 1`: ranges, sums,
/// `m_j` and `n_i` units, and `m_i + m₃` units for `i = 0, 1, 2`.
pub fn constraint_violation(n: u32, m: [u32; 4], nw: [u32; 3]) -> Option<String> {
    if n < 5 {
        return Some(format!("n = {n} is below 5"));
    }
    if let Some(i) = (0..4).find(|&i| m[i] == 0 || m[i] > n - 3) {
        return Some(format!("m_{i} = {} outside 1..={}", m[i], n - 3));
    }
    if let Some(i) = (0..3).find(|&i| nw[i] == 0 || nw[i] >= n) {
        return Some(format!("n_{i} = {} outside 1..={}", nw[i], n - 1));
    }
    if m.iter().sum::<u32>() != n {
        return Some("weights must sum to n".into());
    }
    if nw.iter().sum::<u32>() != n {
        return Some("base weights must sum to n".into());
    }
    let modulus = Modulus::new(n).expect("n ≥ 5");
    let unit = |x: u32| is_unit(reduce(x as i64, modulus));
    if let Some(i) = (0..4).find(|&i| !unit(m[i])) {
        return Some(format!("m_{i} = {} is not a unit mod {n}", m[i]));
    }
    if let Some(i) = (0..3).find(|&i| !unit(nw[i])) {
        return Some(format!("n_{i} = {} is not a unit mod {n}", nw[i]));
    }
    if let Some(i) = (0..3).find(|&i| !unit(m[i] + m[3])) {
        return Some(format!(
            "m_{i} + m_3 = {} is not a unit mod {n}",
            m[i] + m[3]
        ));
    }
    None
}

/// All constraints; the coprimality with 6 is reported first, with the
/// obstruction it stands for.
pub fn is_admissible(f: &FamilyData) -> Admissibility {
    let n = f.n();
    let reason = if n.is_multiple_of(2) {
        Some(format!(
            "gcd({n}, 6) != 1: n is even, so every unit m_i is odd and m_i + m_3 is even, never a unit"
        ))
    } else if n.is_multiple_of(3) {
        Some(format!(
            "gcd({n}, 6) != 1: 3 divides n, so unit conditions force m_i = m_3 mod 3 and sum m_i = m_3 != 0 mod 3"
        ))
    } else {
        constraint_violation(n, f.m(), f.base)
    };
    Admissibility {
        admissible: reason.is_none(),
        reason,
    }
}

/// Admissible families exist exactly when `gcd(n, 6) = 1` (and `n ≥ 5`).
pub fn admissible_exists(n: u32) -> bool {
    n >= 5 && n.gcd(&6) == 1
}

/// Exhaustive search for data satisfying [`constraint_violation`]-free
/// constraints, without assuming anything about `gcd(n, 6)`. Returns the
/// lexicographically first witness `(m, n')`.
pub fn admissible_witness_search(n: u32) -> Option<([u32; 4], [u32; 3])> {
    if n < 5 {
        return None;
    }
    let modulus = Modulus::new(n).ok()?;
    let unit = |x: u32| is_unit(reduce(x as i64, modulus));
    let top = n - 3;
    for m0 in 1..=top {
        for m1 in 1..=top {
            for m2 in 1..=top {
                let used = m0 + m1 + m2;
                if used >= n || n - used > top {
                    continue;
                }
                let m = [m0, m1, m2, n - used];
                if !m.iter().all(|&x| unit(x)) || !(0..3).all(|i| unit(m[i] + m[3])) {
                    continue;
                }
                for n0 in 1..n {
                    for n1 in 1..n - n0 {
                        let nw = [n0, n1, n - n0 - n1];
                        if constraint_violation(n, m, nw).is_none() {
                            return Some((m, nw));
                        }
                    }
                }
            }
        }
    }
    None
}

/// `m = (1, 1, 1, n−3)`, `n' = (1, 1, n−2)`.
pub fn standard_family(n: u32) -> Result<FamilyData> {
    if n.gcd(&6) != 1 {
        return Err(Error::NotCoprimeToSix(n));
    }
    if n < 5 {
        return Err(Error::InvalidFamily(format!("n = {n} is below 5")));
    }
    FamilyData::new(n, [1, 1, 1, n - 3], [1, 1, n - 2])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BranchLabel {
    YInf,
    #[serde(rename = "Y_0")]
    Y0,
    #[serde(rename = "Y_1")]
    Y1,
    XInf,
    #[serde(rename = "X_0")]
    X0,
    #[serde(rename = "X_1")]
    X1,
    Delta,
    E0,
    E1,
    E2,
}

impl BranchLabel {
    pub const ALL: [BranchLabel; 10] = [
        Self::YInf,
        Self::Y0,
        Self::Y1,
        Self::XInf,
        Self::X0,
        Self::X1,
        Self::Delta,
        Self::E0,
        Self::E1,
        Self::E2,
    ];
}

/// Intersecting pairs of branch curves on the del Pezzo surface.
pub const ADJACENCY: [(BranchLabel, BranchLabel); 15] = {
    use BranchLabel::*;
    [
        (X0, YInf),
        (X0, Y1),
        (X1, YInf),
        (X1, Y0),
        (XInf, Y0),
        (XInf, Y1),
        (E0, YInf),
        (E0, XInf),
        (E0, Delta),
        (E1, Y0),
        (E1, X0),
        (E1, Delta),
        (E2, Y1),
        (E2, X1),
        (E2, Delta),
    ]
};

/// A branch curve and its inertia element in `(ℤ/n)²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchDivisor {
    pub label: BranchLabel,
    pub monodromy: [u32; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchTable {
    pub divisors: Vec<BranchDivisor>,
    pub adjacency: Vec<(BranchLabel, BranchLabel)>,
}

impl BranchTable {
    pub fn monodromy(&self, label: BranchLabel) -> [u32; 2] {
        self.divisors
            .iter()
            .find(|d| d.label == label)
            .expect("every label is present")
            .monodromy
    }
}

pub fn branch_table(f: &FamilyData) -> BranchTable {
    use BranchLabel::*;
    let n = f.n();
    let [m0, m1, m2, m3] = f.m();
    let [n0, n1, n2] = f.base;
    let r = |x: u32| x % n;
    let entries = [
        (YInf, [m0, 0]),
        (Y0, [m1, 0]),
        (Y1, [m2, 0]),
        (XInf, [r(n - m3), n0]),
        (X0, [0, n1]),
        (X1, [0, n2]),
        (Delta, [m3, 0]),
        (E0, [m0, n0]),
        (E1, [r(m1 + m3), n1]),
        (E2, [r(m2 + m3), n2]),
    ];
    BranchTable {
        divisors: entries
            .into_iter()
            .map(|(label, monodromy)| BranchDivisor { label, monodromy })
            .collect(),
        adjacency: ADJACENCY.to_vec(),
    }
}

/// Order of `(x, y)` in `(ℤ/n)²`.
pub fn element_order(v: [u32; 2], n: u32) -> u32 {
    n / n.gcd(&v[0]).gcd(&v[1])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderCheck {
    pub label: BranchLabel,
    pub order: u32,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCheck {
    pub pair: (BranchLabel, BranchLabel),
    /// `det` of the two inertia elements, reduced mod n.
    pub det: u32,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    pub smooth: bool,
    pub orders: Vec<OrderCheck>,
    pub pairs: Vec<PairCheck>,
}

/// Every inertia group is cyclic of order n, and any two meeting curves have
/// inertia generating `(ℤ/n)²` (unit determinant).
pub fn smoothness_check(f: &FamilyData) -> SmoothnessReport {
    let n = f.n();
    let table = branch_table(f);
    let modulus = f.weights().modulus();
    let orders: Vec<OrderCheck> = table
        .divisors
        .iter()
        .map(|d| {
            let order = element_order(d.monodromy, n);
            OrderCheck {
                label: d.label,
                order,
                passed: order == n,
            }
        })
        .collect();
    let pairs: Vec<PairCheck> = table
        .adjacency
        .iter()
        .map(|&(a, b)| {
            let [x1, y1] = table.monodromy(a).map(|v| v as i64);
            let [x2, y2] = table.monodromy(b).map(|v| v as i64);
            let det = reduce(x1 * y2 - x2 * y1, modulus);
            PairCheck {
                pair: (a, b),
                det: det.value(),
                passed: is_unit(det),
            }
        })
        .collect();
    SmoothnessReport {
        smooth: orders.iter().all(|o| o.passed) && pairs.iter().all(|p| p.passed),
        orders,
        pairs,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    /// Fibre genus.
    pub g: i64,
    /// Base genus.
    pub b: i64,
    pub e: i64,
    #[serde(rename = "K2")]
    pub k2: i64,
    pub chi: i64,
    #[serde(with = "crate::ratio_string")]
    pub slope: Ratio<i64>,
    /// `slope` to six decimal places, for reading only.
    pub slope_decimal: String,
    #[serde(rename = "deg_V")]
    pub deg_v: i64,
    pub mu: i64,
    pub ball_quotient: bool,
    /// Irregularity; the Albanese map is the fibration, so `q = b`.
    pub q: i64,
    pub p_g: i64,
}

/// Riemann–Hurwitz for the genera, the closed forms for `e` and `K²`,
/// Noether for `χ`, and `deg V = χ − (g−1)(b−1)`.
pub fn invariants(f: &FamilyData) -> Result<SurfaceInvariants> {
    let adm = is_admissible(f);
    if !adm.admissible {
        return Err(Error::Inadmissible(adm.reason.unwrap_or_default()));
    }
    Ok(invariants_for(f.n() as i64))
}

/// Invariants of any admissible family of degree `n`; they only depend on `n`.
pub fn invariants_for(n: i64) -> SurfaceInvariants {
    // fibre: n-fold cover of ℙ¹ branched at 4 points, all inertia of order n
    let two_g_minus_2 = -2 * n + 4 * (n - 1);
    // base: n-fold cover of ℙ¹ branched at 3 points
    let two_b_minus_2 = -2 * n + 3 * (n - 1);
    let g = two_g_minus_2 / 2 + 1;
    let b = two_b_minus_2 / 2 + 1;
    let e = 3 + 2 * (n - 2) * (n - 3);
    let k2 = 5 * (n - 2) * (n - 2);
    assert_eq!((k2 + e) % 12, 0, "Noether: 12 | K² + e");
    let chi = (k2 + e) / 12;
    let mu = e - 4 * (g - 1) * (b - 1);
    let deg_v = chi - (g - 1) * (b - 1);
    let slope = Ratio::new(k2, e);
    SurfaceInvariants {
        g,
        b,
        e,
        k2,
        chi,
        slope,
        slope_decimal: crate::ratio_string::decimal(&slope, 6),
        deg_v,
        mu,
        ball_quotient: slope == Ratio::from_integer(3),
        q: b,
        p_g: chi - 1 + b,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularFibreProfile {
    pub count: u32,
    pub locations: Vec<String>,
    pub components_per_fibre: u32,
    pub component_genus: i64,
    pub nodes_per_fibre: u32,
    pub intersection: String,
    pub arithmetic_genus: i64,
}

/// Over `x = 0, 1, ∞` the fibre is two genus-`b` curves meeting transversally
/// in one point.
pub fn singular_fibre_profile(f: &FamilyData) -> Result<SingularFibreProfile> {
    let inv = invariants(f)?;
    let (components, nodes) = (2i64, 1i64);
    let arithmetic_genus = components * inv.b + nodes - components + 1;
    assert_eq!(arithmetic_genus, inv.g, "singular fibres have genus g = 2b");
    Ok(SingularFibreProfile {
        count: 3,
        locations: vec!["x=0".into(), "x=1".into(), "x=inf".into()],
        components_per_fibre: components as u32,
        component_genus: inv.b,
        nodes_per_fibre: nodes as u32,
        intersection: "transverse, single point".into(),
        arithmetic_genus,
    })
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Canonical representative of a family under the symmetries used to compare
/// surfaces: a permutation of the indices 0, 1, 2 applied to `(m_i, n_i)`
/// jointly, rescaling `m` by a unit, and rescaling `n'` by a unit, keeping only
/// images whose entries still sum to `n`. The representative is the
/// lexicographically smallest `(m, n')` in the orbit. No claim is made that
/// distinct representatives give non-isomorphic surfaces.
pub fn normalize(f: &FamilyData) -> FamilyData {
    Normalizer::new(f.n()).canonical(f)
}

/// [`normalize`] for many families of one degree. The two rescalings are
/// independent, so for a fixed permutation the smallest image is the pair of
/// smallest rescaled tuples; those are cached per tuple.
#[derive(Debug, Clone)]
pub struct Normalizer {
    n: u32,
    units: Vec<u32>,
    fibre: HashMap<[u32; 4], [u32; 4]>,
    base: HashMap<[u32; 3], [u32; 3]>,
}

fn least_rescaling<const K: usize>(x: [u32; K], n: u32, units: &[u32]) -> [u32; K] {
    units
        .iter()
        .map(|&h| x.map(|v| (v as u64 * h as u64 % n as u64) as u32))
        .filter(|s| s.iter().sum::<u32>() == n)
        .min()
        .expect("the identity keeps the sum")
}

impl Normalizer {
    pub fn new(n: u32) -> Self {
        let units = match Modulus::new(n) {
            Ok(md) => units(md).iter().map(|u| u.value()).collect(),
            Err(_) => vec![1],
        };
        Normalizer {
            n,
            units,
            fibre: HashMap::new(),
            base: HashMap::new(),
        }
    }

    pub fn canonical(&mut self, f: &FamilyData) -> FamilyData {
        assert_eq!(f.n(), self.n, "normalizer built for another degree");
        let (n, m, nw) = (self.n, f.m(), f.base);
        let mut best: Option<([u32; 4], [u32; 3])> = None;
        for p in PERMUTATIONS {
            let pm = [m[p[0]], m[p[1]], m[p[2]], m[3]];
            let pn = [nw[p[0]], nw[p[1]], nw[p[2]]];
            let sm = *self
                .fibre
                .entry(pm)
                .or_insert_with(|| least_rescaling(pm, n, &self.units));
            let sn = *self
                .base
                .entry(pn)
                .or_insert_with(|| least_rescaling(pn, n, &self.units));
            if best.is_none_or(|b| (sm, sn) < b) {
                best = Some((sm, sn));
            }
        }
        let (m, nw) = best.expect("six permutations");
        FamilyData::new(n, m, nw).expect("symmetries preserve validity")
    }
}

/// Every admissible family of degree `n`, in lexicographic order of `(m, n')`.
pub fn admissible_families(n: u32) -> Vec<FamilyData> {
    if !admissible_exists(n) {
        return Vec::new();
    }
    let modulus = Modulus::new(n).expect("n >= 5");
    let unit: Vec<bool> = (0..2 * n)
        .map(|x| is_unit(reduce(x as i64, modulus)))
        .collect();
    let bases: Vec<[u32; 3]> = (1..n)
        .flat_map(|n0| (1..n - n0).map(move |n1| [n0, n1, n - n0 - n1]))
        .filter(|b| b.iter().all(|&x| unit[x as usize]))
        .collect();
    let top = n - 3;
    let mut out = Vec::new();
    for m0 in 1..=top {
        for m1 in 1..=top {
            for m2 in 1..=top {
                let used = m0 + m1 + m2;
                if used >= n || n - used > top {
                    continue;
                }
                let m = [m0, m1, m2, n - used];
                if !m.iter().all(|&x| unit[x as usize])
                    || !(0..3).all(|i| unit[(m[i] + m[3]) as usize])
                {
                    continue;
                }
                for &nw in &bases {
                    debug_assert!(constraint_violation(n, m, nw).is_none());
                    out.push(FamilyData::new(n, m, nw).expect("admissible data is valid"));
                }
            }
        }
    }
    out
}
