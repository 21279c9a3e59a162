use std::collections::BTreeSet;

use proptest::prelude::*;

use cyclocover::certify::{certify, shimura_count, Certificate};
use cyclocover::hodge::WeightTuple;
use cyclocover::surface::{admissible_families, normalize, FamilyData, Normalizer};

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

fn coprime(a: u32, b: u32) -> bool {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a == 1
}

/// Every image of `f` under the symmetry group, listed naively.
fn orbit(f: &FamilyData) -> BTreeSet<([u32; 4], [u32; 3])> {
    let n = f.n();
    let units: Vec<u32> = (1..n).filter(|&h| coprime(h, n)).collect();
    let (m, nw) = (f.m(), f.base_weights());
    let mut out = BTreeSet::new();
    for p in PERMUTATIONS {
        for &a in &units {
            for &b in &units {
                let sm = [m[p[0]], m[p[1]], m[p[2]], m[3]].map(|x| x * a % n);
                let sn = [nw[p[0]], nw[p[1]], nw[p[2]]].map(|x| x * b % n);
                if sm.iter().sum::<u32>() == n && sn.iter().sum::<u32>() == n {
                    out.insert((sm, sn));
                }
            }
        }
    }
    out
}

fn admissible_degree() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![5u32, 7, 11, 13])
}

fn family() -> impl Strategy<Value = FamilyData> {
    admissible_degree().prop_flat_map(|n| {
        let all = admissible_families(n);
        prop::sample::select(all)
    })
}

#[test]
fn normalizer_matches_brute_force_orbits() {
    for n in [5u32, 7, 11] {
        let mut norm = Normalizer::new(n);
        let mut classes = BTreeSet::new();
        for f in admissible_families(n) {
            let (m, nw) = *orbit(&f).iter().next().unwrap();
            let c = norm.canonical(&f);
            assert_eq!((c.m(), c.base_weights()), (m, nw), "{f:?}");
            classes.insert(c);
        }
        if n == 5 {
            assert_eq!(classes.len(), 3);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orbit_members_share_representative(f in family()) {
        let rep = normalize(&f);
        for (m, nw) in orbit(&f) {
            let g = FamilyData::new(f.n(), m, nw).unwrap();
            prop_assert_eq!(normalize(&g), rep);
        }
    }

    #[test]
    fn certificate_round_trips_through_json(f in family()) {
        let c = certify(&f, None);
        let text = serde_json::to_string(&c).unwrap();
        let back: Certificate = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn certificate_depends_on_class_only_through_invariants(f in family()) {
        let a = certify(&f, None);
        let b = certify(&normalize(&f), None);
        prop_assert_eq!(a.invariants, b.invariants);
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(a.splitting.rank_flat, b.splitting.rank_flat);
        prop_assert_eq!(a.splitting.rank_ample_candidate, b.splitting.rank_ample_candidate);
    }

    #[test]
    fn shimura_count_is_symmetric(f in family(), k in 0usize..6, h in 1u32..13) {
        let n = f.n();
        prop_assume!(coprime(h, n));
        let m = f.m();
        let p = PERMUTATIONS[k];
        let permuted = [m[p[0]], m[p[1]], m[p[2]], m[3]];
        let scaled = permuted.map(|x| x * h % n);
        let base = shimura_count(f.weights()).count;
        prop_assert_eq!(shimura_count(&WeightTuple::new(n, permuted).unwrap()).count, base);
        if let Ok(w) = WeightTuple::new(n, scaled) {
            prop_assert_eq!(shimura_count(&w).count, base);
        }
    }
}
