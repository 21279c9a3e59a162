//! Brute-force finiteness oracle: enumerate the matrix group generated by a
//! triple, and look for elements of infinite order.
//!
//! # Finite-order test
//!
//! An eigenvalue of a finite-order element is a root of unity of degree at
//! most `2φ(N)` over ℚ, so its order lies in `K(N) = {k : φ(k) ≤ 2φ(N)}` and
//! the order of the element divides `B(N) = lcm K(N)`. Rather than raising a
//! matrix to the (astronomical) power `B(N)`, the test works with
//! `s = tr(M)²/det(M) − 2 = ρ + ρ⁻¹`, where `ρ = λ₁/λ₂` is the eigenvalue ratio:
//! `M` has finite order iff `det M` is a root of unity and either `M` is
//! scalar, or `ρ ≠ 1` and `ρ^k = 1` for some `k ≤ max K(N)`. The latter is
//! checked exactly with the Dickson recurrence `D_{k+1} = s·D_k − D_{k−1}`
//! (`D_k = ρ^k + ρ^{−k}`).
//!
//! If every conjugate of `s` lies in `[−2, 2]` then so does every conjugate of
//! every `D_k`, which bounds their integer coefficients far below `2^63`; an
//! overflow while iterating therefore certifies infinite order.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::levelt::{Generator, MonodromyTriple, Word};
use super::matrix::IntMatrix;
use super::{FinitenessVerdict, InfiniteWitness};
use crate::cyclotomic::CyclotomicField;
use crate::residue::euler_phi;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureOptions {
    pub cap: usize,
    pub max_word_len: usize,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        Self {
            cap: 20_000,
            max_word_len: 8,
        }
    }
}

/// `{k : φ(k) ≤ 2φ(N)}`, ascending.
pub fn possible_root_orders(level: u32) -> Vec<u64> {
    let bound = 2 * euler_phi(level as u64);
    // φ(k) ≥ √(k/2), so k ≤ 2·bound² covers every candidate
    (1..=2 * bound * bound + 2)
        .filter(|&k| euler_phi(k) <= bound)
        .collect()
}

/// `B(N) = lcm{k : φ(k) ≤ 2φ(N)}`; every finite-order element of
/// `GL₂(ℤ[ζ_N])` has order dividing it.
pub fn finite_order_bound(level: u32) -> BigUint {
    possible_root_orders(level)
        .into_iter()
        .fold(BigUint::one(), |acc, k| acc.lcm(&BigUint::from(k)))
}

/// Exact finite-order test for an element of `GL₂(ℤ[ζ_N])`.
pub fn has_finite_order(field: &CyclotomicField, m: &IntMatrix) -> bool {
    let Some(det) = m.det(field) else {
        return false;
    };
    let Some(det_inv) = root_of_unity_inverse(field, &det) else {
        return false;
    };
    if m.is_scalar() {
        return true;
    }
    let Some(s) = ratio_trace(field, m, &det_inv) else {
        return false;
    };
    let two = field.int_add(&field.int_one(), &field.int_one()).unwrap();
    if s == two {
        // ρ = 1 on a non-scalar matrix: a nontrivial unipotent part
        return false;
    }
    let kmax = *possible_root_orders(field.level()).last().unwrap();
    let (mut prev, mut cur) = (two.clone(), s.clone());
    for _ in 1..=kmax {
        if cur == two {
            return true;
        }
        let next = field
            .int_mul(&s, &cur)
            .and_then(|sc| field.int_sub(&sc, &prev));
        match next {
            Some(next) => {
                prev = std::mem::replace(&mut cur, next);
            }
            None => return false,
        }
    }
    false
}

/// `tr(M)²·det(M)⁻¹ − 2`.
fn ratio_trace(field: &CyclotomicField, m: &IntMatrix, det_inv: &[i64]) -> Option<Vec<i64>> {
    let tr = m.trace(field)?;
    let t2 = field.int_mul(&tr, &tr)?;
    let q = field.int_mul(&t2, det_inv)?;
    let two = field.int_add(&field.int_one(), &field.int_one())?;
    field.int_sub(&q, &two)
}

/// Inverse of `±ζ^k`, or `None` if `x` is not a root of unity.
fn root_of_unity_inverse(field: &CyclotomicField, x: &[i64]) -> Option<Vec<i64>> {
    let n = field.level() as i64;
    (0..n).find_map(|k| {
        let r = field.int_root(k);
        if r == x {
            Some(field.int_root(-k))
        } else if field.int_neg(&r) == x {
            Some(field.int_neg(&field.int_root(-k)))
        } else {
            None
        }
    })
}

/// Cheap floating-point screen: whether the exact test could possibly report
/// infinite order. Elements of finite groups almost always fail this screen.
fn may_have_infinite_order(field: &CyclotomicField, m: &IntMatrix) -> bool {
    let (Some(tr), Some(det)) = (m.trace(field), m.det(field)) else {
        return true;
    };
    let tol = 1e-7;
    field.galois_exponents().iter().any(|&h| {
        let t: Complex64 = field.int_embed(&tr, h as i64);
        let d: Complex64 = field.int_embed(&det, h as i64);
        if (d.norm() - 1.0).abs() > tol {
            return true;
        }
        let s = t * t / d - 2.0;
        s.im.abs() > tol || s.re.abs() > 2.0 + tol || (s.re - 2.0).abs() < 1e-4
    })
}

fn is_infinite_order(field: &CyclotomicField, m: &IntMatrix) -> bool {
    may_have_infinite_order(field, m) && !has_finite_order(field, m)
}

struct Enumeration<'a> {
    triple: &'a MonodromyTriple,
    elements: Vec<IntMatrix>,
    parent: Vec<Option<(usize, Generator)>>,
    index: HashMap<IntMatrix, usize>,
    queue: VecDeque<usize>,
}

enum Step {
    Exhausted,
    Found(Word),
    Overflow,
}

impl<'a> Enumeration<'a> {
    fn new(triple: &'a MonodromyTriple) -> Self {
        let id = IntMatrix::identity(triple.field());
        let mut index = HashMap::new();
        index.insert(id.clone(), 0);
        Self {
            triple,
            elements: vec![id],
            parent: vec![None],
            index,
            queue: VecDeque::from([0]),
        }
    }

    fn word(&self, mut i: usize) -> Word {
        let mut gens = Vec::new();
        while let Some((p, g)) = self.parent[i] {
            gens.push(g);
            i = p;
        }
        gens.reverse();
        Word(gens)
    }

    fn depth(&self, i: usize) -> usize {
        self.word(i).len()
    }

    /// Breadth-first expansion until `stop` says so or the group is exhausted.
    /// Every new element is screened for infinite order.
    fn run(&mut self, mut stop: impl FnMut(&Self, usize) -> bool) -> Step {
        let field = self.triple.field().clone();
        while let Some(i) = self.queue.pop_front() {
            if stop(self, i) {
                self.queue.push_front(i);
                return Step::Exhausted;
            }
            for g in Generator::ALL {
                let Some(next) = self.elements[i].mul(&field, self.triple.generator(g)) else {
                    return Step::Overflow;
                };
                if self.index.contains_key(&next) {
                    continue;
                }
                let k = self.elements.len();
                self.parent.push(Some((i, g)));
                if is_infinite_order(&field, &next) {
                    return Step::Found(self.word(k));
                }
                self.index.insert(next.clone(), k);
                self.elements.push(next);
                self.queue.push_back(k);
            }
        }
        Step::Exhausted
    }
}

/// Searches words of length ≤ `max_word_len` (shortest first, generators in
/// the order g0, g1, ginf) for an element of infinite order.
pub fn infinite_order_witness(t: &MonodromyTriple, max_word_len: usize) -> Option<Word> {
    let mut e = Enumeration::new(t);
    match e.run(|e, i| e.depth(i) >= max_word_len) {
        Step::Found(w) => Some(w),
        _ => None,
    }
}

/// Closure with the default word-length bound.
pub fn group_closure(t: &MonodromyTriple, cap: usize) -> FinitenessVerdict {
    group_closure_with(
        t,
        &ClosureOptions {
            cap,
            ..ClosureOptions::default()
        },
    )
}

/// Breadth-first closure of the generated group under exact equality.
///
/// Returns `Finite` with the group order when the closure terminates within
/// `cap` elements, `Infinite` as soon as an element of infinite order turns up,
/// and otherwise falls back to [`infinite_order_witness`] before giving up.
pub fn group_closure_with(t: &MonodromyTriple, opts: &ClosureOptions) -> FinitenessVerdict {
    let mut e = Enumeration::new(t);
    let cap = opts.cap.max(1);
    let inconclusive = |explored: usize, reason: &str| FinitenessVerdict::Inconclusive {
        cap: opts.cap,
        max_word_len: opts.max_word_len,
        explored,
        reason: reason.to_string(),
    };
    match e.run(|e, _| e.elements.len() > cap) {
        Step::Found(word) => FinitenessVerdict::Infinite {
            witness: InfiniteWitness::Word { word },
        },
        Step::Overflow => inconclusive(e.elements.len(), "coefficient overflow"),
        Step::Exhausted if e.queue.is_empty() && e.elements.len() <= cap => {
            FinitenessVerdict::Finite {
                order: Some(e.elements.len() as u64),
            }
        }
        Step::Exhausted => match infinite_order_witness(t, opts.max_word_len) {
            Some(word) => FinitenessVerdict::Infinite {
                witness: InfiniteWitness::Word { word },
            },
            None => inconclusive(e.elements.len(), "closure exceeded cap"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::WeightTuple;
    use crate::monodromy::{levelt_triple, params_from_weights};

    fn triple(n: u32, m: [u32; 4], j: i64) -> MonodromyTriple {
        let w = WeightTuple::new(n, m).unwrap();
        levelt_triple(&params_from_weights(&w, w.character(j)), w.modulus()).unwrap()
    }

    #[test]
    fn order_bound_small_levels() {
        // φ(k) ≤ 2 ⇒ k ∈ {1, 2, 3, 4, 6}
        assert_eq!(possible_root_orders(2), vec![1, 2, 3, 4, 6]);
        assert_eq!(finite_order_bound(2), BigUint::from(12u32));
        // φ(k) ≤ 4 ⇒ k ∈ {1, 2, 3, 4, 5, 6, 8, 10, 12}
        assert_eq!(possible_root_orders(4), vec![1, 2, 3, 4, 5, 6, 8, 10, 12]);
        assert_eq!(finite_order_bound(4), BigUint::from(120u32));
    }

    #[test]
    fn finite_order_test_on_known_matrices() {
        let f = CyclotomicField::new(5);
        let z = |k| f.int_root(k);
        let zero = f.int_zero();
        let one = f.int_one();
        // diag(ζ, ζ²) has order 5
        let d = IntMatrix::from_entries(&f, [z(1), zero.clone(), zero.clone(), z(2)]);
        assert!(has_finite_order(&f, &d));
        // rotation by a sixth root [[0,−1],[1,1]] has order 6
        let r = IntMatrix::from_entries(
            &f,
            [zero.clone(), f.int_neg(&one), one.clone(), one.clone()],
        );
        assert!(has_finite_order(&f, &r));
        // unipotent [[1,1],[0,1]]
        let u = IntMatrix::from_entries(&f, [one.clone(), one.clone(), zero.clone(), one.clone()]);
        assert!(!has_finite_order(&f, &u));
        // hyperbolic [[2,1],[1,1]]
        let two = f.int_add(&one, &one).unwrap();
        let h = IntMatrix::from_entries(&f, [two, one.clone(), one.clone(), one.clone()]);
        assert!(!has_finite_order(&f, &h));
        assert!(is_infinite_order(&f, &h));
        // ζ-scaled unipotent
        let su = IntMatrix::from_entries(&f, [z(3), z(3), zero.clone(), z(3)]);
        assert!(!has_finite_order(&f, &su));
        // −ζ·I has order 10
        assert!(has_finite_order(
            &f,
            &IntMatrix::scalar(&f, f.int_neg(&z(1)))
        ));
    }

    #[test]
    fn finite_order_test_matches_power_check() {
        // every element of the order-5 cyclic group times ±1 passes, and the
        // order divides B(N)
        let f = CyclotomicField::new(10);
        let zero = f.int_zero();
        let g = IntMatrix::from_entries(
            &f,
            [f.int_root(1), zero.clone(), zero.clone(), f.int_root(-3)],
        );
        assert!(has_finite_order(&f, &g));
        let b = finite_order_bound(10);
        assert_eq!(&b % BigUint::from(10u32), BigUint::from(0u32));
    }

    #[test]
    fn trivial_triple_is_finite_of_order_one() {
        for n in [2, 5, 12] {
            let t = MonodromyTriple::trivial(n);
            assert_eq!(
                group_closure(&t, 10),
                FinitenessVerdict::Finite { order: Some(1) }
            );
            assert_eq!(infinite_order_witness(&t, 5), None);
        }
    }

    #[test]
    fn closure_n4_is_finite() {
        let t = triple(4, [1, 1, 1, 1], 1);
        let v = group_closure(&t, 20_000);
        // g0 and g1 are reflections with eigenvalues {1, −1} whose product
        // has eigenvalues ±i: the dihedral group of order 8
        assert_eq!(
            v,
            FinitenessVerdict::Finite {
                order: Some(ORDER_N4)
            }
        );
        assert_eq!(infinite_order_witness(&t, 8), None);
    }

    const ORDER_N4: u64 = 8;

    #[test]
    fn closure_n5_is_infinite() {
        let t = triple(5, [1, 1, 1, 2], 1);
        match group_closure(&t, 20_000) {
            FinitenessVerdict::Infinite {
                witness: InfiniteWitness::Word { word },
            } => {
                assert!(word.len() <= 4, "witness {word}");
                let m = t.evaluate(&word).unwrap();
                assert!(!has_finite_order(t.field(), &m));
            }
            v => panic!("expected infinite, got {v:?}"),
        }
        let w = infinite_order_witness(&t, 4).expect("short witness");
        assert_eq!(w.to_string(), WITNESS_N5);
    }

    const WITNESS_N5: &str = "g0*g0*g1";

    #[test]
    fn generator_of_exact_order_n_has_no_witness() {
        let f = CyclotomicField::new(7);
        let zero = f.int_zero();
        let g = IntMatrix::from_entries(
            &f,
            [f.int_root(1), zero.clone(), zero.clone(), f.int_root(3)],
        );
        let g_inv =
            IntMatrix::from_entries(&f, [f.int_root(-1), zero.clone(), zero, f.int_root(-3)]);
        let t =
            MonodromyTriple::from_generators(f.clone(), g, g_inv, IntMatrix::identity(&f)).unwrap();
        assert_eq!(infinite_order_witness(&t, 12), None);
        assert_eq!(
            group_closure(&t, 100),
            FinitenessVerdict::Finite { order: Some(7) }
        );
    }

    #[test]
    fn small_cap_is_inconclusive_for_finite_groups() {
        let t = triple(4, [1, 1, 1, 1], 1);
        let v = group_closure_with(
            &t,
            &ClosureOptions {
                cap: 3,
                max_word_len: 4,
            },
        );
        assert!(v.is_inconclusive(), "{v:?}");
    }
}
