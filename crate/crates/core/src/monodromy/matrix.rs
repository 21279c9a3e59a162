//! 2×2 matrices over ℤ[ζ_N] (flat, hashable, overflow-checked) and over
//! ℚ(ζ_N).

use std::sync::Arc;

use crate::cyclotomic::{CyclotomicField, CyclotomicNumber};

/// Row-major 2×2 matrix over ℤ[ζ_N]; entry `(r, c)` occupies
/// `data[(2r + c)·φ(N) ..][..φ(N)]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn from_entries(field: &CyclotomicField, entries: [Vec<i64>; 4]) -> Self {
        let d = field.degree();
        let mut data = Vec::with_capacity(4 * d);
        for e in entries {
            assert_eq!(e.len(), d);
            data.extend(e);
        }
        Self { data }
    }

    pub fn identity(field: &CyclotomicField) -> Self {
        Self::scalar(field, field.int_one())
    }

    pub fn scalar(field: &CyclotomicField, x: Vec<i64>) -> Self {
        Self::from_entries(field, [x.clone(), field.int_zero(), field.int_zero(), x])
    }

    fn degree(&self) -> usize {
        self.data.len() / 4
    }

    pub fn entry(&self, r: usize, c: usize) -> &[i64] {
        let d = self.degree();
        &self.data[(2 * r + c) * d..][..d]
    }

    pub fn mul(&self, field: &CyclotomicField, rhs: &Self) -> Option<Self> {
        let mut entries: [Vec<i64>; 4] = Default::default();
        for r in 0..2 {
            for c in 0..2 {
                let a = field.int_mul(self.entry(r, 0), rhs.entry(0, c))?;
                let b = field.int_mul(self.entry(r, 1), rhs.entry(1, c))?;
                entries[2 * r + c] = field.int_add(&a, &b)?;
            }
        }
        Some(Self::from_entries(field, entries))
    }

    pub fn trace(&self, field: &CyclotomicField) -> Option<Vec<i64>> {
        field.int_add(self.entry(0, 0), self.entry(1, 1))
    }

    pub fn det(&self, field: &CyclotomicField) -> Option<Vec<i64>> {
        let a = field.int_mul(self.entry(0, 0), self.entry(1, 1))?;
        let b = field.int_mul(self.entry(0, 1), self.entry(1, 0))?;
        field.int_sub(&a, &b)
    }

    pub fn is_scalar(&self) -> bool {
        self.entry(0, 1).iter().all(|&c| c == 0)
            && self.entry(1, 0).iter().all(|&c| c == 0)
            && self.entry(0, 0) == self.entry(1, 1)
    }

    pub fn is_identity(&self, field: &CyclotomicField) -> bool {
        self.is_scalar() && self.entry(0, 0) == field.int_one().as_slice()
    }

    pub fn to_rational(&self, field: &Arc<CyclotomicField>) -> Matrix {
        Matrix([
            [
                field.int_to_number(self.entry(0, 0)),
                field.int_to_number(self.entry(0, 1)),
            ],
            [
                field.int_to_number(self.entry(1, 0)),
                field.int_to_number(self.entry(1, 1)),
            ],
        ])
    }
}

/// 2×2 matrix over ℚ(ζ_N).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix(pub [[CyclotomicNumber; 2]; 2]);

impl Matrix {
    pub fn identity(field: &Arc<CyclotomicField>) -> Self {
        let o = CyclotomicNumber::one(field);
        let z = CyclotomicNumber::zero(field);
        Matrix([[o.clone(), z.clone()], [z, o]])
    }

    pub fn get(&self, r: usize, c: usize) -> &CyclotomicNumber {
        &self.0[r][c]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let e =
            |r: usize, c: usize| &(&self.0[r][0] * &rhs.0[0][c]) + &(&self.0[r][1] * &rhs.0[1][c]);
        Matrix([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let e = |r: usize, c: usize| &self.0[r][c] - &rhs.0[r][c];
        Matrix([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn scale(&self, s: &CyclotomicNumber) -> Self {
        let e = |r: usize, c: usize| s * &self.0[r][c];
        Matrix([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let e = |r: usize, c: usize| self.0[c][r].conj();
        Matrix([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn det(&self) -> CyclotomicNumber {
        &(&self.0[0][0] * &self.0[1][1]) - &(&self.0[0][1] * &self.0[1][0])
    }

    pub fn trace(&self) -> CyclotomicNumber {
        &self.0[0][0] + &self.0[1][1]
    }

    pub fn apply(&self, v: &[CyclotomicNumber; 2]) -> [CyclotomicNumber; 2] {
        let e = |r: usize| &(&self.0[r][0] * &v[0]) + &(&self.0[r][1] * &v[1]);
        [e(0), e(1)]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(CyclotomicNumber::is_zero)
    }

    pub fn is_scalar(&self) -> bool {
        self.0[0][1].is_zero() && self.0[1][0].is_zero() && self.0[0][0] == self.0[1][1]
    }
}
