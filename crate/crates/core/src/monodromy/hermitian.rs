//! Exact linear algebra on a triple: the invariant Hermitian form and the
//! common-eigenvector test for reducibility.

use std::cmp::Ordering;
use std::sync::Arc;

use super::levelt::{Generator, MonodromyTriple};
use super::matrix::Matrix;
use crate::cyclotomic::{CyclotomicField, CyclotomicNumber};
use crate::error::{Error, Result};
use crate::hodge::Signature;
use crate::monodromy::levelt::ExponentKey;
use crate::residue::Modulus;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitianForm {
    pub matrix: Matrix,
    pub signature: Signature,
}

impl HermitianForm {
    /// Whether `ḡᵀ·H·g = H` for the given matrix.
    pub fn is_invariant_under(&self, g: &Matrix) -> bool {
        g.adjoint().mul(&self.matrix).mul(g) == self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.matrix.adjoint() == self.matrix
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
fn row_reduce(rows: &mut [Vec<CyclotomicNumber>]) -> Vec<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        rows[r] = rows[r].iter().map(|x| x * &inv).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                rows[i] = rows[i]
                    .iter()
                    .zip(&rows[r])
                    .map(|(x, y)| x - &(&factor * y))
                    .collect();
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// Basis of the right nullspace of `rows`.
fn nullspace(
    field: &Arc<CyclotomicField>,
    mut rows: Vec<Vec<CyclotomicNumber>>,
    cols: usize,
) -> Vec<Vec<CyclotomicNumber>> {
    let pivots = row_reduce(&mut rows);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![CyclotomicNumber::zero(field); cols];
            v[free] = CyclotomicNumber::one(field);
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&rows[r][free];
            }
            v
        })
        .collect()
}

/// The invariant Hermitian form of an irreducible triple and its signature in
/// the embedding `ζ ↦ e^{2πi/N}`.
///
/// The invariance equations `ḡᵀ·M·g = M` (for `g0` and `g1`; `ginf` follows)
/// are linear in the four entries of `M` and must have a one-dimensional
/// solution space. A solution is then made Hermitian.
///
/// A definite form is only determined up to sign, so the sign is fixed by a
/// convention tied to the local exponents: with `r` spanning the image of
/// `g1 − 1`, `H(r, r) > 0` iff `μ₂ + μ₃ > 1`, where `μ₃ = {a'}` and
/// `μ₂ = {b' − c'}`. Triples without parameters keep the solved sign.
pub fn invariant_hermitian_form(t: &MonodromyTriple) -> Result<HermitianForm> {
    let field = t.field();
    let gens: Vec<Matrix> = [Generator::G0, Generator::G1]
        .iter()
        .map(|&g| t.generator(g).to_rational(field))
        .collect();

    // unknown M_pq at index 2p + q; equation (r, s) of generator g reads
    // Σ_{p,q} conj(g_pr)·g_qs·M_pq − M_rs = 0
    let mut rows = Vec::new();
    for g in &gens {
        for r in 0..2 {
            for s in 0..2 {
                let row = (0..4)
                    .map(|idx| {
                        let (p, q) = (idx / 2, idx % 2);
                        let mut x = &g.get(p, r).conj() * g.get(q, s);
                        if p == r && q == s {
                            x = &x - &CyclotomicNumber::one(field);
                        }
                        x
                    })
                    .collect();
                rows.push(row);
            }
        }
    }
    let basis = nullspace(field, rows, 4);
    if basis.len() != 1 {
        return Err(Error::ReducibleNoUniqueForm {
            dimension: basis.len(),
        });
    }
    let v = &basis[0];
    let m0 = Matrix([[v[0].clone(), v[1].clone()], [v[2].clone(), v[3].clone()]]);

    let mut h = [
        CyclotomicNumber::one(field),
        CyclotomicNumber::root_of_unity(field, 1),
    ]
    .iter()
    .map(|s| {
        let sm = m0.scale(s);
        let adj = sm.adjoint();
        Matrix([
            [sm.get(0, 0) + adj.get(0, 0), sm.get(0, 1) + adj.get(0, 1)],
            [sm.get(1, 0) + adj.get(1, 0), sm.get(1, 1) + adj.get(1, 1)],
        ])
    })
    .find(|m| !m.is_zero())
    .expect("one of M, ζM has a nonzero Hermitian part");

    if let Some(p) = t.params() {
        let key = ExponentKey::new(p, Modulus::new(t.level()).expect("level ≥ 2"));
        if let Some(sign) = reflection_norm_sign(t, &h) {
            let mu2 = (key.b as i64 - key.c as i64).rem_euclid(key.n as i64);
            let want = if key.a as i64 + mu2 > key.n as i64 {
                Ordering::Greater
            } else {
                Ordering::Less
            };
            if sign != want {
                h = h.scale(&CyclotomicNumber::from_integer(field, -1));
            }
        }
    }

    let signature = hermitian_signature(&h)?;
    Ok(HermitianForm {
        matrix: h,
        signature,
    })
}

/// Sign of `r*·H·r` for `r` a nonzero column of `g1 − 1`; `None` if `g1` is
/// the identity or `r` is isotropic.
fn reflection_norm_sign(t: &MonodromyTriple, h: &Matrix) -> Option<Ordering> {
    let field = t.field();
    let d = t.g1.to_rational(field).sub(&Matrix::identity(field));
    let col = (0..2).find(|&c| !d.get(0, c).is_zero() || !d.get(1, c).is_zero())?;
    let r = [d.get(0, col).clone(), d.get(1, col).clone()];
    let hr = h.apply(&r);
    let value = &(&r[0].conj() * &hr[0]) + &(&r[1].conj() * &hr[1]);
    match value.real_sign() {
        Ordering::Equal => None,
        s => Some(s),
    }
}

/// Signature of a 2×2 Hermitian matrix: `det < 0` is indefinite, otherwise the
/// sign of the (real) diagonal decides.
fn hermitian_signature(h: &Matrix) -> Result<Signature> {
    match h.det().real_sign() {
        Ordering::Less => Ok(Signature { p: 1, q: 1 }),
        Ordering::Equal => Err(Error::DegenerateForm),
        Ordering::Greater => {
            let lead = if h.get(0, 0).is_zero() {
                h.get(1, 1)
            } else {
                h.get(0, 0)
            };
            Ok(match lead.real_sign() {
                Ordering::Greater => Signature { p: 2, q: 0 },
                _ => Signature { p: 0, q: 2 },
            })
        }
    }
}

/// Whether all three generators share an eigenvector.
///
/// Eigenvalues of the generators are `±ζ^k`; for each eigenvalue `λ` of a
/// non-scalar generator `A`, the eigenline is spanned by `(β, −α)` for the
/// first nonzero row `[α β]` of `A − λ`, and it is common iff
/// `det[v | B·v] = 0` for every other generator `B`.
pub fn has_common_eigenvector(t: &MonodromyTriple) -> bool {
    let field = t.field();
    let gens: Vec<Matrix> = Generator::ALL
        .iter()
        .map(|&g| t.generator(g).to_rational(field))
        .collect();
    let Some(a) = gens.iter().find(|g| !g.is_scalar()) else {
        return true;
    };
    let n = t.level() as i64;
    let candidates = (0..n).flat_map(|k| {
        let z = CyclotomicNumber::root_of_unity(field, k);
        [-&z, z]
    });
    for lambda in candidates {
        let shifted = a.sub(&Matrix::identity(field).scale(&lambda));
        if !shifted.det().is_zero() {
            continue;
        }
        let row = if shifted.get(0, 0).is_zero() && shifted.get(0, 1).is_zero() {
            1
        } else {
            0
        };
        let v = [shifted.get(row, 1).clone(), -shifted.get(row, 0)];
        let common = gens.iter().all(|b| {
            let bv = b.apply(&v);
            (&(&v[0] * &bv[1]) - &(&v[1] * &bv[0])).is_zero()
        });
        if common {
            return true;
        }
    }
    false
}
