//! Exact arithmetic in the cyclotomic field ℚ(ζ_N).
//!
//! Elements are coefficient vectors in the power basis `1, ζ, …, ζ^{φ(N)−1}`
//! reduced modulo the N-th cyclotomic polynomial Φ_N, so equality is
//! coefficient-wise. Two coefficient rings share one [`CyclotomicField`]:
//!
//! * [`CyclotomicNumber`]: rational coefficients, a full field (inverses,
//!   linear algebra, signs of real elements);
//! * integral slices `&[i64]`: the ring ℤ[ζ_N], used by the monodromy matrices
//!   and the group closure where speed matters. Integral products report
//!   overflow as `None` instead of wrapping.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::residue::euler_phi;

/// Φ_N as ascending integer coefficients.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1);
    // x^n − 1
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = div_monic(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (i, &di) in den.iter().enumerate() {
            rem[k + i] -= c * di;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact division");
    quot
}

/// The field ℚ(ζ_N) with ζ_N ↦ e^{2πi/N} as distinguished embedding.
pub struct CyclotomicField {
    level: u32,
    degree: usize,
    min_poly: Vec<i64>,
    /// `ζ^k` in the power basis for `k = 0..level`.
    powers: Vec<Vec<i64>>,
    units: Vec<u32>,
    /// `e^{2πik/N}` for `k = 0..level`.
    unit_circle: Vec<Complex64>,
}

impl fmt::Debug for CyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.level)
    }
}

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level
    }
}

impl Eq for CyclotomicField {}

impl CyclotomicField {
    pub fn new(level: u32) -> Arc<Self> {
        assert!(level >= 1, "cyclotomic level must be positive");
        let min_poly = cyclotomic_polynomial(level);
        let degree = min_poly.len() - 1;
        debug_assert_eq!(degree as u64, euler_phi(level as u64));
        let mut powers = Vec::with_capacity(level as usize);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..level {
            powers.push(cur.clone());
            // multiply by x and reduce with x^d = −Σ_{i<d} p_i x^i
            let top = cur[degree - 1];
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1] - top * min_poly[i];
            }
            cur[0] = -top * min_poly[0];
        }
        let units = (1..=level)
            .filter(|&h| h.gcd(&level) == 1)
            .map(|h| h % level)
            .collect();
        let unit_circle = (0..level)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / level as f64;
                Complex64::new(t.cos(), t.sin())
            })
            .collect();
        Arc::new(Self {
            level,
            degree,
            min_poly,
            powers,
            units,
            unit_circle,
        })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// `φ(N)`, the dimension over ℚ.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn min_poly(&self) -> &[i64] {
        &self.min_poly
    }

    /// Exponents `h` of the Galois automorphisms `ζ ↦ ζ^h`, ascending.
    pub fn galois_exponents(&self) -> &[u32] {
        &self.units
    }

    fn power(&self, k: i64) -> &[i64] {
        &self.powers[k.rem_euclid(self.level as i64) as usize]
    }

    // ---- integral elements ------------------------------------------------

    pub fn int_zero(&self) -> Vec<i64> {
        vec![0; self.degree]
    }

    pub fn int_one(&self) -> Vec<i64> {
        self.int_root(0)
    }

    /// `ζ^k`.
    pub fn int_root(&self, k: i64) -> Vec<i64> {
        self.power(k).to_vec()
    }

    pub fn int_add(&self, a: &[i64], b: &[i64]) -> Option<Vec<i64>> {
        a.iter().zip(b).map(|(x, y)| x.checked_add(*y)).collect()
    }

    pub fn int_sub(&self, a: &[i64], b: &[i64]) -> Option<Vec<i64>> {
        a.iter().zip(b).map(|(x, y)| x.checked_sub(*y)).collect()
    }

    pub fn int_neg(&self, a: &[i64]) -> Vec<i64> {
        a.iter().map(|x| -x).collect()
    }

    /// Product in ℤ[ζ_N]; `None` if a coefficient leaves the `i64` range.
    pub fn int_mul(&self, a: &[i64], b: &[i64]) -> Option<Vec<i64>> {
        let d = self.degree;
        let mut prod = vec![0i128; 2 * d - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = prod[i + j].checked_add(x as i128 * y as i128)?;
            }
        }
        let mut out = vec![0i128; d];
        for (k, &c) in prod.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &p) in out.iter_mut().zip(self.power(k as i64)) {
                if p != 0 {
                    *o = o.checked_add(c.checked_mul(p as i128)?)?;
                }
            }
        }
        out.into_iter().map(|c| i64::try_from(c).ok()).collect()
    }

    /// Image under `ζ ↦ ζ^h`.
    pub fn int_galois(&self, a: &[i64], h: i64) -> Option<Vec<i64>> {
        let mut out = vec![0i64; self.degree];
        for (i, &c) in a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &p) in out.iter_mut().zip(self.power(i as i64 * h)) {
                *o = o.checked_add(c.checked_mul(p)?)?;
            }
        }
        Some(out)
    }

    /// Complex conjugate, `ζ ↦ ζ^{−1}`.
    pub fn int_conj(&self, a: &[i64]) -> Option<Vec<i64>> {
        self.int_galois(a, -1)
    }

    /// Value under the embedding `ζ ↦ e^{2πih/N}`.
    pub fn int_embed(&self, a: &[i64], h: i64) -> Complex64 {
        a.iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let k = (i as i64 * h).rem_euclid(self.level as i64) as usize;
                self.unit_circle[k] * c as f64
            })
            .sum()
    }

    pub fn int_to_number(self: &Arc<Self>, a: &[i64]) -> CyclotomicNumber {
        CyclotomicNumber {
            field: Arc::clone(self),
            coeffs: a
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        }
    }
}

/// An element of ℚ(ζ_N) with exact rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct CyclotomicNumber {
    field: Arc<CyclotomicField>,
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, abs) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (i, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{abs}*z")?,
                (_, true) => write!(f, "z^{i}")?,
                (_, false) => write!(f, "{abs}*z^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl CyclotomicNumber {
    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        Self {
            field: Arc::clone(field),
            coeffs: vec![BigRational::zero(); field.degree],
        }
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::root_of_unity(field, 0)
    }

    pub fn from_integer(field: &Arc<CyclotomicField>, v: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(v.into()))
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, v: BigRational) -> Self {
        let mut x = Self::zero(field);
        x.coeffs[0] = v;
        x
    }

    /// `ζ^k`.
    pub fn root_of_unity(field: &Arc<CyclotomicField>, k: i64) -> Self {
        field.int_to_number(field.power(k))
    }

    /// Builds an element from power-basis coefficients, reducing modulo Φ_N
    /// when more than `φ(N)` are given.
    pub fn from_coeffs(field: &Arc<CyclotomicField>, coeffs: Vec<BigRational>) -> Self {
        let mut x = Self::zero(field);
        for (k, c) in coeffs.into_iter().enumerate() {
            x.add_scaled_power(&c, k as i64);
        }
        x
    }

    fn add_scaled_power(&mut self, c: &BigRational, k: i64) {
        if c.is_zero() {
            return;
        }
        for (o, &p) in self.coeffs.iter_mut().zip(self.field.power(k)) {
            if p != 0 {
                *o += c * BigRational::from_integer(p.into());
            }
        }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn level(&self) -> u32 {
        self.field.level
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    /// Image under `ζ ↦ ζ^h`.
    pub fn galois(&self, h: i64) -> Self {
        let mut out = Self::zero(&self.field);
        for (i, c) in self.coeffs.iter().enumerate() {
            out.add_scaled_power(c, i as i64 * h);
        }
        out
    }

    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Fixed by complex conjugation.
    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Field norm down to ℚ.
    pub fn norm(&self) -> BigRational {
        let n = self * &self.conjugate_product();
        n.as_rational()
            .cloned()
            .expect("norm of a cyclotomic number is rational")
    }

    fn conjugate_product(&self) -> Self {
        self.field
            .units
            .iter()
            .filter(|&&h| h != 1 % self.field.level)
            .fold(Self::one(&self.field), |acc, &h| {
                &acc * &self.galois(h as i64)
            })
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let prod = self.conjugate_product();
        let norm = (self * &prod)
            .as_rational()
            .cloned()
            .expect("norm of a cyclotomic number is rational");
        Some(prod.scale(&norm.recip()))
    }

    /// Value under `ζ ↦ e^{2πih/N}` in double precision.
    pub fn embed(&self, h: i64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let k = (i as i64 * h).rem_euclid(self.field.level as i64) as usize;
                self.field.unit_circle[k] * c.to_f64().unwrap_or(f64::NAN)
            })
            .sum()
    }

    /// Sign of the real part in the distinguished embedding `ζ ↦ e^{2πi/N}`.
    ///
    /// Zero is detected exactly. Otherwise the value is bracketed in double
    /// precision and, when that is not conclusive, in fixed-point arithmetic
    /// at doubling precision until the bracket excludes zero.
    pub fn real_sign(&self) -> Ordering {
        let re = self.real_part();
        if re.is_zero() {
            return Ordering::Equal;
        }
        if let Some(s) = re.sign_f64() {
            return s;
        }
        let mut bits = 96;
        loop {
            if let Some(s) = re.sign_fixed(bits) {
                return s;
            }
            bits *= 2;
            assert!(
                bits <= 1 << 20,
                "sign evaluation failed to separate from zero"
            );
        }
    }

    /// `(x + x̄)/2`.
    pub fn real_part(&self) -> Self {
        (self + &self.conj()).scale(&BigRational::new(1.into(), 2.into()))
    }

    fn sign_f64(&self) -> Option<Ordering> {
        let mut value = 0.0;
        let mut magnitude = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cf = c.to_f64()?;
            if !cf.is_finite() {
                return None;
            }
            value += cf * self.field.unit_circle[k].re;
            magnitude += cf.abs();
        }
        let bound = magnitude * 1e-12;
        if value > bound {
            Some(Ordering::Greater)
        } else if value < -bound {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    /// Sign of `Σ c_k cos(2πk/N)` with every cosine known to within `2^{−bits}`.
    fn sign_fixed(&self, bits: u32) -> Option<Ordering> {
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let cosines = fixed::cosines(self.field.level, bits);
        let guard = fixed::GUARD_BITS;
        let mut sum = BigInt::zero();
        let mut err = BigInt::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let a = c.numer() * (&den / c.denom());
            sum += &a * &cosines[k];
            err += a.abs();
        }
        // each cosine is off by at most 2^guard units of 2^{−(bits+guard)}
        let err = err << guard;
        if sum.abs() > err {
            Some(if sum.sign() == Sign::Minus {
                Ordering::Less
            } else {
                Ordering::Greater
            })
        } else {
            None
        }
    }
}

mod fixed {
    //! Fixed-point trigonometry on big integers: values are scaled by
    //! `2^{bits + GUARD_BITS}` with an absolute error below `2^{GUARD_BITS}`
    //! units.

    use num_bigint::BigInt;
    use num_traits::{One, Signed, Zero};

    pub const GUARD_BITS: u32 = 32;

    /// `cos(2πk/N)` for `k = 0..N`.
    pub fn cosines(level: u32, bits: u32) -> Vec<BigInt> {
        let w = bits + 2 * GUARD_BITS;
        let pi = pi(w);
        (0..level)
            .map(|k| {
                // fold the angle into [0, π]
                let k = k.min(level - k);
                let angle = (&pi * BigInt::from(2 * k)) / BigInt::from(level);
                cos(&angle, w) >> GUARD_BITS
            })
            .collect()
    }

    fn atan_inv(x: u32, w: u32) -> BigInt {
        let one = BigInt::one() << w;
        let x2 = BigInt::from(x) * BigInt::from(x);
        let mut term = one / BigInt::from(x);
        let mut sum = BigInt::zero();
        let mut k = 0u32;
        while !term.is_zero() {
            let t = &term / BigInt::from(2 * k + 1);
            if k.is_multiple_of(2) {
                sum += t;
            } else {
                sum -= t;
            }
            term /= &x2;
            k += 1;
        }
        sum
    }

    fn pi(w: u32) -> BigInt {
        (atan_inv(5, w) * 16) - (atan_inv(239, w) * 4)
    }

    /// Taylor series; `angle` in `[0, π]`, scaled by `2^w`.
    fn cos(angle: &BigInt, w: u32) -> BigInt {
        let one = BigInt::one() << w;
        let x2 = (angle * angle) >> w;
        let mut term = one.clone();
        let mut sum = one;
        let mut k = 1u64;
        loop {
            term = -((&term * &x2) >> w) / BigInt::from((2 * k - 1) * (2 * k));
            if term.abs().is_zero() {
                break;
            }
            sum += &term;
            k += 1;
        }
        sum
    }
}

impl Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: Self) -> CyclotomicNumber {
        debug_assert_eq!(self.field.level, rhs.field.level);
        CyclotomicNumber {
            field: Arc::clone(&self.field),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: Self) -> CyclotomicNumber {
        debug_assert_eq!(self.field.level, rhs.field.level);
        CyclotomicNumber {
            field: Arc::clone(&self.field),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: Self) -> CyclotomicNumber {
        debug_assert_eq!(self.field.level, rhs.field.level);
        let d = self.field.degree;
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        CyclotomicNumber::from_coeffs(&self.field, prod)
    }
}
