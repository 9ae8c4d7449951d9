//! Small finite fields `F_{p^e}` and their extensions, by lookup table.
//!
//! An element of a field built as `K[t]/(μ(t))` over a base `K` of order `Q`
//! is a coefficient vector `c₀ + c₁t + … + c_{k−1}t^{k−1}` and carries the
//! digit label `Σ cᵢ Qⁱ`. Labels of base elements are unchanged in the
//! extension, so embedding is the identity on labels. Label 0 is zero and
//! label 1 is one in every field.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Largest base field the curve oracle works over.
pub const MAX_BASE_ORDER: usize = 49;
/// Largest field of any kind (base or extension).
pub const MAX_FIELD_ORDER: usize = 2401;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("field order {0} outside the supported range (max {1})")]
    TooLarge(usize, usize),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("modulus is not monic irreducible of the stated degree")]
    BadModulus,
    #[error("division by zero")]
    DivisionByZero,
    #[error("no irreducible polynomial of degree {0} found")]
    NoIrreducible(u32),
}

/// An element, identified by its digit label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct Fe(pub u16);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn label(self) -> u16 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `F_{p^e}` as `F_p[t]/(modulus)`; modulus coefficients ascending, monic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn new(p: u32, modulus: Vec<u32>) -> Result<Self, FieldError> {
        if !crate::exact_arith::is_prime(p as u64) {
            return Err(FieldError::NotPrime(p));
        }
        let e = modulus.len().saturating_sub(1) as u32;
        if e == 0 || modulus.last() != Some(&1) || modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::BadModulus);
        }
        let order = (p as usize).checked_pow(e).unwrap_or(usize::MAX);
        if order > MAX_BASE_ORDER {
            return Err(FieldError::TooLarge(order, MAX_BASE_ORDER));
        }
        let prime = Field::prime(p)?;
        let m: Vec<Fe> = modulus.iter().map(|&c| Fe(c as u16)).collect();
        if !is_irreducible(&prime, &m) {
            return Err(FieldError::BadModulus);
        }
        Ok(FieldSpec { p, e, modulus })
    }

    /// The fixed presentation used for `F_q`, `q ≤ 49`.
    ///
    /// Prime fields use the modulus `t`. The orders without a pinned modulus
    /// (only 32) take the smallest irreducible polynomial by digit label.
    pub fn canonical(q: u64) -> Result<Self, FieldError> {
        if q as usize > MAX_BASE_ORDER {
            return Err(FieldError::TooLarge(q as usize, MAX_BASE_ORDER));
        }
        let pp =
            crate::exact_arith::PrimePower::new(q).map_err(|_| FieldError::NotPrimePower(q))?;
        let p = pp.p() as u32;
        let pinned: Option<&[u32]> = match q {
            4 => Some(&[1, 1, 1]),
            8 => Some(&[1, 1, 0, 1]),
            9 => Some(&[1, 0, 1]),
            16 => Some(&[1, 1, 0, 0, 1]),
            25 => Some(&[1, 1, 1]),
            27 => Some(&[1, 2, 0, 1]),
            49 => Some(&[3, 1, 1]),
            _ => None,
        };
        let modulus = match pinned {
            Some(m) => m.to_vec(),
            None if pp.e() == 1 => vec![0, 1],
            None => {
                let prime = Field::prime(p)?;
                smallest_irreducible(&prime, pp.e())?
                    .into_iter()
                    .map(|c| c.0 as u32)
                    .collect()
            }
        };
        FieldSpec::new(p, modulus)
    }

    pub fn order(&self) -> usize {
        (self.p as usize).pow(self.e)
    }
}

/// Field arithmetic by table lookup.
#[derive(Clone)]
pub struct Field {
    order: usize,
    p: u32,
    /// Degree over the prime field.
    abs_degree: u32,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    /// Quadratic character (odd p) or absolute trace to F_2 (p = 2).
    chi: Vec<i8>,
    trace2: Vec<u8>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("order", &self.order)
            .field("p", &self.p)
            .finish()
    }
}

impl Field {
    /// `F_p`.
    pub fn prime(p: u32) -> Result<Field, FieldError> {
        if !crate::exact_arith::is_prime(p as u64) {
            return Err(FieldError::NotPrime(p));
        }
        let n = p as usize;
        if n > MAX_FIELD_ORDER {
            return Err(FieldError::TooLarge(n, MAX_FIELD_ORDER));
        }
        let mut add = vec![0u16; n * n];
        let mut mul = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                add[a * n + b] = ((a + b) % n) as u16;
                mul[a * n + b] = ((a * b) % n) as u16;
            }
        }
        Ok(Field::finish(n, p, 1, add, mul))
    }

    /// Builds the field described by `spec`.
    pub fn from_spec(spec: &FieldSpec) -> Result<Field, FieldError> {
        let prime = Field::prime(spec.p)?;
        if spec.e == 1 {
            return Ok(prime);
        }
        let m: Vec<Fe> = spec.modulus.iter().map(|&c| Fe(c as u16)).collect();
        prime.quotient(&m)
    }

    /// `F_q` for `q ≤ 49`.
    pub fn canonical(q: u64) -> Result<Field, FieldError> {
        Field::from_spec(&FieldSpec::canonical(q)?)
    }

    /// `self[t]/(modulus)`; `modulus` must be monic irreducible of degree ≥ 1.
    pub fn quotient(&self, modulus: &[Fe]) -> Result<Field, FieldError> {
        let k = modulus.len().saturating_sub(1);
        if k == 0 || modulus[k] != Fe::ONE || modulus.iter().any(|c| c.0 as usize >= self.order) {
            return Err(FieldError::BadModulus);
        }
        let n = self.order.checked_pow(k as u32).unwrap_or(usize::MAX);
        if n > MAX_FIELD_ORDER {
            return Err(FieldError::TooLarge(n, MAX_FIELD_ORDER));
        }
        if !is_irreducible(self, modulus) {
            return Err(FieldError::BadModulus);
        }
        let base = self.order;
        let digits = |mut x: usize| -> Vec<Fe> {
            let mut d = vec![Fe::ZERO; k];
            for slot in d.iter_mut() {
                *slot = Fe((x % base) as u16);
                x /= base;
            }
            d
        };
        let encode = |d: &[Fe]| -> u16 {
            d.iter()
                .rev()
                .fold(0usize, |acc, c| acc * base + c.0 as usize) as u16
        };
        let all: Vec<Vec<Fe>> = (0..n).map(digits).collect();
        let mut add = vec![0u16; n * n];
        let mut mul = vec![0u16; n * n];
        let mut prod = vec![Fe::ZERO; 2 * k - 1];
        for a in 0..n {
            for b in 0..n {
                let (da, db) = (&all[a], &all[b]);
                let sum: Vec<Fe> = da.iter().zip(db).map(|(&x, &y)| self.add(x, y)).collect();
                add[a * n + b] = encode(&sum);
                prod.iter_mut().for_each(|c| *c = Fe::ZERO);
                for i in 0..k {
                    if da[i].is_zero() {
                        continue;
                    }
                    for j in 0..k {
                        prod[i + j] = self.add(prod[i + j], self.mul(da[i], db[j]));
                    }
                }
                // reduce by the monic modulus from the top down
                for top in (k..2 * k - 1).rev() {
                    let c = prod[top];
                    if c.is_zero() {
                        continue;
                    }
                    prod[top] = Fe::ZERO;
                    for i in 0..k {
                        prod[top - k + i] = self.sub(prod[top - k + i], self.mul(c, modulus[i]));
                    }
                }
                mul[a * n + b] = encode(&prod[..k]);
            }
        }
        Ok(Field::finish(
            n,
            self.p,
            self.abs_degree * k as u32,
            add,
            mul,
        ))
    }

    fn finish(n: usize, p: u32, abs_degree: u32, add: Vec<u16>, mul: Vec<u16>) -> Field {
        let mut neg = vec![0u16; n];
        let mut inv = vec![0u16; n];
        for a in 0..n {
            for b in 0..n {
                if add[a * n + b] == 0 {
                    neg[a] = b as u16;
                }
                if mul[a * n + b] == 1 {
                    inv[a] = b as u16;
                }
            }
        }
        let mut field = Field {
            order: n,
            p,
            abs_degree,
            add,
            mul,
            neg,
            inv,
            chi: Vec::new(),
            trace2: Vec::new(),
        };
        if p == 2 {
            field.trace2 = (0..n)
                .map(|a| {
                    let mut t = Fe::ZERO;
                    let mut z = Fe(a as u16);
                    for _ in 0..abs_degree {
                        t = field.add(t, z);
                        z = field.mul(z, z);
                    }
                    debug_assert!(t.0 <= 1);
                    t.0 as u8
                })
                .collect();
        } else {
            let mut chi = vec![-1i8; n];
            chi[0] = 0;
            for a in 1..n {
                chi[field.mul(Fe(a as u16), Fe(a as u16)).0 as usize] = 1;
            }
            field.chi = chi;
        }
        field
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.abs_degree
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.add[a.0 as usize * self.order + b.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.mul[a.0 as usize * self.order + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.0 as usize])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Fe(self.inv[a.0 as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, mut exp: u64) -> Fe {
        let mut acc = Fe::ONE;
        let mut base = a;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// The image of the integer `k` under `Z → F`.
    pub fn from_int(&self, k: i64) -> Fe {
        Fe(k.rem_euclid(self.p as i64) as u16)
    }

    /// All elements in label order, zero first.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.order as u16).map(Fe)
    }

    /// Every `y` with `y² = a`.
    pub fn sqrt_set(&self, a: Fe) -> Vec<Fe> {
        self.elements().filter(|&y| self.mul(y, y) == a).collect()
    }

    /// `0` for zero, `1` for a nonzero square, `−1` otherwise. Odd characteristic only.
    #[inline]
    pub fn quadratic_character(&self, a: Fe) -> i8 {
        debug_assert!(self.p != 2);
        self.chi[a.0 as usize]
    }

    /// Absolute trace to `F_2`. Characteristic 2 only.
    #[inline]
    pub fn trace2(&self, a: Fe) -> u8 {
        debug_assert!(self.p == 2);
        self.trace2[a.0 as usize]
    }

    /// Number of `y` with `y² + h·y = f`.
    #[inline]
    pub fn count_quadratic_solutions(&self, h: Fe, f: Fe) -> u32 {
        if self.p == 2 {
            if h.is_zero() {
                // squaring is a bijection
                1
            } else {
                // y = h·z: z² + z = f/h²
                let h2 = self.mul(h, h);
                let c = self.mul(f, Fe(self.inv[h2.0 as usize]));
                if self.trace2(c) == 0 {
                    2
                } else {
                    0
                }
            }
        } else {
            // (2y + h)² = h² + 4f
            let four = self.from_int(4);
            let d = self.add(self.mul(h, h), self.mul(four, f));
            (1 + self.quadratic_character(d) as i32) as u32
        }
    }

    /// Degree-`k` extension by the smallest irreducible monic polynomial
    /// (digit label of `[c₀, …, c_{k−1}]`).
    pub fn extension(&self, degree: u32) -> Result<Extension, FieldError> {
        let modulus = smallest_irreducible(self, degree)?;
        let field = self.quotient(&modulus)?;
        Ok(Extension {
            spec: ExtensionSpec {
                base_order: self.order,
                degree,
                modulus,
            },
            field,
        })
    }

    pub fn build_quadratic_extension(&self) -> Result<Extension, FieldError> {
        self.extension(2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionSpec {
    pub base_order: usize,
    pub degree: u32,
    /// Monic modulus over the base, ascending base labels.
    pub modulus: Vec<Fe>,
}

#[derive(Debug, Clone)]
pub struct Extension {
    pub spec: ExtensionSpec,
    pub field: Field,
}

impl Extension {
    /// Base elements keep their labels in the extension.
    pub fn embed(&self, a: Fe) -> Fe {
        debug_assert!((a.0 as usize) < self.spec.base_order);
        a
    }
}

/// Whether a monic `poly` of degree `k` over `field` has no factor of degree `1..=k/2`.
pub fn is_irreducible(field: &Field, poly: &[Fe]) -> bool {
    let k = poly.len() - 1;
    if k == 0 {
        return false;
    }
    for d in 1..=k / 2 {
        let count = field.order().pow(d as u32);
        for lower in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut x = lower;
            for _ in 0..d {
                divisor.push(Fe((x % field.order()) as u16));
                x /= field.order();
            }
            divisor.push(Fe::ONE);
            if poly::rem(field, poly, &divisor).iter().all(|c| c.is_zero()) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(field: &Field, degree: u32) -> Result<Vec<Fe>, FieldError> {
    let n = field.order();
    let count = n
        .checked_pow(degree)
        .ok_or(FieldError::NoIrreducible(degree))?;
    for lower in 0..count {
        let mut poly = Vec::with_capacity(degree as usize + 1);
        let mut x = lower;
        for _ in 0..degree {
            poly.push(Fe((x % n) as u16));
            x /= n;
        }
        poly.push(Fe::ONE);
        if is_irreducible(field, &poly) {
            return Ok(poly);
        }
    }
    Err(FieldError::NoIrreducible(degree))
}

/// Dense polynomials over a [`Field`], coefficients ascending.
pub mod poly {
    use super::{Fe, Field};

    pub fn trim(mut a: Vec<Fe>) -> Vec<Fe> {
        while a.last().is_some_and(|c| c.is_zero()) {
            a.pop();
        }
        a
    }

    /// `None` for the zero polynomial.
    pub fn degree(a: &[Fe]) -> Option<usize> {
        a.iter().rposition(|c| !c.is_zero())
    }

    pub fn eval(field: &Field, a: &[Fe], x: Fe) -> Fe {
        a.iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
    }

    pub fn derivative(field: &Field, a: &[Fe]) -> Vec<Fe> {
        trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| field.mul(field.from_int(i as i64), c))
                .collect(),
        )
    }

    pub fn add(field: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| {
                    let x = a.get(i).copied().unwrap_or(Fe::ZERO);
                    let y = b.get(i).copied().unwrap_or(Fe::ZERO);
                    field.add(x, y)
                })
                .collect(),
        )
    }

    pub fn mul(field: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Fe::ZERO; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(x, y));
            }
        }
        trim(out)
    }

    /// Remainder of `a` modulo a nonzero `b`.
    pub fn rem(field: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
        let db = degree(b).expect("division by the zero polynomial");
        let lead_inv = field.inv(b[db]).expect("nonzero leading coefficient");
        let mut r = trim(a.to_vec());
        while let Some(dr) = degree(&r) {
            if dr < db {
                break;
            }
            let c = field.mul(r[dr], lead_inv);
            let shift = dr - db;
            for i in 0..=db {
                r[shift + i] = field.sub(r[shift + i], field.mul(c, b[i]));
            }
            r = trim(r);
        }
        r
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(field: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
        let mut x = trim(a.to_vec());
        let mut y = trim(b.to_vec());
        while !y.is_empty() {
            let r = rem(field, &x, &y);
            x = y;
            y = r;
        }
        if let Some(d) = degree(&x) {
            let inv = field.inv(x[d]).expect("nonzero");
            x.iter_mut().for_each(|c| *c = field.mul(*c, inv));
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const CANONICAL: [u64; 18] = [
        2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 32, 49,
    ];

    #[test]
    fn mul_examples() {
        let f4 = Field::canonical(4).unwrap();
        assert_eq!(f4.mul(Fe(2), Fe(2)), Fe(3));
        let f9 = Field::canonical(9).unwrap();
        assert_eq!(f9.mul(Fe(3), Fe(3)), Fe(2));
        for q in CANONICAL {
            let f = Field::canonical(q).unwrap();
            assert_eq!(f.inv(Fe::ONE), Ok(Fe::ONE));
            assert_eq!(f.inv(Fe::ZERO), Err(FieldError::DivisionByZero));
        }
    }

    #[test]
    fn pinned_moduli_are_irreducible() {
        for (q, m) in [
            (4u64, vec![1u32, 1, 1]),
            (8, vec![1, 1, 0, 1]),
            (9, vec![1, 0, 1]),
            (16, vec![1, 1, 0, 0, 1]),
            (25, vec![1, 1, 1]),
            (27, vec![1, 2, 0, 1]),
            (49, vec![3, 1, 1]),
        ] {
            assert_eq!(FieldSpec::canonical(q).unwrap().modulus, m);
        }
        assert_eq!(
            FieldSpec::canonical(32).unwrap().modulus,
            vec![1, 0, 1, 0, 0, 1]
        );
        // t² + 1 is reducible over F_5
        assert_eq!(
            FieldSpec::new(5, vec![1, 0, 1]),
            Err(FieldError::BadModulus)
        );
        assert_eq!(FieldSpec::canonical(12), Err(FieldError::NotPrimePower(12)));
        assert!(matches!(
            FieldSpec::canonical(64),
            Err(FieldError::TooLarge(..))
        ));
    }

    #[test]
    fn field_axioms() {
        for q in CANONICAL {
            let f = Field::canonical(q).unwrap();
            assert_eq!(f.order() as u64, q);
            let elems: Vec<Fe> = f.elements().collect();
            assert_eq!(elems[0], Fe::ZERO);
            let mut prod = Fe::ONE;
            for &a in &elems[1..] {
                assert_eq!(f.pow(a, q - 1), Fe::ONE, "q = {q}");
                assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
                prod = f.mul(prod, a);
            }
            // Wilson: the product of all nonzero elements is −1
            assert_eq!(prod, f.neg(Fe::ONE), "q = {q}");
            for &a in &elems {
                assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
                for &b in &elems {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                }
            }
        }
    }

    #[test]
    fn distributivity_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in CANONICAL {
            let f = Field::canonical(q).unwrap();
            for _ in 0..500 {
                let [a, b, c] = [0; 3].map(|_| Fe(rng.gen_range(0..q as u16)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
            }
        }
    }

    #[test]
    fn sqrt_examples() {
        let f9 = Field::canonical(9).unwrap();
        assert_eq!(f9.sqrt_set(Fe(2)), vec![Fe(3), Fe(6)]);
        let f4 = Field::canonical(4).unwrap();
        assert!(f4.elements().all(|a| f4.sqrt_set(a).len() == 1));
        let f5 = Field::canonical(5).unwrap();
        assert!(f5.sqrt_set(Fe(2)).is_empty());
    }

    #[test]
    fn sqrt_set_sizes_sum_to_order() {
        for q in CANONICAL {
            let f = Field::canonical(q).unwrap();
            let total: usize = f.elements().map(|a| f.sqrt_set(a).len()).sum();
            assert_eq!(total as u64, q);
        }
    }

    #[test]
    fn quadratic_extension_examples() {
        let f2 = Field::canonical(2).unwrap();
        let e = f2.build_quadratic_extension().unwrap();
        assert_eq!(e.spec.modulus, vec![Fe(1), Fe(1), Fe(1)]);
        let f3 = Field::canonical(3).unwrap();
        let e = f3.build_quadratic_extension().unwrap();
        assert_eq!(e.spec.modulus, vec![Fe(1), Fe(0), Fe(1)]);
        assert_eq!(e.embed(Fe::ZERO), Fe::ZERO);
    }

    #[test]
    fn extensions_frobenius_and_embedding() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in [
            2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 32, 49,
        ] {
            let base = Field::canonical(q).unwrap();
            let ext = base.build_quadratic_extension().unwrap();
            let f = &ext.field;
            assert_eq!(f.order() as u64, q * q);
            let fixed = f.elements().filter(|&x| f.pow(x, q) == x).count();
            assert_eq!(fixed as u64, q, "q = {q}");
            // the fixed elements are exactly the embedded base
            assert!(f
                .elements()
                .filter(|&x| f.pow(x, q) == x)
                .all(|x| (x.0 as u64) < q));
            for _ in 0..100 {
                let a = Fe(rng.gen_range(0..q as u16));
                let b = Fe(rng.gen_range(0..q as u16));
                assert_eq!(ext.embed(base.add(a, b)), f.add(ext.embed(a), ext.embed(b)));
                assert_eq!(ext.embed(base.mul(a, b)), f.mul(ext.embed(a), ext.embed(b)));
            }
        }
    }

    #[test]
    fn higher_extensions() {
        for (q, k) in [
            (2u64, 3u32),
            (2, 4),
            (3, 3),
            (3, 4),
            (4, 3),
            (4, 4),
            (5, 3),
            (5, 4),
            (7, 3),
        ] {
            let base = Field::canonical(q).unwrap();
            let ext = base.extension(k).unwrap();
            let f = &ext.field;
            let n = q.pow(k);
            assert_eq!(f.order() as u64, n);
            assert_eq!(f.degree(), base.degree() * k);
            let fixed = f.elements().filter(|&x| f.pow(x, q) == x).count();
            assert_eq!(fixed as u64, q);
            assert!(f.elements().skip(1).all(|x| f.pow(x, n - 1) == Fe::ONE));
        }
        let too_big = Field::canonical(7).unwrap().extension(5);
        assert!(matches!(too_big, Err(FieldError::TooLarge(..))));
    }

    #[test]
    fn trace_and_character() {
        for q in [2u64, 4, 8, 16, 32] {
            let f = Field::canonical(q).unwrap();
            // half the elements have trace zero, and those are exactly z² + z
            let zeros = f.elements().filter(|&a| f.trace2(a) == 0).count();
            assert_eq!(zeros as u64, q / 2);
            for z in f.elements() {
                assert_eq!(f.trace2(f.add(f.mul(z, z), z)), 0);
            }
        }
        for q in [3u64, 5, 7, 9, 25, 27, 49] {
            let f = Field::canonical(q).unwrap();
            for a in f.elements() {
                let roots = f.sqrt_set(a).len() as i32;
                assert_eq!(roots, 1 + f.quadratic_character(a) as i32);
            }
        }
    }

    #[test]
    fn quadratic_solution_count_matches_search() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let f = Field::canonical(q).unwrap();
            for h in f.elements() {
                for c in f.elements() {
                    let brute = f
                        .elements()
                        .filter(|&y| f.add(f.mul(y, y), f.mul(h, y)) == c)
                        .count() as u32;
                    assert_eq!(
                        f.count_quadratic_solutions(h, c),
                        brute,
                        "q={q} h={h} f={c}"
                    );
                }
            }
        }
    }

    #[test]
    fn poly_gcd() {
        let f = Field::canonical(5).unwrap();
        // (x − 1)(x − 2) and (x − 1)(x − 3)
        let a = poly::mul(&f, &[Fe(4), Fe(1)], &[Fe(3), Fe(1)]);
        let b = poly::mul(&f, &[Fe(4), Fe(1)], &[Fe(2), Fe(1)]);
        assert_eq!(poly::gcd(&f, &a, &b), vec![Fe(4), Fe(1)]);
        assert_eq!(poly::gcd(&f, &a, &[]), a);
        assert_eq!(poly::derivative(&f, &a), vec![Fe(2), Fe(2)]);
        assert_eq!(poly::eval(&f, &a, Fe(1)), Fe::ZERO);
    }
}
