//! Integer utilities and exact comparisons against `√q`.
//!
//! Nothing here ever lets a floating-point value decide an answer. Quantities
//! of the shape `a + b√n` are compared by sign analysis followed by squaring.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

/// Largest field order accepted by [`PrimePower::new`].
///
/// Keeps `a₂ ≤ a₁²/4 + 2q` below `2⁵³` so pairs stay exact in JSON.
pub const MAX_Q: u64 = 1 << 50;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("square root of negative number {0}")]
    NegativeSqrt(i128),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("q = {0} exceeds the supported maximum {MAX_Q}")]
    TooLarge(u64),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

/// `⌊√n⌋` for `n ≥ 0`.
pub fn isqrt(n: i128) -> Result<i128, ArithError> {
    if n < 0 {
        return Err(ArithError::NegativeSqrt(n));
    }
    Ok(n.isqrt())
}

pub fn isqrt_u128(n: u128) -> u128 {
    n.isqrt()
}

pub fn is_square_u128(n: u128) -> bool {
    let r = n.isqrt();
    r * r == n
}

/// Validated `q = p^e` together with `m = ⌊2√q⌋`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PrimePower {
    q: u64,
    p: u64,
    e: u32,
    m: u64,
}

impl PrimePower {
    /// Factors `q` by trial division up to `⌊√q⌋`.
    pub fn new(q: u64) -> Result<Self, ArithError> {
        if q < 2 {
            return Err(ArithError::NotPrimePower(q));
        }
        if q > MAX_Q {
            return Err(ArithError::TooLarge(q));
        }
        let p = smallest_prime_factor(q);
        let mut rest = q;
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(ArithError::NotPrimePower(q));
        }
        let m = isqrt_u128(4 * q as u128) as u64;
        Ok(PrimePower { q, p, e, m })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    /// `⌊2√q⌋`.
    pub fn m(&self) -> u64 {
        self.m
    }

    /// `q` is a perfect square, equivalently `e` is even.
    pub fn is_square(&self) -> bool {
        self.e % 2 == 0
    }

    pub fn qi(&self) -> i64 {
        self.q as i64
    }

    pub fn mi(&self) -> i64 {
        self.m as i64
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 {
            write!(f, "{}", self.q)
        } else {
            write!(f, "{}^{}", self.p, self.e)
        }
    }
}

/// Alias kept for callers that read better with a verb.
pub fn factor_prime_power(q: u64) -> Result<PrimePower, ArithError> {
    PrimePower::new(q)
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && smallest_prime_factor(n) == n
}

/// Fixed quadratic surds the fractional part `{2√q}` is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SurdThreshold {
    /// `(√5 − 1)/2`
    Golden,
    /// `√2 − 1`
    Sqrt2m1,
    /// `√3 − 1`
    Sqrt3m1,
}

impl SurdThreshold {
    pub const ALL: [SurdThreshold; 3] = [
        SurdThreshold::Golden,
        SurdThreshold::Sqrt2m1,
        SurdThreshold::Sqrt3m1,
    ];

    /// `(radicand, offset, denominator)` with threshold `(√radicand − offset) / denominator`.
    pub fn parts(self) -> (i64, i64, i64) {
        match self {
            SurdThreshold::Golden => (5, 1, 2),
            SurdThreshold::Sqrt2m1 => (2, 1, 1),
            SurdThreshold::Sqrt3m1 => (3, 1, 1),
        }
    }

    /// Approximate value, for display only.
    pub fn approx(self) -> f64 {
        let (r, c, d) = self.parts();
        ((r as f64).sqrt() - c as f64) / d as f64
    }
}

/// Exact sign of `a + b√n` for `n ≥ 0`.
pub fn sign_a_plus_b_sqrt(a: &BigInt, b: &BigInt, n: &BigInt) -> Ordering {
    debug_assert!(!n.is_negative());
    let root = n.sqrt();
    if &(&root * &root) == n {
        return (a + b * root).cmp(&BigInt::zero());
    }
    let sa = a.cmp(&BigInt::zero());
    let sb = b.cmp(&BigInt::zero());
    match (sa, sb) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (x, y) if x == y => x,
        // opposite signs: whichever magnitude wins decides
        (sa, _) => {
            let lhs = a * a;
            let rhs = b * b * n;
            match lhs.cmp(&rhs) {
                Ordering::Greater => sa,
                Ordering::Less => sa.reverse(),
                Ordering::Equal => Ordering::Equal,
            }
        }
    }
}

/// Orders `{2√q} = 2√q − m` against `θ`.
pub fn cmp_frac_2sqrtq(pp: &PrimePower, theta: SurdThreshold) -> Ordering {
    if pp.is_square() {
        // {2√q} = 0 and every threshold is positive
        return Ordering::Less;
    }
    let (r, c, d) = theta.parts();
    // d(2√q − m) + c  vs  √r, i.e.  L = (c − dm) + 2d√q  vs  √r
    let a = BigInt::from(c - d * pp.mi());
    let b = BigInt::from(2 * d);
    let q = BigInt::from(pp.q());
    if sign_a_plus_b_sqrt(&a, &b, &q) == Ordering::Less {
        return Ordering::Less;
    }
    // L ≥ 0: compare L² with r
    let a2 = &a * &a + &b * &b * &q - BigInt::from(r);
    let b2 = BigInt::from(2) * &a * &b;
    sign_a_plus_b_sqrt(&a2, &b2, &q)
}

/// `⌊k√q⌋`.
pub fn floor_k_sqrt_q(k: u64, pp: &PrimePower) -> u64 {
    let k = k as u128;
    isqrt_u128(k * k * pp.q() as u128) as u64
}

/// `⌈k√q⌉`.
pub fn ceil_k_sqrt_q(k: u64, pp: &PrimePower) -> u64 {
    let k2q = (k as u128) * (k as u128) * pp.q() as u128;
    let r = isqrt_u128(k2q);
    if r * r == k2q {
        r as u64
    } else {
        r as u64 + 1
    }
}

/// Element `a + b√n` of `Z[√n]`, used for exact powers like `(q + 1 ± 2√q)^g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadInt {
    pub a: BigInt,
    pub b: BigInt,
    pub n: BigInt,
}

impl QuadInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, n: impl Into<BigInt>) -> Self {
        QuadInt {
            a: a.into(),
            b: b.into(),
            n: n.into(),
        }
    }

    pub fn mul(&self, other: &QuadInt) -> QuadInt {
        debug_assert_eq!(self.n, other.n);
        QuadInt {
            a: &self.a * &other.a + &self.b * &other.b * &self.n,
            b: &self.a * &other.b + &self.b * &other.a,
            n: self.n.clone(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> QuadInt {
        let mut acc = QuadInt::new(BigInt::one(), BigInt::zero(), self.n.clone());
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    /// `⌊a + b√n⌋`.
    pub fn floor(&self) -> BigInt {
        let (fl, _) = floor_sqrt_multiple(&self.b, &self.n);
        &self.a + fl
    }

    /// `⌈a + b√n⌉`.
    pub fn ceil(&self) -> BigInt {
        let (fl, exact) = floor_sqrt_multiple(&self.b, &self.n);
        if exact {
            &self.a + fl
        } else {
            &self.a + fl + 1
        }
    }
}

/// `(⌊b√n⌋, b√n is an integer)` for any sign of `b`.
fn floor_sqrt_multiple(b: &BigInt, n: &BigInt) -> (BigInt, bool) {
    let sq = b * b * n;
    let r = sq.sqrt();
    let exact = &r * &r == sq;
    if !b.is_negative() {
        (r, exact)
    } else if exact {
        (-r, true)
    } else {
        (-r - 1, false)
    }
}

/// `⌈b√n⌉` for `b ≥ 0`.
pub fn ceil_b_sqrt(b: &BigInt, n: &BigInt) -> BigInt {
    let (fl, exact) = floor_sqrt_multiple(b, n);
    if exact {
        fl
    } else {
        fl + 1
    }
}
