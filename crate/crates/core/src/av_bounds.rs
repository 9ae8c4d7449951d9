//! Bounds on `#A(F_q)` and `#J_X(F_q)` valid in every dimension.
//!
//! Irrational bounds are rounded outward to integers, so the reported
//! interval always encloses the real one. The two asymptotic helpers are the
//! exception: they return `f64` and are approximate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact_arith::{ceil_b_sqrt, PrimePower, QuadInt};

/// Largest genus accepted by the public interface.
pub const MAX_GENUS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("genus/dimension must be in 1..={MAX_GENUS}, got {0}")]
    Genus(u32),
    #[error("gonality must be at least 1")]
    Gonality,
    #[error("point count {points} violates |N - (q+1)| <= g*m = {limit}")]
    PointsOutOfRange { points: i64, limit: i64 },
    #[error("{0} is required for this bound")]
    Missing(&'static str),
    #[error("q = {0} is not a square")]
    NotSquare(u64),
    #[error("bound is not representable (overflow)")]
    Overflow,
}

/// A curve (or abelian variety) described by what is known about it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveProfile {
    pub pp: PrimePower,
    pub g: u32,
    pub points: Option<i64>,
    pub gonality: Option<u32>,
    pub nmax: Option<i64>,
}

impl CurveProfile {
    pub fn new(pp: PrimePower, g: u32) -> Result<Self, BoundsError> {
        check_genus(g)?;
        Ok(CurveProfile {
            pp,
            g,
            points: None,
            gonality: None,
            nmax: None,
        })
    }

    pub fn with_points(mut self, n: i64) -> Result<Self, BoundsError> {
        self.check_points(n)?;
        self.points = Some(n);
        Ok(self)
    }

    pub fn with_gonality(mut self, d: u32) -> Result<Self, BoundsError> {
        if d == 0 {
            return Err(BoundsError::Gonality);
        }
        self.gonality = Some(d);
        Ok(self)
    }

    /// Records a user-supplied value of the maximal number of points `N_q(g)`.
    pub fn with_nmax(mut self, n: i64) -> Result<Self, BoundsError> {
        self.check_points(n)?;
        self.nmax = Some(n);
        Ok(self)
    }

    fn check_points(&self, n: i64) -> Result<(), BoundsError> {
        let limit = self.g as i64 * self.pp.mi();
        if n < 0 || (n - (self.pp.qi() + 1)).abs() > limit {
            return Err(BoundsError::PointsOutOfRange { points: n, limit });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    Weil,
    SerreRefined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    #[serde(serialize_with = "crate::ser::bigint_str")]
    pub lower: BigInt,
    #[serde(serialize_with = "crate::ser::bigint_str")]
    pub upper: BigInt,
    pub source: BoundSource,
}

fn check_genus(g: u32) -> Result<(), BoundsError> {
    if g == 0 || g > MAX_GENUS {
        return Err(BoundsError::Genus(g));
    }
    Ok(())
}

/// `((q+1−m)^g, (q+1+m)^g)`, both attained only by the types `[−m,…]`/`[m,…]`.
pub fn serre_sandwich(pp: &PrimePower, g: u32) -> Result<BoundsReport, BoundsError> {
    check_genus(g)?;
    let q = pp.qi();
    let m = pp.mi();
    Ok(BoundsReport {
        lower: num_traits::pow(BigInt::from(q + 1 - m), g as usize),
        upper: num_traits::pow(BigInt::from(q + 1 + m), g as usize),
        source: BoundSource::SerreRefined,
    })
}

/// Outward-rounded `((q+1−2√q)^g, (q+1+2√q)^g)`.
pub fn weil_sandwich(pp: &PrimePower, g: u32) -> Result<BoundsReport, BoundsError> {
    check_genus(g)?;
    let q = pp.qi();
    let lower = QuadInt::new(q + 1, -2, q).pow(g).floor();
    let upper = QuadInt::new(q + 1, 2, q).pow(g).ceil();
    Ok(BoundsReport {
        lower,
        upper,
        source: BoundSource::Weil,
    })
}

/// `⌊(q + 1 + (N − (q+1))/g)^g⌋`, exact.
fn mean_trace_power(pp: &PrimePower, g: u32, n: i64) -> BigInt {
    let q1 = pp.qi() + 1;
    let g_ = g as i64;
    let base = BigInt::from(g_ * q1 + n - q1);
    let num = num_traits::pow(base, g as usize);
    let den = num_traits::pow(BigInt::from(g_), g as usize);
    num.div_floor(&den)
}

/// Trace-based upper bound on `#J_X(F_q)` given `N = #X(F_q)`.
pub fn pq_upper(profile: &CurveProfile) -> Result<BigInt, BoundsError> {
    let n = profile
        .points
        .ok_or(BoundsError::Missing("point count N"))?;
    Ok(mean_trace_power(&profile.pp, profile.g, n))
}

/// Same expression as [`pq_upper`] evaluated at `N_q(g)`; bounds the maximal jacobian order.
pub fn prop4_upper(profile: &CurveProfile) -> Result<BigInt, BoundsError> {
    let n = profile.nmax.ok_or(BoundsError::Missing("N_q(g)"))?;
    Ok(mean_trace_power(&profile.pp, profile.g, n))
}

/// Lachaud–Martin-Deschamps lower bound
/// `(√q − 1)² · (q^{g−1} − 1)/g · (N + q − 1)/(q − 1)`, floored exactly.
pub fn lmd_lower(profile: &CurveProfile) -> Result<BigInt, BoundsError> {
    let n = profile
        .points
        .ok_or(BoundsError::Missing("point count N"))?;
    let q = profile.pp.qi();
    let g = profile.g;
    // (q + 1 − 2√q) · c / d with c, d > 0 integers
    let c: BigInt =
        (num_traits::pow(BigInt::from(q), (g - 1) as usize) - 1) * BigInt::from(n + q - 1);
    let d = BigInt::from(g as i64 * (q - 1));
    if c.is_zero() {
        return Ok(BigInt::zero());
    }
    // ⌊(X − Y√q)/d⌋ = ⌊(X − ⌈Y√q⌉)/d⌋ for d > 0
    let x = &c * BigInt::from(q + 1);
    let y = &c * 2;
    let t = ceil_b_sqrt(&y, &BigInt::from(q));
    Ok((x - t).div_floor(&d))
}

/// Gonality upper bound `e (2g√e)^{d−1} q^g`, rounded up after a one-ulp inflation.
pub fn lmd_gonality_upper(profile: &CurveProfile) -> Result<BigInt, BoundsError> {
    let d = profile.gonality.ok_or(BoundsError::Missing("gonality d"))?;
    let e = std::f64::consts::E;
    let g = profile.g as f64;
    let value = e
        * (2.0 * g * e.sqrt()).powi(d as i32 - 1)
        * (profile.pp.q() as f64).powi(profile.g as i32);
    if !value.is_finite() {
        return Err(BoundsError::Overflow);
    }
    BigInt::from_f64(value.next_up().ceil()).ok_or(BoundsError::Overflow)
}

/// `q + 1 + g·m`, the refined upper bound on `#X(F_q)`.
pub fn serre_curve_upper(pp: &PrimePower, g: u32) -> Result<i64, BoundsError> {
    check_genus(g)?;
    Ok(pp.qi() + 1 + g as i64 * pp.mi())
}

/// Approximate window `(q, q + √q)` that contains both asymptotic jacobian parameters.
pub fn asymptotic_window(pp: &PrimePower) -> (f64, f64) {
    let q = pp.q() as f64;
    (q, q + q.sqrt())
}

/// Approximate `q (q/(q−1))^{√q−1}` for square `q`.
pub fn vladut_lower(pp: &PrimePower) -> Result<f64, BoundsError> {
    if !pp.is_square() {
        return Err(BoundsError::NotSquare(pp.q()));
    }
    vladut_formula(pp.q())
}

/// The same expression for any perfect square `q ≥ 4`, prime power or not.
pub fn vladut_formula(q: u64) -> Result<f64, BoundsError> {
    let s = q.isqrt();
    if s * s != q || q < 4 {
        return Err(BoundsError::NotSquare(q));
    }
    let qf = q as f64;
    Ok(qf * ((s as f64 - 1.0) * (1.0 / (qf - 1.0)).ln_1p()).exp())
}
