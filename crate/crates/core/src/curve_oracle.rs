//! Brute-force ground truth: every elliptic and genus-2 model over a small field.
//!
//! A genus-2 model is `y² + h(x)y = f(x)` with `deg h ≤ 3`, `deg f ≤ 6`. Its
//! index is `label(h)·q⁷ + label(f)`, where `label(Σ cᵢxⁱ) = Σ cᵢ·qⁱ` on the
//! coefficient labels; enumeration runs in index order and representatives are
//! always the smallest index. Elliptic models `y² + (a₁x + a₃)y = x³ + a₂x² + a₄x + a₆`
//! use the same scheme with `h = a₁x + a₃` and the three low coefficients of `f`.
//!
//! Work is split into fixed index chunks; per-chunk results are merged in
//! chunk order, so the outcome does not depend on the thread count.

use std::collections::{BTreeMap, BTreeSet};
use std::io;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact_arith::PrimePower;
use crate::finite_field::{Extension, Fe, Field, FieldError};
use crate::surface_enum::{point_count, predict_nk, weil_admissible, SurfacePair};

/// Orders with a default genus-2 sweep.
pub const GENUS2_ORDERS: [u64; 4] = [2, 3, 4, 5];
/// Genus-2 order that is only swept on request (minutes rather than seconds).
pub const OPT_IN_ORDER: u64 = 7;
pub const MAX_GENUS1_ORDER: u64 = 49;
/// Elliptic curves are enumerated over all long Weierstrass models up to this
/// order, and over the normal forms above it.
pub const FULL_WEIERSTRASS_MAX: u64 = 9;

const CHUNK: u64 = 4096;
/// Chunks buffered per parallel round when streaming a census.
const WINDOW: usize = 64;

pub const CENSUS_HEADER: [&str; 8] = ["q", "h", "f", "N1", "N2", "a1", "a2", "jac"];

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("no genus-{genus} oracle for q = {q}")]
    Unsupported { q: u64, genus: u32 },
    #[error("genus must be 1 or 2, got {0}")]
    Genus(u32),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("internal consistency error: {0}")]
    Inconsistent(String),
    #[error("census: {0}")]
    Census(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("EXTREMAL_THREADS must be a positive integer, got {0:?}")]
    Threads(String),
}

impl From<csv::Error> for OracleError {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => OracleError::Io(io),
            other => OracleError::Census(format!("{other:?}")),
        }
    }
}

/// Base field, its quadratic extension, and which sweeps are allowed.
#[derive(Debug)]
pub struct OracleSpec {
    pp: PrimePower,
    base: Field,
    quad: Extension,
    allow_opt_in: bool,
}

impl OracleSpec {
    pub fn new(q: u64) -> Result<Self, OracleError> {
        Self::build(q, false)
    }

    /// Also permits the genus-2 sweep over `F_7`.
    pub fn with_opt_in(q: u64) -> Result<Self, OracleError> {
        Self::build(q, true)
    }

    fn build(q: u64, allow_opt_in: bool) -> Result<Self, OracleError> {
        if q > MAX_GENUS1_ORDER {
            return Err(OracleError::Unsupported { q, genus: 1 });
        }
        let pp =
            PrimePower::new(q).map_err(|_| OracleError::Field(FieldError::NotPrimePower(q)))?;
        let base = Field::canonical(q)?;
        let quad = base.build_quadratic_extension()?;
        Ok(OracleSpec {
            pp,
            base,
            quad,
            allow_opt_in,
        })
    }

    pub fn pp(&self) -> &PrimePower {
        &self.pp
    }

    pub fn q(&self) -> u64 {
        self.pp.q()
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn quadratic(&self) -> &Extension {
        &self.quad
    }

    pub fn supports(&self, genus: u32) -> bool {
        match genus {
            1 => true,
            2 => {
                GENUS2_ORDERS.contains(&self.q()) || (self.allow_opt_in && self.q() == OPT_IN_ORDER)
            }
            _ => false,
        }
    }

    fn check(&self, genus: u32) -> Result<(), OracleError> {
        if genus != 1 && genus != 2 {
            return Err(OracleError::Genus(genus));
        }
        if !self.supports(genus) {
            return Err(OracleError::Unsupported { q: self.q(), genus });
        }
        Ok(())
    }

    fn field(&self, over: Over) -> &Field {
        match over {
            Over::Base => &self.base,
            Over::Quadratic => &self.quad.field,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Over {
    Base,
    Quadratic,
}

fn label(coeffs: &[Fe], q: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, c| acc * q + c.0 as u64)
}

fn digits<const N: usize>(mut x: u64, q: u64) -> [Fe; N] {
    let mut out = [Fe::ZERO; N];
    for slot in out.iter_mut() {
        *slot = Fe((x % q) as u16);
        x /= q;
    }
    out
}

#[inline]
fn horner(field: &Field, coeffs: &[Fe], x: Fe) -> Fe {
    coeffs
        .iter()
        .rev()
        .fold(Fe::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
}

fn degree(a: &[Fe]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

// Fixed-width polynomial scratch space for the smoothness tests.
const W: usize = 13;
type Scratch = [Fe; W];

fn scratch(coeffs: &[Fe]) -> Scratch {
    let mut out = [Fe::ZERO; W];
    out[..coeffs.len()].copy_from_slice(coeffs);
    out
}

fn scratch_mul(field: &Field, a: &[Fe], b: &[Fe]) -> Scratch {
    let mut out = [Fe::ZERO; W];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = field.add(out[i + j], field.mul(x, y));
        }
    }
    out
}

fn scratch_derivative(field: &Field, a: &[Fe]) -> Scratch {
    let mut out = [Fe::ZERO; W];
    for i in 1..a.len() {
        out[i - 1] = field.mul(field.from_int(i as i64), a[i]);
    }
    out
}

/// Whether `gcd(a, b)` is a nonzero constant.
fn coprime(field: &Field, mut a: Scratch, mut b: Scratch) -> bool {
    loop {
        match degree(&b) {
            None => return degree(&a) == Some(0),
            Some(0) => return true,
            Some(db) => {
                let inv = field.inv(b[db]).expect("leading coefficient is nonzero");
                while let Some(da) = degree(&a) {
                    if da < db {
                        break;
                    }
                    let c = field.mul(a[da], inv);
                    for i in 0..=db {
                        a[da - db + i] = field.sub(a[da - db + i], field.mul(c, b[i]));
                    }
                }
                std::mem::swap(&mut a, &mut b);
            }
        }
    }
}

/// `y² + h(x)y = f(x)`, coefficients ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Genus2Model {
    pub h: [Fe; 4],
    pub f: [Fe; 7],
}

impl Genus2Model {
    pub fn new(h: [Fe; 4], f: [Fe; 7]) -> Self {
        Genus2Model { h, f }
    }

    pub fn from_index(q: u64, idx: u64) -> Self {
        let f = digits::<7>(idx % q.pow(7), q);
        let h = digits::<4>(idx / q.pow(7), q);
        Genus2Model { h, f }
    }

    pub fn index(&self, q: u64) -> u64 {
        label(&self.h, q) * q.pow(7) + label(&self.f, q)
    }

    /// Genus-2 degree condition plus nonsingularity on both charts.
    pub fn is_accepted(&self, field: &Field) -> bool {
        let dh = degree(&self.h);
        let df = degree(&self.f);
        if field.characteristic() != 2 {
            return dh.is_none()
                && matches!(df, Some(5) | Some(6))
                && coprime(field, scratch(&self.f), scratch_derivative(field, &self.f));
        }
        let Some(dh) = dh else { return false };
        let top = (2 * dh).max(df.unwrap_or(0));
        if top != 5 && top != 6 {
            return false;
        }
        // affine: a singular point sits over a root of h where f′² + f·h′² vanishes
        let fd = scratch_derivative(field, &self.f);
        let hd = scratch_derivative(field, &self.h);
        let fd2 = scratch_mul(field, &fd[..6], &fd[..6]);
        let hd2 = scratch_mul(field, &hd[..3], &hd[..3]);
        let fhd2 = scratch_mul(field, &self.f, &hd2[..5]);
        let mut g = [Fe::ZERO; W];
        for i in 0..W {
            g[i] = field.add(fd2[i], fhd2[i]);
        }
        if !coprime(field, scratch(&self.h), g) {
            return false;
        }
        // second chart at u = 0: ĥ(0) = h₃, ĥ′(0) = h₂, f̂(0) = f₆, f̂′(0) = f₅
        let (h3, h2, f6, f5) = (self.h[3], self.h[2], self.f[6], self.f[5]);
        let h2sq = field.mul(h2, h2);
        !(h3.is_zero() && field.add(field.mul(f5, f5), field.mul(f6, h2sq)).is_zero())
    }

    fn census_parts(&self) -> (Vec<u16>, Vec<u16>) {
        (
            self.h.iter().map(|c| c.0).collect(),
            self.f.iter().map(|c| c.0).collect(),
        )
    }
}

/// Long Weierstrass coefficients `[a₁, a₂, a₃, a₄, a₆]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EllipticModel {
    pub a: [Fe; 5],
}

impl EllipticModel {
    pub fn new(a1: Fe, a2: Fe, a3: Fe, a4: Fe, a6: Fe) -> Self {
        EllipticModel {
            a: [a1, a2, a3, a4, a6],
        }
    }

    /// `h = a₁x + a₃` and `f = x³ + a₂x² + a₄x + a₆`, ascending.
    pub fn hf(&self) -> ([Fe; 2], [Fe; 4]) {
        let [a1, a2, a3, a4, a6] = self.a;
        ([a3, a1], [a6, a4, a2, Fe::ONE])
    }

    pub fn from_index(q: u64, idx: u64) -> Self {
        let [a6, a4, a2] = digits::<3>(idx % q.pow(3), q);
        let [a3, a1] = digits::<2>(idx / q.pow(3), q);
        EllipticModel::new(a1, a2, a3, a4, a6)
    }

    pub fn index(&self, q: u64) -> u64 {
        let (h, f) = self.hf();
        label(&h, q) * q.pow(3) + label(&f[..3], q)
    }

    pub fn discriminant(&self, field: &Field) -> Fe {
        let [a1, a2, a3, a4, a6] = self.a;
        let k = |n: i64| field.from_int(n);
        let m = |x: Fe, y: Fe| field.mul(x, y);
        let s = |x: Fe, y: Fe| field.add(x, y);
        let b2 = s(m(a1, a1), m(k(4), a2));
        let b4 = s(m(k(2), a4), m(a1, a3));
        let b6 = s(m(a3, a3), m(k(4), a6));
        let b8 = field.sub(
            s(s(m(m(a1, a1), a6), m(m(k(4), a2), a6)), m(m(a2, a3), a3)),
            s(m(m(a1, a3), a4), m(a4, a4)),
        );
        // Δ = −b₂²b₈ − 8b₄³ − 27b₆² + 9b₂b₄b₆
        let t1 = m(m(b2, b2), b8);
        let t2 = m(k(8), m(b4, m(b4, b4)));
        let t3 = m(k(27), m(b6, b6));
        let t4 = m(k(9), m(b2, m(b4, b6)));
        field.sub(t4, s(s(t1, t2), t3))
    }

    pub fn is_nonsingular(&self, field: &Field) -> bool {
        !self.discriminant(field).is_zero()
    }

    /// Search for a rational point where the equation and both partials vanish.
    /// A plane cubic's singular point is unique, hence rational, so this is exact.
    pub fn has_singular_point(&self, field: &Field) -> bool {
        let [a1, a2, a3, a4, _] = self.a;
        let (h, f) = self.hf();
        field.elements().any(|x| {
            let hx = horner(field, &h, x);
            let fx = horner(field, &f, x);
            // ∂/∂x: a₁y − (3x² + 2a₂x + a₄); ∂/∂y: 2y + a₁x + a₃
            let fdx = horner(
                field,
                &[a4, field.mul(field.from_int(2), a2), field.from_int(3)],
                x,
            );
            field.elements().any(|y| {
                let lhs = field.add(field.mul(y, y), field.mul(hx, y));
                let dy = field.add(
                    field.mul(field.from_int(2), y),
                    field.add(field.mul(a1, x), a3),
                );
                let dx = field.sub(field.mul(a1, y), fdx);
                lhs == fx && dy.is_zero() && dx.is_zero()
            })
        })
    }

    fn census_parts(&self) -> (Vec<u16>, Vec<u16>) {
        let (h, f) = self.hf();
        (
            h.iter().map(|c| c.0).collect(),
            f.iter().map(|c| c.0).collect(),
        )
    }
}

/// `#X(field)` for an accepted genus-2 model; coefficients are base labels.
pub fn count_genus2_in(field: &Field, model: &Genus2Model) -> i64 {
    let mut n = field.count_quadratic_solutions(model.h[3], model.f[6]) as i64;
    for x in field.elements() {
        let hx = horner(field, &model.h, x);
        let fx = horner(field, &model.f, x);
        n += field.count_quadratic_solutions(hx, fx) as i64;
    }
    n
}

pub fn count_points_genus2(spec: &OracleSpec, model: &Genus2Model, over: Over) -> i64 {
    count_genus2_in(spec.field(over), model)
}

/// `#E(field)`, including the point at infinity.
pub fn count_elliptic_in(field: &Field, model: &EllipticModel) -> i64 {
    let (h, f) = model.hf();
    1 + field
        .elements()
        .map(|x| field.count_quadratic_solutions(horner(field, &h, x), horner(field, &f, x)) as i64)
        .sum::<i64>()
}

pub fn count_points_elliptic(spec: &OracleSpec, model: &EllipticModel, over: Over) -> i64 {
    count_elliptic_in(spec.field(over), model)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CurveInvariants {
    #[serde(rename = "N1")]
    pub n1: i64,
    #[serde(rename = "N2")]
    pub n2: i64,
    pub a1: i64,
    pub a2: i64,
    #[serde(serialize_with = "crate::ser::i128_str")]
    pub jac: i128,
}

impl CurveInvariants {
    /// Derives `(a₁, a₂, #J)` from `(N₁, N₂)`; any broken invariant is an error.
    pub fn from_counts(pp: &PrimePower, n1: i64, n2: i64) -> Result<Self, OracleError> {
        let q = pp.qi();
        let a1 = n1 - (q + 1);
        let twice = a1 * a1 + n2 - q * q - 1 - 4 * q;
        if twice.rem_euclid(2) != 0 {
            return Err(OracleError::Inconsistent(format!(
                "parity fails for q = {q}, N1 = {n1}, N2 = {n2}"
            )));
        }
        let a2 = 2 * q + twice / 2;
        if !weil_admissible(pp, a1, a2) {
            return Err(OracleError::Inconsistent(format!(
                "q = {q}, N1 = {n1}, N2 = {n2} gives non-admissible ({a1}, {a2})"
            )));
        }
        let jac = point_count(pp, a1, a2);
        let alt = ((n1 as i128) * (n1 as i128) + n2 as i128) / 2 - q as i128;
        if jac != alt {
            return Err(OracleError::Inconsistent(format!(
                "jacobian order formulas disagree at q = {q}: {jac} vs {alt}"
            )));
        }
        Ok(CurveInvariants {
            n1,
            n2,
            a1,
            a2,
            jac,
        })
    }
}

pub fn curve_invariants(
    spec: &OracleSpec,
    model: &Genus2Model,
) -> Result<CurveInvariants, OracleError> {
    let n1 = count_points_genus2(spec, model, Over::Base);
    let n2 = count_points_genus2(spec, model, Over::Quadratic);
    CurveInvariants::from_counts(&spec.pp, n1, n2)
}

/// One accepted model. Elliptic rows leave `a2` empty and report `jac = N1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub q: u64,
    pub h: Vec<u16>,
    pub f: Vec<u16>,
    #[serde(rename = "N1")]
    pub n1: i64,
    #[serde(rename = "N2")]
    pub n2: i64,
    pub a1: i64,
    pub a2: Option<i64>,
    #[serde(serialize_with = "crate::ser::i128_str")]
    pub jac: i128,
}

fn join(labels: &[u16]) -> String {
    labels
        .iter()
        .map(u16::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

impl CensusRow {
    pub fn to_record(&self) -> [String; 8] {
        [
            self.q.to_string(),
            join(&self.h),
            join(&self.f),
            self.n1.to_string(),
            self.n2.to_string(),
            self.a1.to_string(),
            self.a2.map(|v| v.to_string()).unwrap_or_default(),
            self.jac.to_string(),
        ]
    }

    pub fn from_record(rec: &csv::StringRecord) -> Result<Self, OracleError> {
        if rec.len() != CENSUS_HEADER.len() {
            return Err(OracleError::Census(format!(
                "expected 8 fields, got {}",
                rec.len()
            )));
        }
        fn num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, OracleError> {
            s.parse()
                .map_err(|_| OracleError::Census(format!("bad {what}: {s:?}")))
        }
        let labels = |s: &str, what: &str| -> Result<Vec<u16>, OracleError> {
            if s.is_empty() {
                return Ok(Vec::new());
            }
            s.split(';').map(|t| num(t, what)).collect()
        };
        Ok(CensusRow {
            q: num(&rec[0], "q")?,
            h: labels(&rec[1], "h")?,
            f: labels(&rec[2], "f")?,
            n1: num(&rec[3], "N1")?,
            n2: num(&rec[4], "N2")?,
            a1: num(&rec[5], "a1")?,
            a2: if rec[6].is_empty() {
                None
            } else {
                Some(num(&rec[6], "a2")?)
            },
            jac: num(&rec[7], "jac")?,
        })
    }
}

pub fn census_writer<W: io::Write>(sink: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink)
}

pub fn write_census<W: io::Write>(rows: &[CensusRow], sink: W) -> Result<(), OracleError> {
    let mut w = census_writer(sink);
    w.write_record(CENSUS_HEADER)?;
    for row in rows {
        w.write_record(row.to_record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_census<R: io::Read>(src: R) -> Result<Vec<CensusRow>, OracleError> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(src);
    let header = r.headers()?.clone();
    if header.iter().ne(CENSUS_HEADER) {
        return Err(OracleError::Census(format!("unexpected header {header:?}")));
    }
    r.records()
        .map(|rec| CensusRow::from_record(&rec?))
        .collect()
}

/// What an accepted model contributes, before it is rendered as a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Outcome {
    n1: i64,
    n2: i64,
    a1: i64,
    a2: Option<i64>,
    jac: i128,
}

fn evaluate(spec: &OracleSpec, genus: u32, idx: u64) -> Result<Option<Outcome>, OracleError> {
    let q = spec.q();
    if genus == 2 {
        let model = Genus2Model::from_index(q, idx);
        if !model.is_accepted(&spec.base) {
            return Ok(None);
        }
        let inv = curve_invariants(spec, &model)?;
        return Ok(Some(Outcome {
            n1: inv.n1,
            n2: inv.n2,
            a1: inv.a1,
            a2: Some(inv.a2),
            jac: inv.jac,
        }));
    }
    let model = EllipticModel::from_index(q, idx);
    if !model.is_nonsingular(&spec.base) {
        return Ok(None);
    }
    let n1 = count_points_elliptic(spec, &model, Over::Base);
    let qi = q as i64;
    let t = qi + 1 - n1;
    if t.abs() > spec.pp.mi() {
        return Err(OracleError::Inconsistent(format!(
            "elliptic count {n1} over F_{q} breaks the Hasse bound"
        )));
    }
    Ok(Some(Outcome {
        n1,
        // #E(F_{q²}) = q² + 1 − (t² − 2q)
        n2: qi * qi + 1 - (t * t - 2 * qi),
        a1: -t,
        a2: None,
        jac: n1 as i128,
    }))
}

fn row(spec: &OracleSpec, genus: u32, idx: u64, o: &Outcome) -> CensusRow {
    let q = spec.q();
    let (h, f) = if genus == 2 {
        Genus2Model::from_index(q, idx).census_parts()
    } else {
        EllipticModel::from_index(q, idx).census_parts()
    };
    CensusRow {
        q,
        h,
        f,
        n1: o.n1,
        n2: o.n2,
        a1: o.a1,
        a2: o.a2,
        jac: o.jac,
    }
}

/// Candidate indices, split into ordered chunks.
enum Space {
    Range(u64, u64),
    List(Vec<u64>),
}

impl Space {
    fn of(spec: &OracleSpec, genus: u32) -> Space {
        let q = spec.q();
        if genus == 2 {
            return if spec.pp.p() == 2 {
                Space::Range(q.pow(7), q.pow(11))
            } else {
                Space::Range(0, q.pow(7))
            };
        }
        if q <= FULL_WEIERSTRASS_MAX {
            return Space::Range(0, q.pow(5));
        }
        let mut out = Vec::new();
        let q3 = q.pow(3);
        if spec.pp.p() == 2 {
            // y² + xy = x³ + a₂x² + a₆  (h label q)
            for a2 in 0..q {
                for a6 in 0..q {
                    out.push(q * q3 + a2 * q * q + a6);
                }
            }
            // y² + a₃y = x³ + a₄x + a₆  (h label a₃)
            for a3 in 1..q {
                for a4 in 0..q {
                    for a6 in 0..q {
                        out.push(a3 * q3 + a4 * q + a6);
                    }
                }
            }
            out.sort_unstable();
        } else {
            // y² = x³ + a₂x² + a₄x + a₆
            out.extend(0..q3);
        }
        Space::List(out)
    }

    fn len(&self) -> u64 {
        match self {
            Space::Range(a, b) => b - a,
            Space::List(v) => v.len() as u64,
        }
    }

    fn chunks(&self) -> usize {
        self.len().div_ceil(CHUNK) as usize
    }

    fn chunk(&self, i: usize) -> Vec<u64> {
        let lo = i as u64 * CHUNK;
        let hi = (lo + CHUNK).min(self.len());
        match self {
            Space::Range(a, _) => (a + lo..a + hi).collect(),
            Space::List(v) => v[lo as usize..hi as usize].to_vec(),
        }
    }

    fn get(&self, k: u64) -> u64 {
        match self {
            Space::Range(a, _) => a + k,
            Space::List(v) => v[k as usize],
        }
    }
}

/// Thread cap from `EXTREMAL_THREADS`, if set.
pub fn thread_limit() -> Result<Option<usize>, OracleError> {
    match std::env::var("EXTREMAL_THREADS") {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(OracleError::Threads(s)),
        },
    }
}

fn with_pool<T: Send>(op: impl FnOnce() -> T + Send) -> Result<T, OracleError> {
    match thread_limit()? {
        None => Ok(op()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| OracleError::Threads(e.to_string()))?;
            Ok(pool.install(op))
        }
    }
}

fn scan_chunk(
    spec: &OracleSpec,
    genus: u32,
    space: &Space,
    i: usize,
) -> Result<Vec<(u64, Outcome)>, OracleError> {
    let mut out = Vec::new();
    for idx in space.chunk(i) {
        if let Some(o) = evaluate(spec, genus, idx)? {
            out.push((idx, o));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Default)]
struct Acc {
    accepted: u64,
    max_jac: Option<(i128, u64, Outcome)>,
    min_jac: Option<(i128, u64, Outcome)>,
    max_n1: Option<(i128, u64, Outcome)>,
    min_n1: Option<(i128, u64, Outcome)>,
    pairs: BTreeMap<SurfacePair, u64>,
    n1s: BTreeMap<i64, u64>,
    n1_jac: BTreeSet<(i64, i128)>,
}

/// Keep the larger key; ties go to the smaller index.
fn keep_max(slot: &mut Option<(i128, u64, Outcome)>, cand: (i128, u64, Outcome)) {
    let better = match slot {
        None => true,
        Some((k, i, _)) => cand.0 > *k || (cand.0 == *k && cand.1 < *i),
    };
    if better {
        *slot = Some(cand);
    }
}

fn keep_min(slot: &mut Option<(i128, u64, Outcome)>, cand: (i128, u64, Outcome)) {
    let better = match slot {
        None => true,
        Some((k, i, _)) => cand.0 < *k || (cand.0 == *k && cand.1 < *i),
    };
    if better {
        *slot = Some(cand);
    }
}

impl Acc {
    fn push(&mut self, idx: u64, o: Outcome) {
        self.accepted += 1;
        keep_max(&mut self.max_jac, (o.jac, idx, o));
        keep_min(&mut self.min_jac, (o.jac, idx, o));
        keep_max(&mut self.max_n1, (o.n1 as i128, idx, o));
        keep_min(&mut self.min_n1, (o.n1 as i128, idx, o));
        if let Some(a2) = o.a2 {
            *self.pairs.entry(SurfacePair::new(o.a1, a2)).or_default() += 1;
        }
        *self.n1s.entry(o.n1).or_default() += 1;
        self.n1_jac.insert((o.n1, o.jac));
    }

    fn merge(mut self, other: Acc) -> Acc {
        self.accepted += other.accepted;
        if let Some(c) = other.max_jac {
            keep_max(&mut self.max_jac, c);
        }
        if let Some(c) = other.min_jac {
            keep_min(&mut self.min_jac, c);
        }
        if let Some(c) = other.max_n1 {
            keep_max(&mut self.max_n1, c);
        }
        if let Some(c) = other.min_n1 {
            keep_min(&mut self.min_n1, c);
        }
        for (k, v) in other.pairs {
            *self.pairs.entry(k).or_default() += v;
        }
        for (k, v) in other.n1s {
            *self.n1s.entry(k).or_default() += v;
        }
        self.n1_jac.extend(other.n1_jac);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Realizers {
    pub max_jac: CensusRow,
    pub min_jac: CensusRow,
    pub max_n1: CensusRow,
    pub min_n1: CensusRow,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmpiricalExtrema {
    pub q: u64,
    pub genus: u32,
    /// Accepted models (not isomorphism classes).
    pub accepted: u64,
    #[serde(serialize_with = "crate::ser::i128_str")]
    pub max_jac: i128,
    #[serde(serialize_with = "crate::ser::i128_str")]
    pub min_jac: i128,
    pub max_n1: i64,
    pub min_n1: i64,
    pub realizing: Realizers,
    /// Multiplicity of each `(a₁, a₂)` over accepted models (genus 2 only).
    #[serde(skip)]
    pub pair_counts: BTreeMap<SurfacePair, u64>,
    #[serde(skip)]
    pub n1_counts: BTreeMap<i64, u64>,
    #[serde(skip)]
    pub n1_jac: BTreeSet<(i64, i128)>,
}

impl EmpiricalExtrema {
    pub fn jacs_with_n1(&self, n1: i64) -> BTreeSet<i128> {
        self.n1_jac
            .iter()
            .filter(|(n, _)| *n == n1)
            .map(|&(_, j)| j)
            .collect()
    }

    pub fn attained_pairs(&self) -> BTreeSet<SurfacePair> {
        self.pair_counts.keys().copied().collect()
    }
}

pub fn empirical_extrema(spec: &OracleSpec, genus: u32) -> Result<EmpiricalExtrema, OracleError> {
    spec.check(genus)?;
    let space = Space::of(spec, genus);
    let parts: Vec<Result<Acc, OracleError>> = with_pool(|| {
        (0..space.chunks())
            .into_par_iter()
            .map(|i| {
                let mut acc = Acc::default();
                for (idx, o) in scan_chunk(spec, genus, &space, i)? {
                    acc.push(idx, o);
                }
                Ok(acc)
            })
            .collect()
    })?;
    let mut acc = Acc::default();
    for part in parts {
        acc = acc.merge(part?);
    }
    let pick = |slot: &Option<(i128, u64, Outcome)>| -> Result<CensusRow, OracleError> {
        let (_, idx, o) = slot.as_ref().ok_or_else(|| {
            OracleError::Inconsistent(format!("no accepted genus-{genus} models"))
        })?;
        Ok(row(spec, genus, *idx, o))
    };
    let realizing = Realizers {
        max_jac: pick(&acc.max_jac)?,
        min_jac: pick(&acc.min_jac)?,
        max_n1: pick(&acc.max_n1)?,
        min_n1: pick(&acc.min_n1)?,
    };
    Ok(EmpiricalExtrema {
        q: spec.q(),
        genus,
        accepted: acc.accepted,
        max_jac: realizing.max_jac.jac,
        min_jac: realizing.min_jac.jac,
        max_n1: realizing.max_n1.n1,
        min_n1: realizing.min_n1.n1,
        realizing,
        pair_counts: acc.pairs,
        n1_counts: acc.n1s,
        n1_jac: acc.n1_jac,
    })
}

/// Streams every accepted model as a CSV row, in index order. Returns the row count.
pub fn emit_census<W: io::Write>(
    spec: &OracleSpec,
    genus: u32,
    sink: W,
) -> Result<u64, OracleError> {
    spec.check(genus)?;
    let space = Space::of(spec, genus);
    let mut w = census_writer(sink);
    w.write_record(CENSUS_HEADER)?;
    let mut count = 0u64;
    let total = space.chunks();
    let mut start = 0;
    while start < total {
        let end = (start + WINDOW).min(total);
        let batches: Vec<Result<Vec<(u64, Outcome)>, OracleError>> = with_pool(|| {
            (start..end)
                .into_par_iter()
                .map(|i| scan_chunk(spec, genus, &space, i))
                .collect()
        })?;
        for batch in batches {
            for (idx, o) in batch? {
                w.write_record(row(spec, genus, idx, &o).to_record())?;
                count += 1;
            }
        }
        start = end;
    }
    w.flush()?;
    Ok(count)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZetaPlan {
    Exhaustive,
    /// Uniform draws (with replacement) from the model space until this many accepted models were checked.
    Sampled {
        accepted: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZetaMismatch {
    pub h: Vec<u16>,
    pub f: Vec<u16>,
    pub k: u32,
    pub counted: i64,
    #[serde(serialize_with = "crate::ser::i128_str")]
    pub predicted: i128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZetaReport {
    pub q: u64,
    pub exhaustive: bool,
    pub checked: u64,
    pub mismatches: Vec<ZetaMismatch>,
}

impl ZetaReport {
    pub fn passed(&self) -> bool {
        self.checked > 0 && self.mismatches.is_empty()
    }
}

/// Counts `N₃`, `N₄` directly over `F_{q³}`, `F_{q⁴}` and compares with the
/// values predicted from `(a₁, a₂)`.
pub fn zeta_consistency(spec: &OracleSpec, plan: ZetaPlan) -> Result<ZetaReport, OracleError> {
    spec.check(2)?;
    let q = spec.q();
    let f3 = spec.base.extension(3)?.field;
    let f4 = spec.base.extension(4)?.field;
    let space = Space::of(spec, 2);
    let check = |idx: u64| -> Result<Option<Vec<ZetaMismatch>>, OracleError> {
        let model = Genus2Model::from_index(q, idx);
        if !model.is_accepted(&spec.base) {
            return Ok(None);
        }
        let inv = curve_invariants(spec, &model)?;
        let mut bad = Vec::new();
        for (k, field) in [(3u32, &f3), (4, &f4)] {
            let counted = count_genus2_in(field, &model);
            let predicted = predict_nk(&spec.pp, inv.a1, inv.a2, k)
                .map_err(|e| OracleError::Inconsistent(e.to_string()))?;
            if counted as i128 != predicted {
                let (h, f) = model.census_parts();
                bad.push(ZetaMismatch {
                    h,
                    f,
                    k,
                    counted,
                    predicted,
                });
            }
        }
        Ok(Some(bad))
    };
    let (checked, mismatches) = match plan {
        ZetaPlan::Exhaustive => {
            let parts: Vec<Result<(u64, Vec<ZetaMismatch>), OracleError>> = with_pool(|| {
                (0..space.chunks())
                    .into_par_iter()
                    .map(|i| {
                        let mut n = 0;
                        let mut bad = Vec::new();
                        for idx in space.chunk(i) {
                            if let Some(b) = check(idx)? {
                                n += 1;
                                bad.extend(b);
                            }
                        }
                        Ok((n, bad))
                    })
                    .collect()
            })?;
            let mut n = 0;
            let mut bad = Vec::new();
            for part in parts {
                let (c, b) = part?;
                n += c;
                bad.extend(b);
            }
            (n, bad)
        }
        ZetaPlan::Sampled { accepted, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut n = 0u64;
            let mut bad = Vec::new();
            while (n as usize) < accepted {
                let idx = space.get(rng.gen_range(0..space.len()));
                if let Some(b) = check(idx)? {
                    n += 1;
                    bad.extend(b);
                }
            }
            (n, bad)
        }
    };
    Ok(ZetaReport {
        q,
        exhaustive: plan == ZetaPlan::Exhaustive,
        checked,
        mismatches,
    })
}
