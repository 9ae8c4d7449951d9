//! Closed forms for the maximal and minimal orders of jacobians of dimension 1
//! and 2, each reported with the clause that produced it.

use std::cmp::Ordering;

use serde::Serialize;
use thiserror::Error;

use crate::exact_arith::{cmp_frac_2sqrtq, PrimePower, SurdThreshold};
use crate::surface_enum::{table1, table2, RealWeilPoly, SurfacePair, TableRow};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtremalError {
    #[error("q = {0} is an even power; 'special' is defined for odd powers only")]
    NotOddPower(u64),
    #[error("empty range {0}..={1}")]
    EmptyRange(u64, u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SpecialCondition {
    /// `p | m`
    PDividesM,
    /// `q = x² + 1`, i.e. `m² − 4q = −4`
    X2Plus1,
    /// `q = x² + x + 1`, i.e. `m² − 4q = −3`
    X2PlusXPlus1,
    /// `q = x² + x + 2`, i.e. `m² − 4q = −7`
    X2PlusXPlus2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecialVerdict {
    pub special: bool,
    pub conditions: Vec<SpecialCondition>,
    pub disc4: i64,
}

/// Classifies an odd power `q` as special or not.
pub fn is_special(pp: &PrimePower) -> Result<SpecialVerdict, ExtremalError> {
    if pp.is_square() {
        return Err(ExtremalError::NotOddPower(pp.q()));
    }
    let disc4 = pp.mi() * pp.mi() - 4 * pp.qi();
    let mut conditions = Vec::new();
    if pp.m() % pp.p() == 0 {
        conditions.push(SpecialCondition::PDividesM);
    }
    match disc4 {
        -4 => conditions.push(SpecialCondition::X2Plus1),
        -3 => conditions.push(SpecialCondition::X2PlusXPlus1),
        -7 => conditions.push(SpecialCondition::X2PlusXPlus2),
        _ => {}
    }
    Ok(SpecialVerdict {
        special: !conditions.is_empty(),
        conditions,
        disc4,
    })
}

/// All odd prime powers in `[lo, hi]` with their verdicts.
pub fn special_scan(lo: u64, hi: u64) -> Result<Vec<(PrimePower, SpecialVerdict)>, ExtremalError> {
    if lo > hi {
        return Err(ExtremalError::EmptyRange(lo, hi));
    }
    Ok((lo.max(2)..=hi)
        .filter_map(|q| PrimePower::new(q).ok())
        .filter(|pp| !pp.is_square())
        .map(|pp| {
            let v = is_special(&pp).expect("odd power");
            (pp, v)
        })
        .collect())
}

/// Identifies the clause of the closed form that produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Branch {
    /// `e = 1`, `e` even or `p ∤ m`: traces `±m` occur.
    G1FullTrace,
    /// Otherwise: extremal traces are `±(m − 1)`.
    G1ReducedTrace,
    SquareGeneric,
    SquareQ4,
    SquareQ9,
    NotSpecial,
    SpecialGolden,
    /// Maximum `(q + m)²` from type `[m−1, m−1]`.
    SpecialM1M1,
    /// Maximum `(q+1+m)(q−1+m)` for `p = 2`, `p ∤ m`.
    SpecialChar2,
    /// Minimum `(q+2−m)² − 2`.
    SpecialSqrt2,
    /// Minimum `(q+1−m)(q+3−m)`.
    SpecialMM2,
    /// Minimum `(q+2−m)²`.
    Otherwise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Realizing {
    Pair(SurfacePair),
    Trace { trace: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FracClass {
    #[serde(serialize_with = "crate::ser::ordering")]
    pub golden: Ordering,
    #[serde(serialize_with = "crate::ser::ordering")]
    pub sqrt2m1: Ordering,
}

impl FracClass {
    pub fn of(pp: &PrimePower) -> Self {
        FracClass {
            golden: cmp_frac_2sqrtq(pp, SurdThreshold::Golden),
            sqrt2m1: cmp_frac_2sqrtq(pp, SurdThreshold::Sqrt2m1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalReport {
    #[serde(serialize_with = "crate::ser::i128_str")]
    pub value: i128,
    pub branch: Branch,
    pub realizing: Realizing,
    #[serde(rename = "type")]
    pub type_desc: String,
    pub frac_class: FracClass,
}

/// `(J_q(1), j_q(1))`, the extreme orders of elliptic curves.
pub fn extremal_g1(pp: &PrimePower) -> (ExtremalReport, ExtremalReport) {
    let (q, m) = (pp.qi(), pp.mi());
    let frac_class = FracClass::of(pp);
    let full = pp.e() == 1 || pp.is_square() || pp.m() % pp.p() != 0;
    let (branch, top) = if full {
        (Branch::G1FullTrace, m)
    } else {
        (Branch::G1ReducedTrace, m - 1)
    };
    let report = |trace: i64, desc: &str| ExtremalReport {
        value: (q + 1 + trace) as i128,
        branch,
        realizing: Realizing::Trace { trace },
        type_desc: desc.to_string(),
        frac_class,
    };
    if full {
        (report(top, "[m]"), report(-top, "[-m]"))
    } else {
        (report(top, "[m-1]"), report(-top, "[-m+1]"))
    }
}

fn from_row(row: &TableRow, branch: Branch, frac_class: FracClass) -> ExtremalReport {
    ExtremalReport {
        value: row.count,
        branch,
        realizing: Realizing::Pair(row.pair),
        type_desc: row.type_desc.to_string(),
        frac_class,
    }
}

fn from_pair(
    pp: &PrimePower,
    pair: SurfacePair,
    value: i128,
    branch: Branch,
    frac_class: FracClass,
) -> ExtremalReport {
    ExtremalReport {
        value,
        branch,
        realizing: Realizing::Pair(pair),
        type_desc: RealWeilPoly::new(pp, pair.a1, pair.a2).describe(),
        frac_class,
    }
}

/// `J_q(2)`.
pub fn extremal_g2_max(pp: &PrimePower) -> ExtremalReport {
    let rows = table1(pp).expect("m >= 2 for every prime power").rows;
    let fc = FracClass::of(pp);
    if pp.is_square() {
        return match pp.q() {
            4 => from_pair(pp, SurfacePair::new(5, 13), 55, Branch::SquareQ4, fc),
            9 => from_row(&rows[3], Branch::SquareQ9, fc),
            _ => from_row(&rows[0], Branch::SquareGeneric, fc),
        };
    }
    let special = is_special(pp).expect("odd power").special;
    if !special {
        from_row(&rows[0], Branch::NotSpecial, fc)
    } else if fc.golden != Ordering::Less {
        from_row(&rows[2], Branch::SpecialGolden, fc)
    } else if pp.p() != 2 || pp.m() % pp.p() == 0 {
        from_row(&rows[3], Branch::SpecialM1M1, fc)
    } else {
        from_row(&rows[4], Branch::SpecialChar2, fc)
    }
}

/// `j_q(2)`.
pub fn extremal_g2_min(pp: &PrimePower) -> ExtremalReport {
    let rows = table2(pp).expect("m >= 2 for every prime power").rows;
    let fc = FracClass::of(pp);
    if pp.is_square() {
        return match pp.q() {
            4 => from_pair(pp, SurfacePair::new(-5, 13), 5, Branch::SquareQ4, fc),
            9 => from_row(&rows[6], Branch::SquareQ9, fc),
            _ => from_row(&rows[0], Branch::SquareGeneric, fc),
        };
    }
    let special = is_special(pp).expect("odd power").special;
    if !special {
        from_row(&rows[0], Branch::NotSpecial, fc)
    } else if fc.golden != Ordering::Less {
        from_row(&rows[1], Branch::SpecialGolden, fc)
    } else if fc.sqrt2m1 != Ordering::Less {
        from_row(&rows[4], Branch::SpecialSqrt2, fc)
    } else if pp.m() % pp.p() != 0 && pp.q() != 343 {
        from_row(&rows[5], Branch::SpecialMM2, fc)
    } else {
        from_row(&rows[6], Branch::Otherwise, fc)
    }
}
