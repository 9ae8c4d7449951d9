//! The invariant suite behind `jacpoints verify`.

use std::collections::BTreeSet;
use std::path::Path;

use jacpoints::av_bounds::{lmd_gonality_upper, lmd_lower, pq_upper, CurveProfile};
use jacpoints::curve_oracle::{
    emit_census, empirical_extrema, zeta_consistency, EmpiricalExtrema, OracleError, OracleSpec,
    ZetaPlan, ZetaReport, GENUS2_ORDERS, OPT_IN_ORDER,
};
use jacpoints::extremal::{
    extremal_g1, extremal_g2_max, extremal_g2_min, ExtremalReport, Realizing,
};
use jacpoints::surface_enum::{
    dominance_report, enumerate_admissible, jacobian_obstructions, point_count, table1, table2,
    weil_admissible, SortOrder,
};
use jacpoints::PrimePower;
use num_bigint::BigInt;
use serde::Serialize;

/// Sampled (not exhaustive) zeta check above this order.
const ZETA_EXHAUSTIVE_MAX: u64 = 3;
const ZETA_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name,
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosedForm {
    #[serde(rename = "J", serialize_with = "i128_str")]
    pub max: i128,
    #[serde(rename = "j", serialize_with = "i128_str")]
    pub min: i128,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleSection {
    pub genus1: EmpiricalExtrema,
    pub genus1_closed_form: ClosedForm,
    pub genus2: EmpiricalExtrema,
    pub genus2_closed_form: ClosedForm,
    /// Jacobian orders attained by curves with the maximal number of points.
    #[serde(serialize_with = "i128_vec_str")]
    pub jacobians_at_max_n1: Vec<i128>,
    pub zeta: ZetaReport,
    pub census_rows: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub q: u64,
    pub p: u64,
    pub e: u32,
    pub m: u64,
    pub checks: Vec<Check>,
    pub oracle: Option<OracleSection>,
    pub passed: bool,
}

fn i128_str<S: serde::Serializer>(v: &i128, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn i128_vec_str<S: serde::Serializer>(v: &[i128], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub fn oracle_allowed(q: u64) -> bool {
    GENUS2_ORDERS.contains(&q) || q == OPT_IN_ORDER
}

fn sandwich(pp: &PrimePower) -> Check {
    let (q, m) = (pp.qi() as i128, pp.mi() as i128);
    let (lo, hi) = ((q + 1 - m).pow(2), (q + 1 + m).pow(2));
    let top = (2 * pp.mi(), pp.mi() * pp.mi() + 2 * pp.qi());
    let mut bad = Vec::new();
    for (pair, n) in enumerate_admissible(pp, SortOrder::Asc) {
        let at_edge = (pair.a1, pair.a2) == top || (-pair.a1, pair.a2) == top;
        let ok = lo <= n && n <= hi && ((n == lo || n == hi) == at_edge);
        if !ok {
            bad.push(pair.to_string());
        }
    }
    Check::new(
        "sandwich",
        bad.is_empty(),
        if bad.is_empty() {
            format!(
                "all admissible pairs in [{lo}, {hi}], equality only at (±{}, {})",
                top.0, top.1
            )
        } else {
            format!("violations: {}", bad.join(" "))
        },
    )
}

fn dominance(pp: &PrimePower) -> Check {
    match dominance_report(pp) {
        Ok(r) => {
            let fmt = |v: &[jacpoints::SurfacePair]| {
                v.iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let detail = if r.holds() {
                format!("floor {} / ceiling {}", r.table1_floor, r.table2_ceiling)
            } else {
                format!(
                    "table 1 violations: [{}]; table 2 violations: [{}]",
                    fmt(&r.table1_violations),
                    fmt(&r.table2_violations)
                )
            };
            Check::new("dominance", r.holds(), detail)
        }
        Err(e) => Check::new("dominance", false, e.to_string()),
    }
}

fn tables(pp: &PrimePower) -> Check {
    let mut bad = Vec::new();
    for t in [table1(pp), table2(pp)] {
        match t {
            Ok(t) => {
                for r in &t.rows {
                    let adm = weil_admissible(pp, r.pair.a1, r.pair.a2);
                    if adm != r.admissible
                        || (adm && point_count(pp, r.pair.a1, r.pair.a2) != r.count)
                    {
                        bad.push(r.pair.to_string());
                    }
                }
            }
            Err(e) => bad.push(e.to_string()),
        }
    }
    Check::new("tables", bad.is_empty(), bad.join(" "))
}

fn report_ok(pp: &PrimePower, r: &ExtremalReport) -> Result<(), String> {
    match r.realizing {
        Realizing::Pair(pair) => {
            if !weil_admissible(pp, pair.a1, pair.a2) {
                return Err(format!("{pair} not admissible"));
            }
            if point_count(pp, pair.a1, pair.a2) != r.value {
                return Err(format!("{pair} does not have {} points", r.value));
            }
            let obs = jacobian_obstructions(pp, pair.a1, pair.a2).map_err(|e| e.to_string())?;
            if !obs.is_empty() {
                return Err(format!("{pair} is obstructed: {obs:?}"));
            }
        }
        Realizing::Trace { trace } => {
            // `trace` is a₁ = #E − (q + 1)
            if pp.qi() + 1 + trace != r.value as i64 {
                return Err(format!("trace {trace} does not give {}", r.value));
            }
        }
    }
    Ok(())
}

fn extremal(pp: &PrimePower) -> Check {
    let (g1max, g1min) = extremal_g1(pp);
    let reports = [g1max, g1min, extremal_g2_max(pp), extremal_g2_min(pp)];
    let errs: Vec<String> = reports
        .iter()
        .filter_map(|r| report_ok(pp, r).err())
        .collect();
    Check::new(
        "closed_forms",
        errs.is_empty(),
        if errs.is_empty() {
            format!(
                "J1 = {}, j1 = {}, J2 = {}, j2 = {}",
                reports[0].value, reports[1].value, reports[2].value, reports[3].value
            )
        } else {
            errs.join("; ")
        },
    )
}

fn oracle_checks(
    pp: &PrimePower,
    g1: &EmpiricalExtrema,
    g2: &EmpiricalExtrema,
    zeta: &ZetaReport,
    g1cf: &ClosedForm,
    g2cf: &ClosedForm,
) -> Vec<Check> {
    let mut out = Vec::new();
    out.push(Check::new(
        "oracle_genus2_extrema",
        (g2.max_jac, g2.min_jac) == (g2cf.max, g2cf.min),
        format!(
            "empirical ({}, {}) vs closed form ({}, {}) over {} models",
            g2.max_jac, g2.min_jac, g2cf.max, g2cf.min, g2.accepted
        ),
    ));
    out.push(Check::new(
        "oracle_genus1_extrema",
        (g1.max_jac, g1.min_jac) == (g1cf.max, g1cf.min),
        format!(
            "empirical ({}, {}) vs closed form ({}, {})",
            g1.max_jac, g1.min_jac, g1cf.max, g1cf.min
        ),
    ));
    out.push(Check::new(
        "oracle_zeta",
        zeta.passed(),
        format!(
            "{} models ({}), {} mismatches",
            zeta.checked,
            if zeta.exhaustive { "all" } else { "sampled" },
            zeta.mismatches.len()
        ),
    ));

    let mut obstructed = Vec::new();
    let mut asym = Vec::new();
    for (pair, n) in &g2.pair_counts {
        if !jacobian_obstructions(pp, pair.a1, pair.a2)
            .map(|o| o.is_empty())
            .unwrap_or(false)
        {
            obstructed.push(pair.to_string());
        }
        if pp.p() != 2 && g2.pair_counts.get(&pair.twist()) != Some(n) {
            asym.push(pair.to_string());
        }
    }
    out.push(Check::new(
        "oracle_obstructions",
        obstructed.is_empty(),
        obstructed.join(" "),
    ));
    if pp.p() != 2 {
        out.push(Check::new(
            "oracle_twist_symmetry",
            asym.is_empty(),
            asym.join(" "),
        ));
    }

    let (q, m) = (pp.qi() as i128, pp.mi() as i128);
    let (lo, hi) = ((q + 1 - m).pow(2), (q + 1 + m).pow(2));
    let outside: Vec<String> = g2
        .n1_jac
        .iter()
        .filter(|(_, j)| *j < lo || *j > hi)
        .map(|(n, j)| format!("N1={n}:{j}"))
        .collect();
    out.push(Check::new(
        "oracle_serre_window",
        outside.is_empty(),
        outside.join(" "),
    ));

    let mut violations = Vec::new();
    for &(n1, jac) in &g2.n1_jac {
        let j = BigInt::from(jac);
        let prof = match CurveProfile::new(*pp, 2).and_then(|p| p.with_points(n1)) {
            Ok(p) => p,
            Err(e) => {
                violations.push(format!("N1={n1}: {e}"));
                continue;
            }
        };
        let lower = lmd_lower(&prof);
        let upper = pq_upper(&prof);
        let gon = prof.with_gonality(2).and_then(|p| lmd_gonality_upper(&p));
        match (lower, upper, gon) {
            (Ok(l), Ok(u), Ok(g)) => {
                if !(l <= j && j <= u && j <= g) {
                    violations.push(format!("N1={n1}, jac={jac}: [{l}, {u}], gonality {g}"));
                }
            }
            _ => violations.push(format!("N1={n1}: bound error")),
        }
    }
    out.push(Check::new(
        "oracle_bound_ordering",
        violations.is_empty(),
        if violations.is_empty() {
            format!("{} distinct (N1, jac) pairs within bounds", g2.n1_jac.len())
        } else {
            violations.join("; ")
        },
    ));

    // q + 1 ± m are elliptic counts exactly when e = 1, e is even or p ∤ m
    let q1 = pp.qi() + 1;
    let both =
        g1.n1_counts.contains_key(&(q1 + pp.mi())) && g1.n1_counts.contains_key(&(q1 - pp.mi()));
    let clause = pp.e() == 1 || pp.e() % 2 == 0 || pp.m() % pp.p() != 0;
    out.push(Check::new(
        "oracle_elliptic_traces",
        both == clause,
        format!("traces ±m attained: {both}; expected: {clause}"),
    ));
    out
}

pub fn verify(
    pp: &PrimePower,
    oracle: bool,
    census: Option<&Path>,
) -> Result<VerifyReport, OracleError> {
    let mut checks = vec![sandwich(pp), dominance(pp), tables(pp), extremal(pp)];
    let mut section = None;
    if oracle {
        let spec = OracleSpec::with_opt_in(pp.q())?;
        let g1 = empirical_extrema(&spec, 1)?;
        let g2 = empirical_extrema(&spec, 2)?;
        let plan = if pp.q() <= ZETA_EXHAUSTIVE_MAX {
            ZetaPlan::Exhaustive
        } else {
            ZetaPlan::Sampled {
                accepted: ZETA_SAMPLES,
                seed: pp.q(),
            }
        };
        let zeta = zeta_consistency(&spec, plan)?;
        let (a, b) = extremal_g1(pp);
        let g1cf = ClosedForm {
            max: a.value,
            min: b.value,
        };
        let g2cf = ClosedForm {
            max: extremal_g2_max(pp).value,
            min: extremal_g2_min(pp).value,
        };
        checks.extend(oracle_checks(pp, &g1, &g2, &zeta, &g1cf, &g2cf));
        let at_max: BTreeSet<i128> = g2.jacs_with_n1(g2.max_n1);
        let census_rows = match census {
            Some(path) => {
                let file = std::io::BufWriter::new(std::fs::File::create(path)?);
                Some(emit_census(&spec, 2, file)?)
            }
            None => None,
        };
        section = Some(OracleSection {
            genus1: g1,
            genus1_closed_form: g1cf,
            genus2: g2,
            genus2_closed_form: g2cf,
            jacobians_at_max_n1: at_max.into_iter().collect(),
            zeta,
            census_rows,
        });
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        q: pp.q(),
        p: pp.p(),
        e: pp.e(),
        m: pp.m(),
        checks,
        oracle: section,
        passed,
    })
}
