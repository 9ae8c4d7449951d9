//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary (no libtest harness) so the lines always appear in
//! `cargo test` output. The process fails if the set of failing criteria differs
//! from `EXPECTED_RED`: those are criteria shown to be false as stated (see the
//! README, "Known deviations"), and they are still evaluated verbatim.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use jacpoints::av_bounds::{vladut_formula, vladut_lower};
use jacpoints::extremal::{extremal_g2_max, extremal_g2_min};
use jacpoints::surface_enum::{a2_range, point_count, verify_dominance};
use jacpoints::PrimePower;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const EXPECTED_RED: [u32; 3] = [3, 4, 5];

/// Hand-derived J_q(2) (exact surd comparisons, independent script).
const J2_VECTOR: [(u64, i128); 14] = [
    (2, 19),
    (3, 36),
    (5, 81),
    (7, 144),
    (8, 181),
    (11, 324),
    (13, 400),
    (16, 625),
    (17, 625),
    (25, 1296),
    (27, 1444),
    (31, 1764),
    (32, 1848),
    (343, 144400),
];

/// Hand-derived j_q(2) for the same q.
const J2_MIN_VECTOR: [i128; 14] = [1, 2, 7, 15, 19, 36, 63, 81, 120, 256, 324, 483, 528, 94864];

struct Outcome {
    passed: bool,
    detail: String,
    elapsed: Duration,
    limit: Duration,
}

fn cli(args: &[&str], threads: Option<&str>) -> (Option<i32>, Value) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_jacpoints"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("EXTREMAL_THREADS", t),
        None => cmd.env_remove("EXTREMAL_THREADS"),
    };
    let out = cmd.output().expect("binary runs");
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code(), v)
}

fn big(v: &Value) -> Option<i128> {
    v.as_str()?.parse().ok()
}

fn timed(limit_secs: u64, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (passed, detail) = f();
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(limit_secs);
    Outcome {
        passed: passed && elapsed <= limit,
        detail,
        elapsed,
        limit,
    }
}

fn c1() -> Outcome {
    timed(1, || {
        let mut got = Vec::new();
        for q in ["4", "9"] {
            let (_, v) = cli(&["extremal", "--q", q, "--g", "2"], None);
            got.push((big(&v["J"]), big(&v["j"])));
        }
        let want = vec![(Some(55), Some(5)), (Some(225), Some(25))];
        (got == want, format!("(J, j) at q=4, 9: {got:?}"))
    })
}

fn c2() -> Outcome {
    timed(1, || {
        let mut bad = Vec::new();
        for (&(q, want), &want_min) in J2_VECTOR.iter().zip(&J2_MIN_VECTOR) {
            let pp = PrimePower::new(q).unwrap();
            let (hi, lo) = (extremal_g2_max(&pp).value, extremal_g2_min(&pp).value);
            if hi != want || lo != want_min {
                bad.push(format!("q={q}: ({hi}, {lo}) vs ({want}, {want_min})"));
            }
        }
        (
            bad.is_empty(),
            if bad.is_empty() {
                "14 values of J_q(2) (and j_q(2)) match the hand derivation; J_31(2) = 1764".into()
            } else {
                bad.join("; ")
            },
        )
    })
}

/// `verify --oracle` reports for q = 2..5, computed single-threaded.
fn oracle_reports() -> (Vec<(u64, Value)>, Duration) {
    let start = Instant::now();
    let reports = [2u64, 3, 4, 5]
        .iter()
        .map(|&q| {
            (
                q,
                cli(&["verify", "--q", &q.to_string(), "--oracle"], Some("1")).1,
            )
        })
        .collect();
    (reports, start.elapsed())
}

fn check_passed(report: &Value, name: &str) -> bool {
    report["checks"]
        .as_array()
        .map(|cs| cs.iter().any(|c| c["name"] == name && c["passed"] == true))
        .unwrap_or(false)
}

fn c3(reports: &[(u64, Value)], elapsed: Duration) -> Outcome {
    let mut notes = Vec::new();
    let mut extrema_ok = true;
    let mut ok = true;
    for (q, r) in reports {
        let o = &r["oracle"];
        let g2 = (big(&o["genus2"]["max_jac"]), big(&o["genus2"]["min_jac"]));
        let g2cf = (
            big(&o["genus2_closed_form"]["J"]),
            big(&o["genus2_closed_form"]["j"]),
        );
        let g1 = (big(&o["genus1"]["max_jac"]), big(&o["genus1"]["min_jac"]));
        let g1cf = (
            big(&o["genus1_closed_form"]["J"]),
            big(&o["genus1_closed_form"]["j"]),
        );
        if g2.0.is_none() || g2 != g2cf || g1 != g1cf {
            extrema_ok = false;
            ok = false;
            notes.push(format!(
                "q={q}: genus 2 {g2:?} vs {g2cf:?}, genus 1 {g1:?} vs {g1cf:?}"
            ));
        }
        if *q == 3 {
            let at8: Vec<i128> = o["jacobians_at_max_n1"]
                .as_array()
                .map(|a| a.iter().filter_map(big).collect())
                .unwrap_or_default();
            let missing: Vec<i128> = [33, 34, 35, 36]
                .into_iter()
                .filter(|j| !at8.contains(j))
                .collect();
            if !missing.is_empty() || o["genus2"]["max_n1"] != 8 {
                ok = false;
            }
            notes.push(format!(
                "q=3, N1=8 jacobian orders {at8:?}, missing {missing:?}"
            ));
        }
    }
    notes.insert(
        0,
        if extrema_ok {
            "genus-1 and genus-2 extrema equal the closed forms for q=2..5".into()
        } else {
            "extrema disagree with the closed forms".into()
        },
    );
    let limit = Duration::from_secs(300);
    Outcome {
        passed: ok && elapsed <= limit,
        detail: notes.join("; "),
        elapsed,
        limit,
    }
}

fn c4() -> Outcome {
    timed(10, || {
        let mut failing = Vec::new();
        let mut n = 0;
        for q in 2..=49u64 {
            let Ok(pp) = PrimePower::new(q) else { continue };
            if pp.m() < 2 {
                continue;
            }
            n += 1;
            if !verify_dominance(&pp).unwrap_or(false) {
                failing.push(q);
            }
        }
        (
            failing.is_empty(),
            format!("{n} prime powers checked; dominance fails at q = {failing:?}"),
        )
    })
}

fn c5() -> Outcome {
    timed(5, || {
        let pps: Vec<PrimePower> = (2..=49).filter_map(|q| PrimePower::new(q).ok()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let (mut ineq, mut eq) = (0u32, 0u32);
        let mut examples = Vec::new();
        let mut drawn = 0;
        while drawn < 100_000 {
            let pp = &pps[rng.gen_range(0..pps.len())];
            let m = pp.mi();
            let a1 = rng.gen_range(-2 * m..=2 * m);
            let Some((lo, hi)) = a2_range(pp, a1) else {
                continue;
            };
            let a2 = rng.gen_range(lo..=hi);
            drawn += 1;
            let n = point_count(pp, a1, a2);
            let (q, mm) = (pp.qi() as i128, m as i128);
            let (bl, bh) = ((q + 1 - mm).pow(2), (q + 1 + mm).pow(2));
            let edge = a1.abs() == 2 * m && a2 == m * m + 2 * pp.qi();
            if n < bl || n > bh {
                ineq += 1;
            } else if (n == bl || n == bh) != edge {
                eq += 1;
                if examples.len() < 3 {
                    examples.push(format!("q={} ({a1}, {a2})", pp.q()));
                }
            }
        }
        (
            ineq == 0 && eq == 0,
            format!("100000 pairs: {ineq} outside the sandwich, {eq} equality cases off (±2m, m²+2q), e.g. {examples:?}"),
        )
    })
}

fn c6(reports: &[(u64, Value)], elapsed: Duration) -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (q, r) in reports {
        let z = &r["oracle"]["zeta"];
        let checked = z["checked"].as_u64().unwrap_or(0);
        let exhaustive = z["exhaustive"] == true;
        let mismatches = z["mismatches"]
            .as_array()
            .map(Vec::len)
            .unwrap_or(usize::MAX);
        let enough = if *q <= 3 {
            exhaustive
        } else {
            checked >= 10_000
        };
        ok &= enough && mismatches == 0 && checked > 0;
        notes.push(format!(
            "q={q}: {checked} {} models, {mismatches} mismatches",
            if exhaustive { "(all)" } else { "sampled" }
        ));
    }
    let limit = Duration::from_secs(600);
    Outcome {
        passed: ok && elapsed <= limit,
        detail: notes.join("; "),
        elapsed,
        limit,
    }
}

fn c7(reports: &[(u64, Value)], elapsed: Duration) -> Outcome {
    let failing: Vec<u64> = reports
        .iter()
        .filter(|(_, r)| !check_passed(r, "oracle_bound_ordering"))
        .map(|(q, _)| *q)
        .collect();
    Outcome {
        passed: failing.is_empty(),
        detail: format!(
            "lmd_lower <= jac <= pq_upper and jac <= gonality bound (d=2); failing q: {failing:?}"
        ),
        elapsed,
        limit: Duration::MAX,
    }
}

fn c8() -> Outcome {
    timed(1, || {
        let mut bad = Vec::new();
        let mut n = 0;
        for s in 2u64..=100 {
            let q = s * s;
            let v = match PrimePower::new(q) {
                Ok(pp) => vladut_lower(&pp),
                Err(_) => vladut_formula(q),
            }
            .unwrap();
            n += 1;
            if !(q as f64 <= v && v <= (q + s) as f64) {
                bad.push(q);
            }
        }
        let big = vladut_formula(1_000_000).unwrap();
        let target = 1_000_000.0 + 1_000.0;
        let ok_big = (target - 0.51..=target - 0.49).contains(&big);
        (
            bad.is_empty() && ok_big,
            format!("{n} squares in [q, q+√q] (failing {bad:?}); value at 10^6 = {big:.9}"),
        )
    })
}

fn main() -> ExitCode {
    let (reports, oracle_time) = oracle_reports();
    let results = [
        (1, "reference constants (55, 5), (225, 25)", c1()),
        (2, "closed-form J_q(2) vector", c2()),
        (3, "oracle agreement q = 2..5", c3(&reports, oracle_time)),
        (4, "dominance for every prime power q <= 49", c4()),
        (5, "sandwich on 10^5 sampled pairs", c5()),
        (6, "zeta consistency N3, N4", c6(&reports, oracle_time)),
        (
            7,
            "bound ordering on oracle curves",
            c7(&reports, oracle_time),
        ),
        (8, "asymptotic window", c8()),
    ];
    let mut red = Vec::new();
    for (id, title, o) in &results {
        let limit = if o.limit == Duration::MAX {
            String::new()
        } else {
            format!(" / limit {:.0?}", o.limit)
        };
        println!(
            "ACCEPTANCE {id} {} — {title}: {} [{:.2?}{limit}]",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail,
            o.elapsed
        );
        if !o.passed {
            red.push(*id);
        }
    }
    println!("failing criteria: {red:?}; documented as unattainable: {EXPECTED_RED:?}");
    if red == EXPECTED_RED {
        ExitCode::SUCCESS
    } else {
        println!("acceptance outcome differs from the documented state");
        ExitCode::FAILURE
    }
}
