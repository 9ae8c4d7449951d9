//! `jacpoints`: extremal point counts of jacobians and abelian surfaces over `F_q`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or domain error.

mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use jacpoints::av_bounds::{
    asymptotic_window, lmd_gonality_upper, lmd_lower, pq_upper, prop4_upper, serre_curve_upper,
    serre_sandwich, vladut_lower, weil_sandwich, CurveProfile,
};
use jacpoints::extremal::{
    extremal_g1, extremal_g2_max, extremal_g2_min, is_special, special_scan, ExtremalReport,
};
use jacpoints::surface_enum::{
    dominance_report, enumerate_admissible, realizable_surface, table1, table2, Realizability,
    SortOrder,
};
use jacpoints::PrimePower;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "jacpoints",
    version,
    about = "Extremal point counts of jacobians over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Markdown,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Order {
    Asc,
    Desc,
}

#[derive(Subcommand)]
enum Command {
    /// Maximal and minimal jacobian orders J_q(g), j_q(g)
    Extremal {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=2))]
        g: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Weil-admissible pairs (a1, a2) with their point counts
    Enumerate {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Order::Desc)]
        order: Order,
        #[arg(long)]
        limit: Option<usize>,
        /// Add the realizability column (yes / no / unknown)
        #[arg(long)]
        realizable: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Both ranked tables and the dominance verdict
    Tables {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Every applicable bound on #J(F_q) and #X(F_q)
    Bounds {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        g: u32,
        #[arg(long)]
        points: Option<i64>,
        #[arg(long)]
        gonality: Option<u32>,
        #[arg(long)]
        nmax: Option<i64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Special-q verdicts for odd prime powers in lo:hi
    Special {
        #[arg(long)]
        range: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run the invariant suite for q; exits 1 on any failed check
    Verify {
        #[arg(long)]
        q: u64,
        /// Also enumerate curves (q in {2, 3, 4, 5, 7})
        #[arg(long)]
        oracle: bool,
        /// Write the genus-2 census CSV here
        #[arg(long, requires = "oracle")]
        census: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn prime_power(q: u64) -> Result<PrimePower, Failure> {
    PrimePower::new(q).map_err(|e| usage(format!("q = {q}: {e}")))
}

fn unsupported(format: Format, command: &str) -> Failure {
    let name = match format {
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Markdown => "markdown",
    };
    usage(format!("{command} does not support --format {name}"))
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn header(pp: &PrimePower) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("q".into(), json!(pp.q()));
    m.insert("p".into(), json!(pp.p()));
    m.insert("e".into(), json!(pp.e()));
    m.insert("m".into(), json!(pp.m()));
    m
}

fn report_markdown(label: &str, r: &ExtremalReport) -> String {
    let realizing = serde_json::to_string(&r.realizing).expect("serializable");
    let branch = serde_json::to_value(r.branch).expect("serializable");
    format!(
        "| {label} | {} | {} | {} | {} |\n",
        r.value,
        branch.as_str().unwrap_or_default(),
        r.type_desc,
        realizing
    )
}

fn cmd_extremal(q: u64, g: u32, format: Format) -> Result<String, Failure> {
    let pp = prime_power(q)?;
    let (hi, lo) = if g == 1 {
        extremal_g1(&pp)
    } else {
        (extremal_g2_max(&pp), extremal_g2_min(&pp))
    };
    let special = is_special(&pp).ok();
    match format {
        Format::Json => {
            let mut m = header(&pp);
            m.insert("g".into(), json!(g));
            m.insert(
                "special".into(),
                serde_json::to_value(&special).expect("serializable"),
            );
            m.insert("J".into(), json!(hi.value.to_string()));
            m.insert("j".into(), json!(lo.value.to_string()));
            m.insert("branches".into(), json!({ "J": hi.branch, "j": lo.branch }));
            m.insert("realizing".into(), json!({ "J": hi, "j": lo }));
            Ok(to_json(&m))
        }
        Format::Markdown => {
            let mut s = format!(
                "### Extremal jacobian orders, g = {g}, q = {q} (m = {})\n\n",
                pp.m()
            );
            if let Some(v) = &special {
                s.push_str(&format!("special: {} {:?}\n\n", v.special, v.conditions));
            }
            s.push_str("| | value | branch | type | realizing |\n|---|---:|---|---|---|\n");
            s.push_str(&report_markdown("J", &hi));
            s.push_str(&report_markdown("j", &lo));
            Ok(s)
        }
        Format::Csv => Err(unsupported(format, "extremal")),
    }
}

fn realizability_str(r: Realizability) -> &'static str {
    match r {
        Realizability::Yes => "yes",
        Realizability::No => "no",
        Realizability::Unknown => "unknown",
    }
}

fn cmd_enumerate(
    q: u64,
    order: Order,
    limit: Option<usize>,
    realizable: bool,
    format: Format,
) -> Result<String, Failure> {
    let pp = prime_power(q)?;
    let order = match order {
        Order::Asc => SortOrder::Asc,
        Order::Desc => SortOrder::Desc,
    };
    let mut rows = enumerate_admissible(&pp, order);
    let total = rows.len();
    if let Some(k) = limit {
        rows.truncate(k);
    }
    let real = |a1, a2| realizability_str(realizable_surface(&pp, a1, a2));
    match format {
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|(pair, n)| {
                    let mut v = json!({ "a1": pair.a1, "a2": pair.a2, "count": n.to_string() });
                    if realizable {
                        v["realizable"] = json!(real(pair.a1, pair.a2));
                    }
                    v
                })
                .collect();
            let mut m = header(&pp);
            m.insert(
                "order".into(),
                json!(if order == SortOrder::Asc {
                    "asc"
                } else {
                    "desc"
                }),
            );
            m.insert("total".into(), json!(total));
            m.insert("rows".into(), Value::Array(items));
            Ok(to_json(&m))
        }
        Format::Csv => {
            let mut s = String::from(if realizable {
                "a1,a2,count,realizable\n"
            } else {
                "a1,a2,count\n"
            });
            for (pair, n) in &rows {
                s.push_str(&format!("{},{},{}", pair.a1, pair.a2, n));
                if realizable {
                    s.push_str(&format!(",{}", real(pair.a1, pair.a2)));
                }
                s.push('\n');
            }
            Ok(s)
        }
        Format::Markdown => {
            let mut s = format!("### Admissible pairs, q = {q} ({total} total)\n\n");
            s.push_str(if realizable {
                "| a1 | a2 | count | realizable |\n|---:|---:|---:|---|\n"
            } else {
                "| a1 | a2 | count |\n|---:|---:|---:|\n"
            });
            for (pair, n) in &rows {
                s.push_str(&format!("| {} | {} | {} |", pair.a1, pair.a2, n));
                if realizable {
                    s.push_str(&format!(" {} |", real(pair.a1, pair.a2)));
                }
                s.push('\n');
            }
            Ok(s)
        }
    }
}

fn cmd_tables(q: u64, format: Format) -> Result<(String, bool), Failure> {
    let pp = prime_power(q)?;
    let t1 = table1(&pp).map_err(|e| usage(e.to_string()))?;
    let t2 = table2(&pp).map_err(|e| usage(e.to_string()))?;
    let dom = dominance_report(&pp).map_err(|e| usage(e.to_string()))?;
    let ok = dom.holds();
    let out = match format {
        Format::Json => {
            let mut m = header(&pp);
            m.insert("table1".into(), json!(t1.rows));
            m.insert("table2".into(), json!(t2.rows));
            m.insert("dominance".into(), json!(dom));
            m.insert("dominance_ok".into(), json!(ok));
            to_json(&m)
        }
        Format::Csv => {
            let t2csv = t2.to_csv();
            let body = t2csv.split_once('\n').map(|(_, b)| b).unwrap_or("");
            format!("{}{}", t1.to_csv(), body)
        }
        Format::Markdown => format!(
            "{}\n{}\ndominance: {}\n",
            t1.to_markdown(),
            t2.to_markdown(),
            if ok { "OK" } else { "FAILED" }
        ),
    };
    Ok((out, ok))
}

fn cmd_bounds(
    q: u64,
    g: u32,
    points: Option<i64>,
    gonality: Option<u32>,
    nmax: Option<i64>,
    format: Format,
) -> Result<String, Failure> {
    let pp = prime_power(q)?;
    let err = |e: jacpoints::av_bounds::BoundsError| usage(e.to_string());
    let mut profile = CurveProfile::new(pp, g).map_err(err)?;
    if let Some(n) = points {
        profile = profile.with_points(n).map_err(err)?;
    }
    if let Some(d) = gonality {
        profile = profile.with_gonality(d).map_err(err)?;
    }
    if let Some(n) = nmax {
        profile = profile.with_nmax(n).map_err(err)?;
    }
    // (name, source, lower, upper)
    let mut rows: Vec<(&str, &str, Option<String>, Option<String>)> = Vec::new();
    let w = weil_sandwich(&pp, g).map_err(err)?;
    rows.push((
        "jacobian_order",
        "weil",
        Some(w.lower.to_string()),
        Some(w.upper.to_string()),
    ));
    let s = serre_sandwich(&pp, g).map_err(err)?;
    rows.push((
        "jacobian_order",
        "serre_refined",
        Some(s.lower.to_string()),
        Some(s.upper.to_string()),
    ));
    rows.push((
        "curve_points",
        "serre_refined",
        None,
        Some(serre_curve_upper(&pp, g).map_err(err)?.to_string()),
    ));
    if points.is_some() {
        rows.push((
            "jacobian_order",
            "lmd",
            Some(lmd_lower(&profile).map_err(err)?.to_string()),
            None,
        ));
        rows.push((
            "jacobian_order",
            "trace_mean",
            None,
            Some(pq_upper(&profile).map_err(err)?.to_string()),
        ));
    }
    if gonality.is_some() {
        rows.push((
            "jacobian_order",
            "lmd_gonality",
            None,
            Some(lmd_gonality_upper(&profile).map_err(err)?.to_string()),
        ));
    }
    if nmax.is_some() {
        rows.push((
            "max_jacobian_order",
            "trace_mean_at_nmax",
            None,
            Some(prop4_upper(&profile).map_err(err)?.to_string()),
        ));
    }
    let (wlo, whi) = asymptotic_window(&pp);
    let vladut = vladut_lower(&pp).ok();
    match format {
        Format::Json => {
            let mut m = header(&pp);
            m.insert("g".into(), json!(g));
            let items: Vec<Value> = rows
                .iter()
                .map(|(name, source, lo, hi)| json!({ "quantity": name, "source": source, "lower": lo, "upper": hi }))
                .collect();
            m.insert("bounds".into(), Value::Array(items));
            m.insert("asymptotic_window".into(), json!([wlo, whi]));
            m.insert("vladut_lower".into(), json!(vladut));
            Ok(to_json(&m))
        }
        Format::Markdown => {
            let mut out = format!("### Bounds, q = {q}, g = {g}\n\n| quantity | source | lower | upper |\n|---|---|---:|---:|\n");
            for (name, source, lo, hi) in &rows {
                out.push_str(&format!(
                    "| {name} | {source} | {} | {} |\n",
                    lo.as_deref().unwrap_or("—"),
                    hi.as_deref().unwrap_or("—")
                ));
            }
            out.push_str(&format!("\nasymptotic window: [{wlo}, {whi}]\n"));
            if let Some(v) = vladut {
                out.push_str(&format!("vladut lower: {v}\n"));
            }
            Ok(out)
        }
        Format::Csv => Err(unsupported(format, "bounds")),
    }
}

fn parse_range(s: &str) -> Result<(u64, u64), Failure> {
    let bad = || usage(format!("--range expects lo:hi, got {s:?}"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let lo = a.trim().parse().map_err(|_| bad())?;
    let hi = b.trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

fn cmd_special(range: &str, format: Format) -> Result<String, Failure> {
    let (lo, hi) = parse_range(range)?;
    if hi > jacpoints::exact_arith::MAX_Q {
        return Err(usage(format!(
            "range end {hi} exceeds the supported maximum"
        )));
    }
    let scan = special_scan(lo, hi).map_err(|e| usage(e.to_string()))?;
    let count = scan.iter().filter(|(_, v)| v.special).count();
    match format {
        Format::Json => {
            let items: Vec<Value> = scan
                .iter()
                .map(|(pp, v)| {
                    json!({ "q": pp.q(), "p": pp.p(), "e": pp.e(), "m": pp.m(),
                            "special": v.special, "conditions": v.conditions, "disc4": v.disc4 })
                })
                .collect();
            Ok(to_json(
                &json!({ "lo": lo, "hi": hi, "special_count": count, "verdicts": items }),
            ))
        }
        Format::Csv => {
            let mut s = String::from("q,p,e,m,special,conditions,disc4\n");
            for (pp, v) in &scan {
                let conds: Vec<String> = v
                    .conditions
                    .iter()
                    .map(|c| {
                        serde_json::to_value(c)
                            .expect("serializable")
                            .as_str()
                            .unwrap_or("")
                            .to_string()
                    })
                    .collect();
                s.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    pp.q(),
                    pp.p(),
                    pp.e(),
                    pp.m(),
                    v.special,
                    conds.join(";"),
                    v.disc4
                ));
            }
            Ok(s)
        }
        Format::Markdown => {
            let mut s = format!("### Odd prime powers in [{lo}, {hi}]: {count} special\n\n| q | m | special | conditions | m²−4q |\n|---:|---:|---|---|---:|\n");
            for (pp, v) in &scan {
                s.push_str(&format!(
                    "| {} | {} | {} | {:?} | {} |\n",
                    pp.q(),
                    pp.m(),
                    v.special,
                    v.conditions,
                    v.disc4
                ));
            }
            Ok(s)
        }
    }
}

fn cmd_verify(
    q: u64,
    oracle: bool,
    census: Option<PathBuf>,
    format: Format,
) -> Result<(String, bool), Failure> {
    let pp = prime_power(q)?;
    if oracle && !verify::oracle_allowed(q) {
        return Err(usage(format!(
            "the curve oracle supports q in {{2, 3, 4, 5, 7}}, not {q}"
        )));
    }
    let report = verify::verify(&pp, oracle, census.as_deref()).map_err(|e| match e {
        jacpoints::curve_oracle::OracleError::Inconsistent(_) => Failure {
            code: 1,
            message: e.to_string(),
        },
        other => usage(other.to_string()),
    })?;
    let out = match format {
        Format::Json => to_json(&report),
        Format::Markdown => {
            let mut s = format!(
                "### Verification, q = {q}\n\n| check | result | detail |\n|---|---|---|\n"
            );
            for c in &report.checks {
                s.push_str(&format!(
                    "| {} | {} | {} |\n",
                    c.name,
                    if c.passed { "PASS" } else { "FAIL" },
                    c.detail
                ));
            }
            if let Some(o) = &report.oracle {
                s.push_str(&format!(
                    "\ngenus 2: max_jac {} min_jac {} max_N1 {} ({} models)\ngenus 1: max {} min {}\n",
                    o.genus2.max_jac, o.genus2.min_jac, o.genus2.max_n1, o.genus2.accepted, o.genus1.max_jac, o.genus1.min_jac
                ));
            }
            s
        }
        Format::Csv => return Err(unsupported(format, "verify")),
    };
    Ok((out, report.passed))
}

fn run(cli: Cli) -> Result<(String, bool), Failure> {
    match cli.command {
        Command::Extremal { q, g, format } => cmd_extremal(q, g, format).map(|s| (s, true)),
        Command::Enumerate {
            q,
            order,
            limit,
            realizable,
            format,
        } => cmd_enumerate(q, order, limit, realizable, format).map(|s| (s, true)),
        // the dominance verdict is reported, not enforced; `verify` enforces it
        Command::Tables { q, format } => cmd_tables(q, format).map(|(s, _)| (s, true)),
        Command::Bounds {
            q,
            g,
            points,
            gonality,
            nmax,
            format,
        } => cmd_bounds(q, g, points, gonality, nmax, format).map(|s| (s, true)),
        Command::Special { range, format } => cmd_special(&range, format).map(|s| (s, true)),
        Command::Verify {
            q,
            oracle,
            census,
            format,
        } => cmd_verify(q, oracle, census, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
