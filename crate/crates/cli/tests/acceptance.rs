//! One pass/fail line per acceptance criterion. Exits nonzero if any criterion fails.
//!
//! Reference values are pinned here, independent of `data/expected_tables.json`.
//! Every comparison is exact integer equality; the only tolerances are the runtime budgets.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use omega_cli::cache::Cache;
use omega_cli::report::{certified_vertices, indicator_failures, oracle_mismatches, table_row};
use omega_core::oracle::distinct_rank3_expansions;
use omega_core::rank2::{build_o2, count_m2, count_m2_brute};
use omega_core::rank3::build_o3;

const GOLDEN_O2_4: &str = include_str!("golden/o2_4.triples");
const GOLDEN_O2_4_CSV: &str = include_str!("golden/o2_4.csv");
const GOLDEN_O3_5_EXTRA: &str = include_str!("golden/o3_5_extra_columns.csv");

const BUDGET_GOLDEN: Duration = Duration::from_secs(1);
const BUDGET_TABLE1: Duration = Duration::from_secs(600);
const BUDGET_TABLE2: Duration = Duration::from_secs(1800);
const BUDGET_INDICATOR: Duration = Duration::from_secs(600);
const INDICATOR_SAMPLES: usize = 50;
const INDICATOR_SEED: u64 = 1;

/// (n, dimension, classes, extremal)
const TABLE1: [(usize, usize, u64, usize); 7] = [
    (9, 35, 87, 54),
    (10, 44, 128, 72),
    (11, 54, 183, 100),
    (12, 65, 259, 124),
    (13, 77, 359, 164),
    (14, 90, 493, 204),
    (15, 104, 668, 260),
];

/// (n, dimension, distinct expansions, vertices)
const TABLE2: [(usize, usize, u64, usize); 4] = [(5, 10, 13, 11), (6, 20, 39, 28), (7, 35, 109, 64), (8, 56, 310, 145)];

/// Class counts for n = 9..=27.
const CLASSES: [u64; 19] =
    [87, 128, 183, 259, 359, 493, 668, 898, 1194, 1578, 2067, 2693, 3484, 4485, 5739, 7313, 9270, 11705, 14714];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn scratch(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("omega-acceptance-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    d
}

fn omega(args: &[&str]) -> (String, bool, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_omega")).args(args).arg("--no-cache").output().expect("binary runs");
    let elapsed = start.elapsed();
    (String::from_utf8(out.stdout).expect("utf-8 output"), out.status.success(), elapsed)
}

/// Parses `label,c1,...` CSV into (row labels, columns).
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<i64>>) {
    let mut labels = Vec::new();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for line in text.lines().skip(1) {
        let (label, values) = line.strip_prefix('"').and_then(|l| l.split_once("\",")).expect("quoted label");
        labels.push(label.to_string());
        rows.push(values.split(',').map(|v| v.parse().unwrap()).collect());
    }
    let ncols = rows.first().map_or(0, |r| r.len());
    let cols = (0..ncols).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    (labels, cols)
}

fn criterion_1() -> Outcome {
    let (triples, ok, t) = omega(&["--rank", "2", "--n", "4"]);
    let (csv, ok2, _) = omega(&["--rank", "2", "--n", "4", "--format", "csv"]);
    let exact = ok && ok2 && triples == GOLDEN_O2_4 && csv == GOLDEN_O2_4_CSV;
    outcome(exact && t < BUDGET_GOLDEN, format!("triples and dense 6x7 equal golden: {exact}, {:.3}s", t.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let (csv, ok, t) = omega(&["--rank", "3", "--n", "5", "--format", "csv"]);
    if !ok {
        return outcome(false, "omega --rank 3 --n 5 failed");
    }
    let (labels, cols) = parse_csv(&csv);
    let (golden_labels, extra) = parse_csv(GOLDEN_O3_5_EXTRA);
    let mut reference: Vec<Vec<i64>> = (0..10).map(|i| (0..10).map(|k| i64::from(i == k)).collect()).collect();
    reference.extend(extra);
    let reference_set: BTreeSet<Vec<i64>> = reference.iter().cloned().collect();
    let built_set: BTreeSet<Vec<i64>> = cols.iter().cloned().collect();
    let named = |pairs: &[(&str, i64)]| -> Vec<i64> {
        golden_labels.iter().map(|l| pairs.iter().find(|(p, _)| p == l).map_or(0, |(_, v)| *v)).collect()
    };
    let a = named(&[("S(1,3,5)", 2), ("S(1,2,5)", -1)]);
    let b = named(&[("S(1,2,3)", -1), ("S(1,2,4)", 2)]);
    let pass = labels == golden_labels
        && cols.len() == built_set.len()
        && built_set == reference_set
        && built_set.contains(&a)
        && built_set.contains(&b)
        && t < BUDGET_GOLDEN;
    outcome(
        pass,
        format!(
            "{} reference columns, {} distinct, {} built; sets equal: {}; {:.3}s",
            reference.len(),
            reference_set.len(),
            cols.len(),
            built_set == reference_set,
            t.as_secs_f64()
        ),
    )
}

fn table_criterion(rank: usize, rows: &[(usize, usize, u64, usize)], budget: Duration) -> Outcome {
    let dir = scratch(&format!("table{rank}"));
    let cache = Cache::at(&dir);
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut got = Vec::new();
    for &(n, dim, count, verts) in rows {
        let row = match table_row(&cache, rank, n, true) {
            Ok(r) => r,
            Err(e) => return outcome(false, format!("n={n}: {e}")),
        };
        let v = row.vertices.unwrap_or(0);
        got.push(format!("({},{},{})", row.reported_dimension(), row.count, v));
        if row.reported_dimension() != dim {
            bad.push(format!("n={n} dimension {} != {dim}", row.reported_dimension()));
        }
        if row.count != count {
            bad.push(format!("n={n} count {} != {count}", row.count));
        }
        if v != verts {
            bad.push(format!("n={n} vertices {v} != {verts}"));
        }
    }
    let t = start.elapsed();
    let _ = std::fs::remove_dir_all(&dir);
    let mut detail = format!("got {} in {:.1}s", got.join(" "), t.as_secs_f64());
    if !bad.is_empty() {
        detail.push_str(&format!("; mismatches: {}", bad.join(", ")));
    }
    outcome(bad.is_empty() && t < budget, detail)
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 2..=9 {
        let m = build_o2(n).unwrap();
        checked += m.ncols();
        bad.extend(oracle_mismatches(&m));
    }
    for n in 3..=7 {
        let m = build_o3(n).unwrap();
        checked += m.ncols();
        bad.extend(oracle_mismatches(&m));
    }
    let first = bad.first().cloned().unwrap_or_default();
    outcome(bad.is_empty(), format!("{checked} columns (rank 2 n<=9, rank 3 n<=7), {} mismatches {first}", bad.len()))
}

fn criterion_6() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for n in 3..=6 {
        let brute: BTreeSet<String> = distinct_rank3_expansions(n).unwrap().iter().map(|e| e.to_string()).collect();
        let built: BTreeSet<String> = build_o3(n).unwrap().columns().iter().map(|c| c.expansion.to_string()).collect();
        pass &= brute == built;
        parts.push(format!("n={n}: {}/{}", brute.len(), built.len()));
    }
    outcome(pass, format!("brute/built distinct expansions {}", parts.join(", ")))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut bad = Vec::new();
    let matrices = (2..=6).map(|n| build_o2(n).unwrap()).chain((3..=6).map(|n| build_o3(n).unwrap()));
    for m in matrices {
        checked += m.ncols();
        bad.extend(indicator_failures(&m, INDICATOR_SAMPLES, INDICATOR_SEED));
    }
    let t = start.elapsed();
    let first = bad.first().cloned().unwrap_or_default();
    outcome(
        bad.is_empty() && t < BUDGET_INDICATOR,
        format!("{checked} columns, {INDICATOR_SAMPLES} random points each plus all 0/1 points, {} failures, {:.1}s {first}", bad.len(), t.as_secs_f64()),
    )
}

fn criterion_8() -> Outcome {
    let brute_ok = (2..=15).all(|n| count_m2(n).unwrap() == (count_m2_brute(n) as u64).into());
    let table_ok = CLASSES.iter().enumerate().all(|(i, &c)| count_m2(9 + i).unwrap() == c.into());
    outcome(
        brute_ok && table_ok,
        format!(
            "recurrence = brute force for n<=15: {brute_ok}; = class table for n=9..27: {table_ok} (n=27: {})",
            count_m2(27).unwrap()
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut decisions = 0;
    let mut bad = Vec::new();
    let matrices = (4..=10).map(|n| build_o2(n).unwrap()).chain((4..=6).map(|n| build_o3(n).unwrap()));
    for m in matrices {
        match certified_vertices(&m) {
            Ok((v, non, b)) => {
                decisions += v + non;
                bad.extend(b);
            }
            Err(e) => bad.push(e.to_string()),
        }
    }
    let first = bad.first().cloned().unwrap_or_default();
    outcome(bad.is_empty(), format!("{decisions} decisions, {} uncertified {first}", bad.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("golden O(2,4)", criterion_1),
        ("golden O(3,5)", criterion_2),
        ("rank 2 table, n=9..15", || table_criterion(2, &TABLE1, BUDGET_TABLE1)),
        ("rank 3 table, n=5..8", || table_criterion(3, &TABLE2, BUDGET_TABLE2)),
        ("oracle equivalence", criterion_5),
        ("independent enumeration", criterion_6),
        ("indicator verification", criterion_7),
        ("counting recurrence", criterion_8),
        ("vertex certificates", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {} {}: {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
