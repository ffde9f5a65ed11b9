//! Table rows and verification reports.

use std::collections::HashSet;
use std::fmt;
use std::time::Instant;

use anyhow::Result;
use omega_core::descriptor::descriptor_to_lattice;
use omega_core::expansion::{schubert_expansion_oracle, verify_expansion_indicator, IndicatorOutcome, MAX_INDICATOR_N};
use omega_core::matrix::SparseIntMatrix;
use omega_core::oracle::{distinct_rank3_expansions, MAX_ORACLE_N};
use omega_core::polytope::{affine_dimension, linear_dimension, verify_certificate, vertex_decisions, PointSet};
use omega_core::rank2::count_m2;
use rayon::prelude::*;
use serde::Serialize;

use crate::cache::{Cache, CHECKSUM_MISMATCH};
use crate::expected::{self, ExpectedRow};

/// One recomputed table row.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub rank: usize,
    pub n: usize,
    pub affine_dimension: usize,
    pub linear_dimension: usize,
    /// Distinct columns of `O_{r,n}`.
    pub count: u64,
    pub vertices: Option<usize>,
    pub seconds: f64,
}

impl TableRow {
    /// The dimension the reference tables report: affine in rank 2, the linear span in rank 3.
    pub fn reported_dimension(&self) -> usize {
        if self.rank == 2 {
            self.affine_dimension
        } else {
            self.linear_dimension
        }
    }

    /// Human readable differences from the reference row, empty when everything agrees.
    pub fn mismatches(&self, exp: &ExpectedRow) -> Vec<String> {
        let mut out = Vec::new();
        if self.reported_dimension() != exp.dimension {
            out.push(format!("dimension {} != {}", self.reported_dimension(), exp.dimension));
        }
        if self.count != exp.count {
            out.push(format!("count {} != {}", self.count, exp.count));
        }
        if let (Some(got), Some(want)) = (self.vertices, exp.vertices) {
            if got != want {
                out.push(format!("vertices {got} != {want}"));
            }
        }
        out
    }
}

/// Recomputes one row. Vertex counting is the expensive part and can be skipped.
pub fn table_row(cache: &Cache, rank: usize, n: usize, with_vertices: bool) -> Result<TableRow> {
    let start = Instant::now();
    let m = cache.matrix(rank, n)?;
    let ps = PointSet::from_matrix(&m);
    let vertices = if with_vertices {
        let ds = vertex_decisions(&ps, true)?;
        Some(ds.iter().filter(|d| d.is_vertex).count())
    } else {
        None
    };
    Ok(TableRow {
        rank,
        n,
        affine_dimension: affine_dimension(&ps)?,
        linear_dimension: linear_dimension(&ps),
        count: m.ncols() as u64,
        vertices,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Formats a row with its reference comparison.
pub fn format_row(row: &TableRow, exp: Option<&ExpectedRow>) -> String {
    let v = row.vertices.map_or("-".to_string(), |v| v.to_string());
    let mut s = format!(
        "rank={} n={} dimension={} (affine {}, linear {}) count={} vertices={} time={:.2}s",
        row.rank,
        row.n,
        row.reported_dimension(),
        row.affine_dimension,
        row.linear_dimension,
        row.count,
        v,
        row.seconds
    );
    match exp {
        None => s.push_str(" [no reference]"),
        Some(e) => {
            let bad = row.mismatches(e);
            if bad.is_empty() {
                s.push_str(" [matches reference]");
            } else {
                s.push_str(&format!(" [MISMATCH: {}]", bad.join("; ")));
            }
        }
    }
    s
}

/// Recomputes rows for `ns` and reports whether all agree with the reference.
pub fn table(
    cache: &Cache,
    rank: usize,
    ns: impl IntoIterator<Item = usize>,
    with_vertices: bool,
) -> Result<(Vec<String>, bool)> {
    let mut lines = Vec::new();
    let mut ok = true;
    for n in ns {
        let row = table_row(cache, rank, n, with_vertices)?;
        let exp = expected::row(rank, n);
        if let Some(e) = &exp {
            ok &= row.mismatches(e).is_empty();
        }
        lines.push(format_row(&row, exp.as_ref()));
    }
    Ok((lines, ok))
}

/// Outcome of one named check.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    fn push(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), ok, detail: detail.into() });
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {}: {}", if c.ok { "ok  " } else { "FAIL" }, c.name, c.detail)?;
        }
        write!(f, "{}", if self.ok() { "verification passed" } else { "verification FAILED" })
    }
}

/// Columns whose expansion differs from the oracle run on their descriptor's lattice.
pub fn oracle_mismatches(m: &SparseIntMatrix) -> Vec<String> {
    m.columns()
        .par_iter()
        .filter_map(|c| {
            let got = descriptor_to_lattice(&c.descriptor).and_then(|z| schubert_expansion_oracle(&z));
            match got {
                Ok(ev) if ev == c.expansion => None,
                Ok(ev) => Some(format!("{}: built {} but oracle gives {}", c.descriptor, c.expansion, ev)),
                Err(e) => Some(format!("{}: {e}", c.descriptor)),
            }
        })
        .collect()
}

/// Columns failing the indicator identity on the sampled points.
pub fn indicator_failures(m: &SparseIntMatrix, samples: usize, seed: u64) -> Vec<String> {
    m.columns()
        .par_iter()
        .filter_map(|c| {
            let out = descriptor_to_lattice(&c.descriptor)
                .and_then(|z| verify_expansion_indicator(&z, &c.expansion, samples, seed));
            match out {
                Ok(IndicatorOutcome::Ok { .. }) => None,
                Ok(IndicatorOutcome::Counterexample { sample, matroid, expansion }) => Some(format!(
                    "{}: at {:?}/{} the matroid counts {matroid} but the expansion gives {expansion}",
                    c.descriptor, sample.numerators, sample.denominator
                )),
                Err(e) => Some(format!("{}: {e}", c.descriptor)),
            }
        })
        .collect()
}

fn summarize(failures: &[String], total: usize, what: &str) -> (bool, String) {
    match failures.first() {
        None => (true, format!("{total} {what}")),
        Some(first) => (false, format!("{} of {total} failed, first: {first}", failures.len())),
    }
}

/// Every cross-check available at `(rank, n)`. Structured failures, never a panic.
pub fn verify(cache: &Cache, rank: usize, n: usize, samples: usize, seed: u64) -> Result<VerifyReport> {
    crate::check_range(rank, n)?;
    let mut report = VerifyReport::default();
    let m = match cache.matrix(rank, n) {
        Ok(m) => m,
        Err(e) if e.to_string().contains(CHECKSUM_MISMATCH) => {
            report.push("cache integrity", false, e.to_string());
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    report.push("cache integrity", true, format!("O({rank},{n}) loaded, {} columns", m.ncols()));

    let distinct: HashSet<_> = m.columns().iter().map(|c| &c.expansion).collect();
    report.push(
        "distinct columns",
        distinct.len() == m.ncols(),
        format!("{} distinct of {}", distinct.len(), m.ncols()),
    );

    let (ok, detail) = summarize(&oracle_mismatches(&m), m.ncols(), "columns equal the oracle expansion");
    report.push("oracle equivalence", ok, detail);

    if rank == 2 {
        let want = count_m2(n)?;
        let ok = want == (m.ncols() as u64).into();
        report.push("class count", ok, format!("{} columns, recurrence gives {want}", m.ncols()));
    } else if n <= MAX_ORACLE_N {
        let brute: HashSet<_> = distinct_rank3_expansions(n)?.into_iter().collect();
        let built: HashSet<_> = m.columns().iter().map(|c| c.expansion.clone()).collect();
        report.push(
            "brute-force enumeration",
            brute == built,
            format!("{} distinct expansions from all lattices, {} built", brute.len(), built.len()),
        );
    }

    if n <= MAX_INDICATOR_N {
        let fails = indicator_failures(&m, samples, seed);
        let (ok, detail) =
            summarize(&fails, m.ncols(), &format!("columns pass with {samples} random points, seed {seed}"));
        report.push("indicator identity", ok, detail);
    }
    Ok(report)
}

/// Counts of certified vertex and non-vertex decisions, and any certificate that fails to re-verify.
pub fn certified_vertices(m: &SparseIntMatrix) -> Result<(usize, usize, Vec<String>)> {
    let ps = PointSet::from_matrix(m);
    let ds = vertex_decisions(&ps, true)?;
    let bad: Vec<String> = ds
        .par_iter()
        .filter_map(|d| verify_certificate(&ps, d).err().map(|e| format!("point {}: {e}", d.index)))
        .collect();
    let v = ds.iter().filter(|d| d.is_vertex).count();
    Ok((v, ds.len() - v, bad))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rank2_row() {
        let row = table_row(&Cache::disabled(), 2, 5, true).unwrap();
        assert_eq!(row.count, m2(5));
        assert_eq!(row.affine_dimension, 9);
        assert_eq!(row.linear_dimension, 10);
        assert!(row.vertices.unwrap() <= row.count as usize);
    }

    fn m2(n: usize) -> u64 {
        omega_core::rank2::count_m2_brute(n) as u64
    }

    #[test]
    fn verify_small_cases() {
        let r = verify(&Cache::disabled(), 2, 5, 5, 1).unwrap();
        assert!(r.ok(), "{r}");
        let r = verify(&Cache::disabled(), 3, 5, 5, 1).unwrap();
        assert!(r.ok(), "{r}");
        assert!(r.checks.iter().any(|c| c.name == "brute-force enumeration"));
    }

    #[test]
    fn mismatch_is_reported() {
        let row = TableRow {
            rank: 3,
            n: 6,
            affine_dimension: 19,
            linear_dimension: 20,
            count: 37,
            vertices: None,
            seconds: 0.0,
        };
        let exp = expected::row(3, 6).unwrap();
        assert_eq!(row.mismatches(&exp), vec!["count 37 != 39".to_string()]);
        assert!(format_row(&row, Some(&exp)).contains("MISMATCH"));
    }
}
