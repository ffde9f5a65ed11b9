//! Front end for `omega-core`: cached matrix builds, tables, verification and output formats.

pub mod cache;
pub mod expected;
pub mod report;

use std::fmt;
use std::io::Write;

use anyhow::{bail, Context, Result};
use omega_core::matrix::{Column, SparseIntMatrix};
use omega_core::set::ElementSet;
use omega_core::types::{CyclicFlat, CyclicFlatLattice, SchubertLabel};
use serde::{Deserialize, Serialize};

/// Largest `n` accepted for rank 2 matrices.
pub const MAX_RANK2_N: usize = 48;
/// Largest `n` accepted for rank 3 matrices.
pub const MAX_RANK3_N: usize = 10;

/// Bad arguments. The binary exits with status 2 on these.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Rejects ranks other than 2 and 3 and sizes outside `[4, cap]`.
pub fn check_range(rank: usize, n: usize) -> Result<()> {
    let cap = match rank {
        2 => MAX_RANK2_N,
        3 => MAX_RANK3_N,
        _ => return Err(UsageError(format!("rank must be 2 or 3, got {rank}")).into()),
    };
    if n < 4 {
        return Err(UsageError(format!("n below supported range: {n} < 4")).into());
    }
    if n > cap {
        return Err(UsageError(format!("n above supported range: {n} > {cap} for rank {rank}")).into());
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    /// `rows cols nnz` header, then 1-indexed `row col value` lines
    #[default]
    Triples,
    /// rows and columns with descriptors
    Json,
    /// dense, one row per label
    Csv,
}

#[derive(Serialize)]
struct JsonMatrix<'a> {
    rank: usize,
    n: usize,
    rows: &'a [SchubertLabel],
    columns: &'a [Column],
}

/// Writes `m` in the given format.
pub fn write_matrix<W: Write>(m: &SparseIntMatrix, format: Format, mut w: W) -> Result<()> {
    match format {
        Format::Triples => m.write_triples(&mut w)?,
        Format::Json => {
            let doc = JsonMatrix { rank: m.rank(), n: m.n(), rows: m.row_labels(), columns: m.columns() };
            serde_json::to_writer(&mut w, &doc)?;
            writeln!(w)?;
        }
        Format::Csv => {
            write!(w, "label")?;
            for j in 1..=m.ncols() {
                write!(w, ",c{j}")?;
            }
            writeln!(w)?;
            for (label, row) in m.row_labels().iter().zip(m.to_dense()) {
                write!(w, "\"{label}\"")?;
                for v in row {
                    write!(w, ",{v}")?;
                }
                writeln!(w)?;
            }
        }
    }
    Ok(())
}

/// A matroid as read by `expand`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatroidJson {
    pub n: usize,
    pub rank: usize,
    pub cyclic_flats: Vec<FlatJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlatJson {
    pub set: Vec<usize>,
    pub rank: usize,
}

impl MatroidJson {
    /// Validates the axioms and the declared rank.
    pub fn lattice(&self) -> Result<CyclicFlatLattice> {
        let mut flats = Vec::with_capacity(self.cyclic_flats.len());
        for f in &self.cyclic_flats {
            if let Some(&e) = f.set.iter().find(|&&e| e < 1 || e > self.n) {
                bail!("element {e} outside [1, {}]", self.n);
            }
            flats.push(CyclicFlat::new(f.set.iter().copied().collect::<ElementSet>(), f.rank));
        }
        let z = CyclicFlatLattice::new(self.n, flats).context("invalid lattice of cyclic flats")?;
        if z.rank() != self.rank {
            bail!("declared rank {} but the flats give rank {}", self.rank, z.rank());
        }
        Ok(z)
    }

    pub fn from_lattice(z: &CyclicFlatLattice) -> Self {
        MatroidJson {
            n: z.n(),
            rank: z.rank(),
            cyclic_flats: z.flats().iter().map(|f| FlatJson { set: f.elements.to_vec(), rank: f.rank }).collect(),
        }
    }
}
