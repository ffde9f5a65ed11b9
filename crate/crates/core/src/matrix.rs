//! The generating matrices `O_{r,n}` as sparse integer columns with provenance.

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::descriptor::MatroidDescriptor;
use crate::error::{Error, Result};
use crate::types::{canonical_schubert_order, ExpansionVector, SchubertLabel};

/// One column: an expansion and the matroid it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub expansion: ExpansionVector,
    pub descriptor: MatroidDescriptor,
}

/// `O_{r,n}`: rows are all rank `r` labels on `[n]` in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rank: usize,
    n: usize,
    row_labels: Vec<SchubertLabel>,
    row_index: HashMap<SchubertLabel, usize>,
    columns: Vec<Column>,
}

/// JSON sidecar written next to a triples file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sidecar {
    pub rank: usize,
    pub n: usize,
    pub rows: Vec<SchubertLabel>,
    pub columns: Vec<MatroidDescriptor>,
}

impl SparseIntMatrix {
    pub fn new(rank: usize, n: usize) -> Result<Self> {
        let row_labels = canonical_schubert_order(rank, n)?;
        let row_index = row_labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        Ok(SparseIntMatrix { rank, n, row_labels, row_index, columns: Vec::new() })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row_labels(&self) -> &[SchubertLabel] {
        &self.row_labels
    }

    pub fn row_of(&self, label: &SchubertLabel) -> Option<usize> {
        self.row_index.get(label).copied()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn nrows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn push(&mut self, expansion: ExpansionVector, descriptor: MatroidDescriptor) -> Result<()> {
        if expansion.rank() != self.rank || expansion.n() != self.n {
            return Err(Error::InvalidArguments(format!(
                "column of rank {} on {} does not fit O({}, {})",
                expansion.rank(),
                expansion.n(),
                self.rank,
                self.n
            )));
        }
        if descriptor.rank() != self.rank || descriptor.n() != self.n {
            return Err(Error::InvalidArguments(format!(
                "descriptor {descriptor} does not fit O({}, {})",
                self.rank, self.n
            )));
        }
        self.columns.push(Column { expansion, descriptor });
        Ok(())
    }

    /// Keeps the first column of every distinct expansion. Returns the removed columns.
    pub fn dedup_columns(&mut self) -> Vec<Column> {
        let mut seen = HashSet::new();
        let mut removed = Vec::new();
        let mut kept = Vec::with_capacity(self.columns.len());
        for c in std::mem::take(&mut self.columns) {
            if seen.insert(c.expansion.clone()) {
                kept.push(c);
            } else {
                removed.push(c);
            }
        }
        self.columns = kept;
        removed
    }

    /// Columns re-sorted by their dense vectors, descending.
    pub fn sorted(&self) -> Self {
        let mut out = self.clone();
        out.columns.sort_by_cached_key(|c| std::cmp::Reverse(c.expansion.to_dense(&self.row_labels)));
        out
    }

    /// Nonzero entries as 0-indexed `(row, col, value)`, column-major.
    pub fn triples(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        for (j, c) in self.columns.iter().enumerate() {
            let mut entries: Vec<(usize, i64)> = c.expansion.iter().map(|(l, v)| (self.row_index[l], v)).collect();
            entries.sort_unstable();
            out.extend(entries.into_iter().map(|(i, v)| (i, j, v)));
        }
        out
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.expansion.support_len()).sum()
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.ncols()]; self.nrows()];
        for (i, j, v) in self.triples() {
            m[i][j] = v;
        }
        m
    }

    /// Dense columns, each over the canonical row order.
    pub fn dense_columns(&self) -> Vec<Vec<i64>> {
        self.columns.iter().map(|c| c.expansion.to_dense(&self.row_labels)).collect()
    }

    /// Header `rows cols nnz`, then one 1-indexed `row col value` line per nonzero.
    pub fn write_triples<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let t = self.triples();
        writeln!(w, "{} {} {}", self.nrows(), self.ncols(), t.len())?;
        for (i, j, v) in t {
            writeln!(w, "{} {} {}", i + 1, j + 1, v)?;
        }
        Ok(())
    }

    pub fn sidecar(&self) -> Sidecar {
        Sidecar {
            rank: self.rank,
            n: self.n,
            rows: self.row_labels.clone(),
            columns: self.columns.iter().map(|c| c.descriptor.clone()).collect(),
        }
    }

    /// Rebuilds a matrix from a triples stream and its sidecar.
    pub fn read_triples<R: BufRead>(r: R, sidecar: Sidecar) -> Result<Self> {
        let mut m = SparseIntMatrix::new(sidecar.rank, sidecar.n)?;
        if m.row_labels != sidecar.rows {
            return Err(Error::Parse("sidecar rows are not in canonical order".into()));
        }
        let mut lines = r.lines();
        let parse = |line: std::io::Result<String>| -> Result<Vec<i64>> {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            line.split_whitespace()
                .map(|t| t.parse::<i64>().map_err(|_| Error::Parse(format!("bad token {t:?}"))))
                .collect()
        };
        let header = parse(lines.next().ok_or_else(|| Error::Parse("missing header".into()))?)?;
        let [rows, cols, nnz] = header[..] else {
            return Err(Error::Parse("header must be `rows cols nnz`".into()));
        };
        if rows as usize != m.nrows() || cols as usize != sidecar.columns.len() {
            return Err(Error::Parse("header does not match the sidecar".into()));
        }
        let mut evs = vec![ExpansionVector::new(m.rank, m.n); cols as usize];
        let mut count = 0;
        for line in lines {
            let t = parse(line)?;
            if t.is_empty() {
                continue;
            }
            let [i, j, v] = t[..] else {
                return Err(Error::Parse("triple lines must have three fields".into()));
            };
            if i < 1 || i > rows || j < 1 || j > cols {
                return Err(Error::Parse(format!("triple ({i}, {j}) out of range")));
            }
            evs[(j - 1) as usize].add(m.row_labels[(i - 1) as usize].clone(), v);
            count += 1;
        }
        if count != nnz {
            return Err(Error::Parse(format!("expected {nnz} triples, found {count}")));
        }
        for (ev, d) in evs.into_iter().zip(sidecar.columns) {
            m.push(ev, d)?;
        }
        Ok(m)
    }
}
