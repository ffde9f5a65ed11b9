//! Rank 2: Schubert classification, profiles, the closed-form expansion, counting,
//! and the recursive construction of `O_{2,n}`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::descriptor::MatroidDescriptor;
use crate::error::{Error, Result};
use crate::matrix::SparseIntMatrix;
use crate::set::ElementSet;
use crate::types::{CyclicFlat, CyclicFlatLattice, ExpansionVector, SchubertLabel};

/// A rank 2 isomorphism class: loops, parallel classes of size at least 2, and
/// the remaining single-element classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rank2Profile {
    n: usize,
    loops: usize,
    parallel_sizes: Vec<usize>,
}

impl Rank2Profile {
    /// Sizes are stored in decreasing order. At least two classes are needed for rank 2.
    pub fn new(n: usize, loops: usize, mut parallel_sizes: Vec<usize>) -> Result<Self> {
        parallel_sizes.sort_unstable_by(|a, b| b.cmp(a));
        if parallel_sizes.iter().any(|&k| k < 2) {
            return Err(Error::InvalidDescriptor("parallel classes need at least two elements".into()));
        }
        let used = loops + parallel_sizes.iter().sum::<usize>();
        if used > n {
            return Err(Error::InvalidDescriptor(format!("profile needs {used} elements but n = {n}")));
        }
        if parallel_sizes.len() + (n - used) < 2 {
            return Err(Error::InvalidDescriptor("fewer than two rank-one classes; not rank 2".into()));
        }
        Ok(Rank2Profile { n, loops, parallel_sizes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn loops(&self) -> usize {
        self.loops
    }

    pub fn parallel_sizes(&self) -> &[usize] {
        &self.parallel_sizes
    }

    /// Number of parallel classes of size at least 2.
    pub fn p(&self) -> usize {
        self.parallel_sizes.len()
    }

    /// Single-element classes.
    pub fn singletons(&self) -> usize {
        self.n - self.loops - self.parallel_sizes.iter().sum::<usize>()
    }

    pub fn with_loop(&self) -> Self {
        Rank2Profile { n: self.n + 1, loops: self.loops + 1, parallel_sizes: self.parallel_sizes.clone() }
    }

    pub fn with_singleton(&self) -> Self {
        Rank2Profile { n: self.n + 1, loops: self.loops, parallel_sizes: self.parallel_sizes.clone() }
    }

    /// The profile's Schubert label, if it is a Schubert matroid.
    pub fn schubert_label(&self) -> Option<SchubertLabel> {
        let ev = rank2_expansion(self);
        match ev.iter().collect::<Vec<_>>()[..] {
            [(l, 1)] => Some(l.clone()),
            _ => None,
        }
    }

    /// Loops first, then parallel classes in decreasing size, then singletons.
    pub fn lattice(&self) -> Result<CyclicFlatLattice> {
        let l = ElementSet::interval(1, self.loops);
        let mut flats = vec![CyclicFlat::new(l, 0)];
        let mut next = self.loops + 1;
        for &k in &self.parallel_sizes {
            flats.push(CyclicFlat::new(l.union(ElementSet::interval(next, next + k - 1)), 1));
            next += k;
        }
        let classes = self.p() + self.singletons();
        // with exactly two classes, singleton classes are coloops
        let top = if classes == 2 {
            CyclicFlat::new(ElementSet::interval(1, next - 1), 2 - self.singletons())
        } else {
            CyclicFlat::new(ElementSet::full(self.n), 2)
        };
        if !flats.iter().any(|f| f.elements == top.elements) {
            flats.push(top);
        }
        CyclicFlatLattice::new(self.n, flats)
    }
}

impl fmt::Display for Rank2Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rank2(n={}, loops={}, parallel={:?}, singletons={})",
            self.n,
            self.loops,
            self.parallel_sizes,
            self.singletons()
        )
    }
}

/// The four kinds of rank 2 Schubert matroids.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rank2SchubertType {
    /// `S(n-1, n)`: only loops are dependent.
    LoopsOnly,
    /// `S(k, k+1)` with `k < n-1`: loops plus a uniform matroid.
    Uniform { k: usize },
    /// `S(k, n)` with `k < n-1`: loops, one parallel class and a coloop.
    ParallelWithColoop { k: usize },
    /// `S(k1, k2)` with `k1 + 1 < k2 < n`: loops, one parallel class `[k1, k2-1]` and free points.
    Parallel { k1: usize, k2: usize },
}

pub fn classify_rank2_schubert(label: &SchubertLabel) -> Result<Rank2SchubertType> {
    if label.rank() != 2 {
        return Err(Error::InvalidArguments(format!("{label:?} does not have rank 2")));
    }
    let (n, x1, x2) = (label.n(), label.xs()[0], label.xs()[1]);
    Ok(if x1 == n - 1 {
        Rank2SchubertType::LoopsOnly
    } else if x2 == x1 + 1 {
        Rank2SchubertType::Uniform { k: x1 }
    } else if x2 == n {
        Rank2SchubertType::ParallelWithColoop { k: x1 }
    } else {
        Rank2SchubertType::Parallel { k1: x1, k2: x2 }
    })
}

/// The profile of a rank 2 Schubert matroid.
pub fn schubert_profile(label: &SchubertLabel) -> Result<Rank2Profile> {
    let n = label.n();
    match classify_rank2_schubert(label)? {
        Rank2SchubertType::LoopsOnly => Rank2Profile::new(n, n - 2, vec![]),
        Rank2SchubertType::Uniform { k } => Rank2Profile::new(n, k - 1, vec![]),
        Rank2SchubertType::ParallelWithColoop { k } => Rank2Profile::new(n, k - 1, vec![n - k]),
        Rank2SchubertType::Parallel { k1, k2 } => Rank2Profile::new(n, k1 - 1, vec![k2 - k1]),
    }
}

/// `(1 - p) S(l+1, l+2) + sum_k n_k S(l+1, l+k+1)`.
pub fn rank2_expansion(profile: &Rank2Profile) -> ExpansionVector {
    let (n, l) = (profile.n, profile.loops);
    let label = |x2: usize| SchubertLabel::new(vec![l + 1, x2], n).expect("profile fits in [n]");
    let mut ev = ExpansionVector::new(2, n);
    ev.add(label(l + 2), 1 - profile.p() as i64);
    for &k in &profile.parallel_sizes {
        ev.add(label(l + k + 1), 1);
    }
    ev
}

/// All partitions of `n` into parts `>= min_part`, each in decreasing order,
/// listed with larger leading parts first.
pub fn partitions(n: usize, min_part: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (min..=max.min(rest)).rev() {
            cur.push(part);
            go(rest - part, part, min, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, min_part.max(1), &mut Vec::new(), &mut out);
    out
}

/// Number of partitions of `n` into parts `>= 2`, the single part `n` included.
pub fn rho(n: usize) -> BigUint {
    // p_k(m) over parts >= 2, by the usual coin-change recurrence
    let mut ways = vec![BigUint::zero(); n + 1];
    ways[0] = BigUint::one();
    for part in 2..=n {
        for m in part..=n {
            let add = ways[m - part].clone();
            ways[m] += add;
        }
    }
    ways[n].clone()
}

/// `|M_{2,n}|` by `2 M(n-1) - M(n-2) + rho(n)`, seeded by listing profiles for `n = 2, 3`.
pub fn count_m2(n: usize) -> Result<BigUint> {
    if n < 2 {
        return Err(Error::InvalidArguments(format!("rank 2 needs n >= 2, got {n}")));
    }
    let (mut prev, mut cur) = (BigUint::from(count_m2_brute(2)), BigUint::from(count_m2_brute(3)));
    if n == 2 {
        return Ok(prev);
    }
    for m in 4..=n {
        let next = BigUint::from(2u32) * &cur + rho(m) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// Every rank 2 profile on `[n]`.
pub fn all_profiles(n: usize) -> Vec<Rank2Profile> {
    let mut out = Vec::new();
    for loops in 0..=n {
        for used in 0..=n - loops {
            let parts = if used == 0 { vec![vec![]] } else { partitions(used, 2) };
            for parts in parts {
                if let Ok(p) = Rank2Profile::new(n, loops, parts) {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// `|M_{2,n}|` by listing profiles.
pub fn count_m2_brute(n: usize) -> usize {
    all_profiles(n).len()
}

/// `U(n)`: partitions of `n` into at least two parts `>= 2`, as multiplicity
/// columns over part sizes `n-1, ..., 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionMatrix {
    n: usize,
    columns: Vec<Vec<usize>>,
}

impl PartitionMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Part sizes labelling the rows, top to bottom.
    pub fn row_parts(&self) -> Vec<usize> {
        (2..self.n).rev().collect()
    }

    pub fn columns(&self) -> &[Vec<usize>] {
        &self.columns
    }

    /// The partition a column encodes, parts in decreasing order.
    pub fn parts(&self, col: usize) -> Vec<usize> {
        self.row_parts()
            .into_iter()
            .zip(&self.columns[col])
            .flat_map(|(k, &mult)| std::iter::repeat_n(k, mult))
            .collect()
    }
}

pub fn build_partition_matrix(n: usize) -> Result<PartitionMatrix> {
    if n < 4 {
        return Err(Error::InvalidArguments(format!("U(n) needs n >= 4, got {n}")));
    }
    let mut columns: Vec<Vec<usize>> = partitions(n, 2)
        .into_iter()
        .filter(|p| p.len() >= 2)
        .map(|p| {
            let mut mult = vec![0; n - 2];
            for k in p {
                mult[n - 1 - k] += 1;
            }
            mult
        })
        .collect();
    columns.sort_unstable_by(|a, b| b.cmp(a));
    Ok(PartitionMatrix { n, columns })
}

/// `V(n)`: the non-Schubert loopless columns, over rows `S(1,n), ..., S(1,2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VBlock {
    pub n: usize,
    pub columns: Vec<Vec<i64>>,
    pub profiles: Vec<Rank2Profile>,
}

/// `V(n) = [0 over V(n-1) | U(n) over 1 - 1^T U(n)]`, with `V(3)` empty.
pub fn build_v(n: usize) -> Result<VBlock> {
    if n < 4 {
        return Err(Error::InvalidArguments(format!("V(n) needs n >= 4, got {n}")));
    }
    let mut block = VBlock { n: 3, columns: vec![], profiles: vec![] };
    for m in 4..=n {
        block = extend_v(&block)?;
        debug_assert_eq!(block.n, m);
    }
    Ok(block)
}

fn extend_v(prev: &VBlock) -> Result<VBlock> {
    let n = prev.n + 1;
    let mut columns = Vec::new();
    let mut profiles = Vec::new();
    for (c, p) in prev.columns.iter().zip(&prev.profiles) {
        let mut col = vec![0];
        col.extend_from_slice(c);
        columns.push(col);
        profiles.push(p.with_singleton());
    }
    let u = build_partition_matrix(n)?;
    for (j, mult) in u.columns().iter().enumerate() {
        let mut col: Vec<i64> = mult.iter().map(|&x| x as i64).collect();
        col.push(1 - mult.iter().sum::<usize>() as i64);
        columns.push(col);
        profiles.push(Rank2Profile::new(n, 0, u.parts(j))?);
    }
    Ok(VBlock { n, columns, profiles })
}

/// `O_{2,2} = I_1`.
fn base_o2() -> SparseIntMatrix {
    let mut m = SparseIntMatrix::new(2, 2).expect("valid shape");
    let l = SchubertLabel::new(vec![1, 2], 2).expect("valid label");
    m.push(ExpansionVector::unit(l.clone()), MatroidDescriptor::Schubert { label: l }).expect("fits");
    m
}

/// One recursion step: `O_{2,n} = [[O_{2,n-1}, 0], [0, I_{n-1}, V(n)]]`.
///
/// `v_prev` must be `V(n-1)` (empty for `n = 4`); returns `V(n)` alongside.
pub fn build_o2_from(prev: &SparseIntMatrix, v_prev: &VBlock) -> Result<(SparseIntMatrix, VBlock)> {
    let n = prev.n() + 1;
    if prev.rank() != 2 || (n >= 4 && v_prev.n + 1 != n) {
        return Err(Error::InvalidArguments("O(2, n-1) and V(n-1) do not match".into()));
    }
    let mut m = SparseIntMatrix::new(2, n)?;
    for c in prev.columns() {
        m.push(c.expansion.with_loop(), c.descriptor.with_loop())?;
    }
    for x2 in (2..=n).rev() {
        let l = SchubertLabel::new(vec![1, x2], n)?;
        m.push(ExpansionVector::unit(l.clone()), MatroidDescriptor::Schubert { label: l })?;
    }
    let v = if n >= 4 { extend_v(v_prev)? } else { v_prev.clone() };
    let loopless: Vec<SchubertLabel> =
        (2..=n).rev().map(|x2| SchubertLabel::new(vec![1, x2], n)).collect::<Result<_>>()?;
    for (col, p) in v.columns.iter().zip(&v.profiles) {
        let mut ev = ExpansionVector::new(2, n);
        for (l, &c) in loopless.iter().zip(col) {
            ev.add(l.clone(), c);
        }
        m.push(ev, MatroidDescriptor::Rank2(p.clone()))?;
    }
    Ok((m, v))
}

/// `O_{2,n}` for `n >= 2`.
pub fn build_o2(n: usize) -> Result<SparseIntMatrix> {
    if n < 2 {
        return Err(Error::InvalidArguments(format!("rank 2 needs n >= 2, got {n}")));
    }
    let mut m = base_o2();
    let mut v = VBlock { n: 3, columns: vec![], profiles: vec![] };
    for _ in 3..=n {
        let (next, next_v) = build_o2_from(&m, &v)?;
        m = next;
        v = next_v;
    }
    Ok(m)
}
