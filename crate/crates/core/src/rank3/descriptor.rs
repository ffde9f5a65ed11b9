//! Rank 3 isomorphism classes: a cover, how many parallel copies each point gets, and loops.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rank2::Rank2Profile;
use crate::schubert::chain_to_schubert_label;
use crate::set::ElementSet;
use crate::types::{CyclicFlat, CyclicFlatLattice, ExpansionVector};

use super::cover::Cover;
use super::state::{insert_parallel, Rank3State};

/// A rank 3 matroid: the simplification is the cover's simple matroid on `[i]`,
/// point `v` is replaced by `class_sizes[v - 1]` parallel elements, and `loops` loops are added.
///
/// Stored in canonical form, so equal descriptors mean isomorphic matroids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rank3Descriptor {
    n: usize,
    loops: usize,
    cover: Cover,
    class_sizes: Vec<usize>,
    coloops: usize,
}

impl Rank3Descriptor {
    pub fn new(loops: usize, cover: Cover, class_sizes: Vec<usize>) -> Result<Self> {
        let i = cover.n();
        if class_sizes.len() != i {
            return Err(Error::InvalidDescriptor(format!(
                "{} class sizes for a cover on {i} points",
                class_sizes.len()
            )));
        }
        if class_sizes.contains(&0) {
            return Err(Error::InvalidDescriptor("class sizes must be positive".into()));
        }
        let canon = cover.colored(&class_sizes).canonical();
        let cover = cover.relabeled(&canon.perm);
        let mut sizes = vec![0; i];
        for (v, &w) in class_sizes.iter().enumerate() {
            sizes[canon.perm[v] - 1] = w;
        }
        let coloops = cover.coloops().iter().filter(|&v| sizes[v - 1] == 1).count();
        let n = loops + sizes.iter().sum::<usize>();
        Ok(Rank3Descriptor { n, loops, cover, class_sizes: sizes, coloops })
    }

    /// A rank 2 class plus one coloop.
    pub fn from_rank2_with_coloop(p: &Rank2Profile) -> Result<Self> {
        let mut sizes = p.parallel_sizes().to_vec();
        sizes.extend(std::iter::repeat_n(1, p.singletons()));
        let line = sizes.len();
        let flats = if line >= 3 { vec![ElementSet::full(line)] } else { vec![] };
        sizes.push(1);
        Rank3Descriptor::new(p.loops(), Cover::new(line + 1, flats)?, sizes)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn loops(&self) -> usize {
        self.loops
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn coloops(&self) -> usize {
        self.coloops
    }

    pub fn with_loop(&self) -> Self {
        Rank3Descriptor { n: self.n + 1, loops: self.loops + 1, ..self.clone() }
    }

    /// The loopless part as an insertion state, built by replaying the insertions.
    pub fn loopless_state(&self) -> Result<Rank3State> {
        let mut state = Rank3State::new(simple_lattice(&self.cover))?;
        for (v, &w) in self.class_sizes.iter().enumerate() {
            for _ in 1..w {
                state = insert_parallel(&state, v + 1)?;
            }
        }
        Ok(state)
    }

    /// Loops on `[1, loops]`, the loopless part shifted after them.
    pub fn lattice(&self) -> Result<CyclicFlatLattice> {
        Ok(add_loops(self.loopless_state()?.lattice(), self.loops))
    }
}

impl fmt::Display for Rank3Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rank3(n={}, loops={}, lines={}, class_sizes={:?}, coloops={})",
            self.n, self.loops, self.cover, self.class_sizes, self.coloops
        )
    }
}

/// The simple matroid of a cover: its lines, and the maximal cyclic flat.
pub fn simple_lattice(cover: &Cover) -> CyclicFlatLattice {
    let i = cover.n();
    let coloops = cover.coloops();
    let mut flats = vec![CyclicFlat::new(ElementSet::empty(), 0)];
    flats.extend(cover.flats().iter().map(|&l| CyclicFlat::new(l, 2)));
    let top = ElementSet::full(i).difference(coloops);
    if !flats.iter().any(|f| f.elements == top) {
        flats.push(CyclicFlat::new(top, 3 - coloops.len()));
    }
    CyclicFlatLattice::new_unchecked(i, flats)
}

/// Shifts every element up by `loops` and adds `[1, loops]` to every flat.
pub fn add_loops(z: &CyclicFlatLattice, loops: usize) -> CyclicFlatLattice {
    let l = ElementSet::interval(1, loops);
    let flats = z
        .flats()
        .iter()
        .map(|f| CyclicFlat::new(f.elements.iter().map(|e| e + loops).collect::<ElementSet>().union(l), f.rank))
        .collect();
    CyclicFlatLattice::new_unchecked(z.n() + loops, flats)
}

/// Coefficients of a simple rank 3 matroid: `1 - t` on the bare chain, `t_k` on the
/// chain through a line of size `k`.
///
/// The cover lives on `[i]`; the remaining `n_total - i` points are added as free points.
pub fn simple_coefficients(cover: &Cover, n_total: usize) -> Result<ExpansionVector> {
    let i = cover.n();
    if n_total < i {
        return Err(Error::InvalidArguments(format!("n_total = {n_total} is below the cover size {i}")));
    }
    let coloops = if n_total == i { cover.coloops().len() } else { 0 };
    let top = (n_total - coloops, 3 - coloops);
    let chain = |line: Option<usize>| -> Vec<(usize, usize)> {
        let mut c = vec![(0, 0)];
        c.extend(line.map(|k| (k, 2)));
        if c.last() != Some(&top) {
            c.push(top);
        }
        c
    };
    let mut out = ExpansionVector::new(3, n_total);
    out.add(chain_to_schubert_label(&chain(None), n_total)?, 1 - cover.t() as i64);
    for l in cover.flats() {
        out.add(chain_to_schubert_label(&chain(Some(l.len())), n_total)?, 1);
    }
    Ok(out)
}
