//! Finite posets, Möbius functions, chain lattices and the cyclic flat axioms.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use thiserror::Error;

use crate::error::{Error, Result};
use crate::set::{ElementSet, MAX_ELEMENTS};
use crate::types::{CyclicFlat, CyclicFlatLattice};

/// First violated cyclic flat axiom, with witnesses.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ZViolation {
    #[error("the family is empty")]
    Empty,
    #[error("flat {set} leaves the ground set [{n}]")]
    OutOfRange { set: ElementSet, n: usize },
    #[error("flat {0} is listed twice")]
    Duplicate(ElementSet),
    #[error("flat {set} has rank {rank} larger than its size")]
    RankTooLarge { set: ElementSet, rank: usize },
    #[error("Z0: {a} and {b} have no unique {which}")]
    NotALattice { a: ElementSet, b: ElementSet, which: LatticeOp },
    #[error("Z1: the minimal flat {set} has rank {rank}")]
    BottomRank { set: ElementSet, rank: usize },
    #[error("Z2: {lower} (rank {lower_rank}) < {upper} (rank {upper_rank})")]
    Z2 { lower: ElementSet, lower_rank: usize, upper: ElementSet, upper_rank: usize },
    #[error("Z3: submodularity fails for {x} and {y}")]
    Z3 { x: ElementSet, y: ElementSet },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeOp {
    Join,
    Meet,
}

impl fmt::Display for LatticeOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeOp::Join => write!(f, "join"),
            LatticeOp::Meet => write!(f, "meet"),
        }
    }
}

/// Index of the unique inclusion-minimal upper bound (or maximal lower bound) of `a` and `b`.
fn lattice_op(flats: &[CyclicFlat], a: usize, b: usize, op: LatticeOp) -> Option<usize> {
    let (x, y) = (flats[a].elements, flats[b].elements);
    let bounds: Vec<usize> = (0..flats.len())
        .filter(|&k| {
            let z = flats[k].elements;
            match op {
                LatticeOp::Join => x.is_subset(z) && y.is_subset(z),
                LatticeOp::Meet => z.is_subset(x) && z.is_subset(y),
            }
        })
        .collect();
    let extreme: Vec<usize> = bounds
        .iter()
        .copied()
        .filter(|&k| {
            let z = flats[k].elements;
            !bounds.iter().any(|&j| {
                let w = flats[j].elements;
                match op {
                    LatticeOp::Join => w.is_proper_subset(z),
                    LatticeOp::Meet => z.is_proper_subset(w),
                }
            })
        })
        .collect();
    match extreme.as_slice() {
        [k] => Some(*k),
        _ => None,
    }
}

/// Checks Z0 to Z3 for a family of (set, rank) pairs on `[n]`.
pub fn validate_z_axioms(flats: &[CyclicFlat], n: usize) -> std::result::Result<(), ZViolation> {
    if flats.is_empty() {
        return Err(ZViolation::Empty);
    }
    let ground = ElementSet::full(n.min(MAX_ELEMENTS));
    for (i, f) in flats.iter().enumerate() {
        if !f.elements.is_subset(ground) || n > MAX_ELEMENTS {
            return Err(ZViolation::OutOfRange { set: f.elements, n });
        }
        if f.rank > f.len() {
            return Err(ZViolation::RankTooLarge { set: f.elements, rank: f.rank });
        }
        if flats[..i].iter().any(|g| g.elements == f.elements) {
            return Err(ZViolation::Duplicate(f.elements));
        }
    }

    let m = flats.len();
    let mut join = vec![0; m * m];
    let mut meet = vec![0; m * m];
    for a in 0..m {
        for b in a..m {
            let j = lattice_op(flats, a, b, LatticeOp::Join).ok_or(ZViolation::NotALattice {
                a: flats[a].elements,
                b: flats[b].elements,
                which: LatticeOp::Join,
            })?;
            let mt = lattice_op(flats, a, b, LatticeOp::Meet).ok_or(ZViolation::NotALattice {
                a: flats[a].elements,
                b: flats[b].elements,
                which: LatticeOp::Meet,
            })?;
            join[a * m + b] = j;
            join[b * m + a] = j;
            meet[a * m + b] = mt;
            meet[b * m + a] = mt;
        }
    }

    // A lattice has a unique minimum; it is the meet of everything.
    let bottom = (0..m).fold(0, |acc, k| meet[acc * m + k]);
    if flats[bottom].rank != 0 {
        return Err(ZViolation::BottomRank { set: flats[bottom].elements, rank: flats[bottom].rank });
    }

    for x in flats {
        for y in flats {
            if x.elements.is_proper_subset(y.elements) {
                let gap = y.elements.len() - x.elements.len();
                if !(y.rank > x.rank && y.rank - x.rank < gap) {
                    return Err(ZViolation::Z2 {
                        lower: x.elements,
                        lower_rank: x.rank,
                        upper: y.elements,
                        upper_rank: y.rank,
                    });
                }
            }
        }
    }

    for a in 0..m {
        for b in a + 1..m {
            let (x, y) = (&flats[a], &flats[b]);
            let (j, mt) = (&flats[join[a * m + b]], &flats[meet[a * m + b]]);
            let extra = x.elements.intersection(y.elements).difference(mt.elements).len();
            if x.rank + y.rank < j.rank + mt.rank + extra {
                return Err(ZViolation::Z3 { x: x.elements, y: y.elements });
            }
        }
    }
    Ok(())
}

/// `rk(A) = min over cyclic flats F of r(F) + |A \ F|`.
pub fn rank_from_cyclic_flats(z: &CyclicFlatLattice, a: ElementSet) -> Result<usize> {
    if !a.is_subset(z.ground().elements()) {
        return Err(Error::InvalidArguments(format!("{a} is not a subset of [{}]", z.n())));
    }
    Ok(rank_unchecked(z.flats(), a))
}

pub(crate) fn rank_unchecked(flats: &[CyclicFlat], a: ElementSet) -> usize {
    flats.iter().map(|f| f.rank + a.difference(f.elements).len()).min().expect("non-empty lattice")
}

/// Rank of every subset of `[n]`, indexed by bit mask. Only sensible for small `n`.
pub fn rank_table(z: &CyclicFlatLattice) -> Result<Vec<u8>> {
    let n = z.n();
    if n > 20 {
        return Err(Error::UnsupportedSize { n, max: 20 });
    }
    Ok((0..1u128 << n).map(|bits| rank_unchecked(z.flats(), ElementSet::from_bits(bits)) as u8).collect())
}

/// Recovers the cyclic flats of a matroid from its rank function on `[n]`.
///
/// Exhaustive over all subsets, so only usable for small `n`; meant for cross-checks.
pub fn cyclic_flats_from_rank(n: usize, rank: impl Fn(ElementSet) -> usize) -> Result<Vec<CyclicFlat>> {
    if n > 16 {
        return Err(Error::UnsupportedSize { n, max: 16 });
    }
    let table: Vec<usize> = (0..1u128 << n).map(|b| rank(ElementSet::from_bits(b))).collect();
    let mut out = Vec::new();
    for bits in 0..1u128 << n {
        let f = ElementSet::from_bits(bits);
        let r = table[bits as usize];
        let closed = (1..=n).filter(|&e| !f.contains(e)).all(|e| table[f.with(e).bits() as usize] > r);
        let mut minus = f;
        let cyclic = f.iter().all(|e| {
            minus.remove(e);
            let ok = table[minus.bits() as usize] == r;
            minus.insert(e);
            ok
        });
        if closed && cyclic {
            out.push(CyclicFlat::new(f, r));
        }
    }
    Ok(out)
}

/// A finite poset given by its order relation.
///
/// The Möbius function is memoised per lower element.
#[derive(Debug)]
pub struct FinitePoset {
    size: usize,
    words: usize,
    // up[a] has bit b set iff a <= b
    up: Vec<Vec<u64>>,
    // a linear extension: every element appears after everything below it
    order: Vec<usize>,
    position: Vec<usize>,
    memo: Mutex<HashMap<usize, Vec<i64>>>,
}

impl FinitePoset {
    /// Builds a poset from a `leq` predicate, checking the partial order axioms.
    pub fn new(size: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let words = size.div_ceil(64).max(1);
        let mut up = vec![vec![0u64; words]; size];
        for (a, row) in up.iter_mut().enumerate() {
            for b in 0..size {
                if leq(a, b) {
                    row[b / 64] |= 1 << (b % 64);
                }
            }
        }
        let get = |up: &Vec<Vec<u64>>, a: usize, b: usize| up[a][b / 64] >> (b % 64) & 1 == 1;
        for a in 0..size {
            if !get(&up, a, a) {
                return Err(Error::InvalidArguments(format!("relation is not reflexive at {a}")));
            }
            for b in 0..size {
                if a != b && get(&up, a, b) && get(&up, b, a) {
                    return Err(Error::InvalidArguments(format!("relation is not antisymmetric at ({a}, {b})")));
                }
                // transitivity: a <= b implies up(b) is a subset of up(a)
                if get(&up, a, b) && up[b].iter().zip(&up[a]).any(|(x, y)| x & !y != 0) {
                    return Err(Error::InvalidArguments(format!("relation is not transitive at ({a}, {b})")));
                }
            }
        }
        let mut order: Vec<usize> = (0..size).collect();
        let height: Vec<usize> = (0..size).map(|b| (0..size).filter(|&a| get(&up, a, b)).count()).collect();
        order.sort_by_key(|&x| (height[x], x));
        let mut position = vec![0; size];
        for (i, &x) in order.iter().enumerate() {
            position[x] = i;
        }
        Ok(FinitePoset { size, words, up, order, position, memo: Mutex::new(HashMap::new()) })
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a][b / 64] >> (b % 64) & 1 == 1
    }

    fn check(&self, a: usize) -> Result<()> {
        if a >= self.size {
            Err(Error::NotFound(a))
        } else {
            Ok(())
        }
    }

    /// `mu(a, x)` for every `x`, zero where `x` is not above `a`.
    fn moebius_row(&self, a: usize) -> Vec<i64> {
        if let Some(row) = self.memo.lock().expect("memo lock").get(&a) {
            return row.clone();
        }
        let mut row = vec![0i64; self.size];
        let above: Vec<usize> = self.order[self.position[a]..].iter().copied().filter(|&x| self.leq(a, x)).collect();
        for (i, &b) in above.iter().enumerate() {
            if b == a {
                row[b] = 1;
                continue;
            }
            let mut s = 0i64;
            for &k in &above[..i] {
                if self.leq(k, b) {
                    s += row[k];
                }
            }
            row[b] = -s;
        }
        debug_assert_eq!(self.words, self.up[a].len());
        self.memo.lock().expect("memo lock").insert(a, row.clone());
        row
    }

    /// The Möbius function `mu(a, b)`.
    pub fn moebius(&self, a: usize, b: usize) -> Result<i64> {
        self.check(a)?;
        self.check(b)?;
        if !self.leq(a, b) {
            return Ok(0);
        }
        Ok(self.moebius_row(a)[b])
    }
}

/// The lattice of chains of a cyclic flat lattice through its minimum and maximum,
/// ordered by inclusion, with an extra top element.
#[derive(Debug)]
pub struct ChainLattice {
    base: CyclicFlatLattice,
    chains: Vec<Vec<usize>>,
    poset: FinitePoset,
}

impl ChainLattice {
    pub fn base(&self) -> &CyclicFlatLattice {
        &self.base
    }

    /// Chains as ascending lists of flat indices into `base().flats()`.
    pub fn chains(&self) -> &[Vec<usize>] {
        &self.chains
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    /// Index of the adjoined top element in `poset()`.
    pub fn top(&self) -> usize {
        self.chains.len()
    }

    /// `(size, rank)` of every flat of a chain, bottom first.
    pub fn signature(&self, chain: usize) -> Vec<(usize, usize)> {
        self.chains[chain].iter().map(|&i| (self.base.flats()[i].len(), self.base.flats()[i].rank)).collect()
    }
}

/// Enumerates all chains of `z` containing its minimum and maximum.
pub fn build_chain_lattice(z: &CyclicFlatLattice) -> Result<ChainLattice> {
    validate_z_axioms(z.flats(), z.n()).map_err(Error::AxiomViolation)?;
    let flats = z.flats();
    let m = flats.len();
    let mut chains = Vec::new();
    if m == 1 {
        chains.push(vec![0]);
    } else {
        // flats are sorted by size, so index 0 is the minimum and m-1 the maximum
        let mut stack = vec![vec![0usize]];
        while let Some(chain) = stack.pop() {
            let last = *chain.last().expect("non-empty");
            let mut closed = chain.clone();
            closed.push(m - 1);
            chains.push(closed);
            for next in last + 1..m - 1 {
                if flats[last].elements.is_proper_subset(flats[next].elements) {
                    let mut c = chain.clone();
                    c.push(next);
                    stack.push(c);
                }
            }
        }
        chains.sort();
    }
    let k = chains.len();
    let sets: Vec<u128> = chains.iter().map(|c| c.iter().fold(0u128, |acc, &i| acc | (1u128 << (i % 128)))).collect();
    let poset = if m <= 128 {
        FinitePoset::new(k + 1, |a, b| b == k || (a < k && sets[a] & !sets[b] == 0))?
    } else {
        FinitePoset::new(k + 1, |a, b| b == k || (a < k && chains[a].iter().all(|x| chains[b].contains(x))))?
    };
    Ok(ChainLattice { base: z.clone(), chains, poset })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> ElementSet {
        v.iter().copied().collect()
    }

    fn flat(v: &[usize], r: usize) -> CyclicFlat {
        CyclicFlat::new(set(v), r)
    }

    fn two_pairs() -> CyclicFlatLattice {
        CyclicFlatLattice::new(4, vec![flat(&[], 0), flat(&[1, 2], 1), flat(&[3, 4], 1), flat(&[1, 2, 3, 4], 2)])
            .unwrap()
    }

    #[test]
    fn mu_two_chain() {
        let p = FinitePoset::new(2, |a, b| a <= b).unwrap();
        assert_eq!(p.moebius(0, 1).unwrap(), -1);
        assert_eq!(p.moebius(1, 0).unwrap(), 0);
        assert!(p.moebius(0, 2).is_err());
    }

    #[test]
    fn poset_axioms_checked() {
        assert!(FinitePoset::new(2, |_, _| true).is_err());
        assert!(FinitePoset::new(2, |a, b| a != b).is_err());
        // 0 <= 1 <= 2 without 0 <= 2
        assert!(FinitePoset::new(3, |a, b| a == b || (a, b) == (0, 1) || (a, b) == (1, 2)).is_err());
    }

    #[test]
    fn mu_ranked_lattice_formula() {
        // v0 < a, b < c, d < v3 with a < c, a < d, b < c
        let below = [(1, 3), (1, 4), (2, 3)];
        let leq = |x: usize, y: usize| x == y || x == 0 || y == 5 || below.contains(&(x, y));
        let p = FinitePoset::new(6, leq).unwrap();
        // |V1| + |V2| - |C| - 1 with |C| = 3 saturated chains v0 < V1 < V2
        assert_eq!(p.moebius(0, 5).unwrap(), 2 + 2 - 3 - 1);
    }

    #[test]
    fn chain_lattice_two_pairs() {
        let cl = build_chain_lattice(&two_pairs()).unwrap();
        assert_eq!(cl.chains().len(), 3);
        let bottom = cl.chains().iter().position(|c| c.len() == 2).unwrap();
        // lambda of the minimal chain is -mu = 1 - p with p = 2
        assert_eq!(-cl.poset().moebius(bottom, cl.top()).unwrap(), -1);
        assert_eq!(cl.poset().moebius(bottom, cl.top()).unwrap(), 1);
    }

    #[test]
    fn chain_lattice_two_lines() {
        let z = CyclicFlatLattice::new(
            5,
            vec![flat(&[], 0), flat(&[1, 2, 3], 2), flat(&[3, 4, 5], 2), flat(&[1, 2, 3, 4, 5], 3)],
        )
        .unwrap();
        let cl = build_chain_lattice(&z).unwrap();
        let sigs: Vec<_> = (0..3).map(|c| cl.signature(c)).collect();
        assert!(sigs.contains(&vec![(0, 0), (5, 3)]));
        assert_eq!(sigs.iter().filter(|s| s.len() == 3).count(), 2);
    }

    #[test]
    fn z2_violation() {
        let err = validate_z_axioms(&[flat(&[], 0), flat(&[1], 1), flat(&[1, 2, 3], 2)], 3).unwrap_err();
        assert!(matches!(err, ZViolation::Z2 { .. }));
    }

    #[test]
    fn z3_violation() {
        let fl = [flat(&[], 0), flat(&[1, 2, 3], 2), flat(&[1, 2, 4], 2), flat(&[1, 2, 3, 4, 5], 3)];
        assert!(matches!(validate_z_axioms(&fl, 5).unwrap_err(), ZViolation::Z3 { .. }));
    }

    #[test]
    fn z0_violation() {
        let fl = [flat(&[1, 2], 1), flat(&[3, 4], 1)];
        assert!(matches!(validate_z_axioms(&fl, 4).unwrap_err(), ZViolation::NotALattice { .. }));
    }

    #[test]
    fn rank_examples() {
        let z = two_pairs();
        assert_eq!(rank_from_cyclic_flats(&z, set(&[1, 2])).unwrap(), 1);
        assert_eq!(rank_from_cyclic_flats(&z, set(&[1, 3])).unwrap(), 2);
        assert_eq!(rank_from_cyclic_flats(&z, ElementSet::full(4)).unwrap(), z.rank());
        assert!(rank_from_cyclic_flats(&z, set(&[5])).is_err());
    }

    #[test]
    fn cyclic_flats_roundtrip() {
        let z = two_pairs();
        let mut back = cyclic_flats_from_rank(4, |a| rank_unchecked(z.flats(), a)).unwrap();
        back.sort_by_key(|f| (f.len(), f.elements));
        assert_eq!(back, z.flats());
    }
}
