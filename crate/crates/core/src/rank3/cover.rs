//! Arrangements of inseparable flats, i.e. simple rank 3 matroids given by their lines.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::canon::{CanonicalKey, ColoredSetSystem};
use crate::error::{Error, Result};
use crate::set::ElementSet;

/// Lines on `[n]`: each of size `3..=n-1`, any two meeting in at most one point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cover {
    n: usize,
    flats: Vec<ElementSet>,
}

impl Cover {
    pub fn new(n: usize, mut flats: Vec<ElementSet>) -> Result<Self> {
        let ground = ElementSet::full(n);
        for (i, f) in flats.iter().enumerate() {
            if !f.is_subset(ground) || f.len() < 3 || f.len() + 1 > n {
                return Err(Error::InvalidDescriptor(format!("line {f} must have 3 to {} points of [{n}]", n - 1)));
            }
            if let Some(g) = flats[..i].iter().find(|g| g.intersection(*f).len() > 1) {
                return Err(Error::InvalidDescriptor(format!("lines {g} and {f} share two points")));
            }
        }
        flats.sort_by_key(|f| (f.len(), f.bits()));
        Ok(Cover { n, flats })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn flats(&self) -> &[ElementSet] {
        &self.flats
    }

    /// `t`, the number of lines.
    pub fn t(&self) -> usize {
        self.flats.len()
    }

    /// `t_k`, the number of lines with `k` points.
    pub fn t_k(&self, k: usize) -> usize {
        self.flats.iter().filter(|f| f.len() == k).count()
    }

    /// Points whose complement lies on one line, i.e. the coloops of the simple matroid.
    pub fn coloops(&self) -> ElementSet {
        if self.n == 3 {
            return ElementSet::full(3);
        }
        let ground = ElementSet::full(self.n);
        self.flats
            .iter()
            .filter(|f| f.len() + 1 == self.n)
            .map(|f| ground.difference(*f))
            .fold(ElementSet::empty(), ElementSet::union)
    }

    pub(crate) fn colored(&self, weights: &[usize]) -> ColoredSetSystem {
        ColoredSetSystem {
            point_colors: weights.iter().map(|&w| w as u32).collect(),
            sets: self.flats.iter().map(|&f| (0, f)).collect(),
        }
    }

    /// Relabels points; `perm[e - 1]` is the new label of `e`.
    pub fn relabeled(&self, perm: &[usize]) -> Cover {
        Cover::new(self.n, self.flats.iter().map(|f| f.permuted(perm)).collect()).expect("relabeling keeps validity")
    }

    /// The canonical representative of the isomorphism class.
    pub fn canonical(&self) -> Cover {
        let c = self.colored(&vec![0; self.n]).canonical();
        self.relabeled(&c.perm)
    }

    pub fn automorphisms(&self) -> u64 {
        self.colored(&vec![0; self.n]).canonical().automorphisms
    }
}

impl fmt::Display for Cover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, l) in self.flats.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "]/{}", self.n)
    }
}

/// A linear space on `[n]` (no size bound on lines) in canonical form.
fn canonical_space(n: usize, lines: Vec<ElementSet>) -> (CanonicalKey, Vec<ElementSet>) {
    let sys = ColoredSetSystem { point_colors: vec![0; n], sets: lines.iter().map(|&l| (0, l)).collect() };
    let c = sys.canonical();
    let mut out: Vec<ElementSet> = lines.iter().map(|l| l.permuted(&c.perm)).collect();
    out.sort_by_key(|f| (f.len(), f.bits()));
    (c.key, out)
}

/// All ways to add point `n + 1` to a linear space on `[n]`.
fn extensions(n: usize, lines: &[ElementSet], out: &mut Vec<Vec<ElementSet>>) {
    let new = n + 1;
    let collinear = |x: usize, y: usize| lines.iter().any(|l| l.contains(x) && l.contains(y));
    let m = lines.len();
    // choose pairwise disjoint lines to extend
    for mask in 0u64..1 << m {
        let chosen: Vec<ElementSet> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| lines[i]).collect();
        let mut covered = ElementSet::empty();
        let mut disjoint = true;
        for l in &chosen {
            if !covered.intersection(*l).is_empty() {
                disjoint = false;
                break;
            }
            covered = covered.union(*l);
        }
        if !disjoint {
            continue;
        }
        let free: Vec<usize> = (1..=n).filter(|&x| !covered.contains(x)).collect();
        // then a matching of free, non-collinear pairs, each forming a new 3-point line
        let mut pairs = Vec::new();
        matchings(&free, 0, ElementSet::empty(), &collinear, &mut pairs, &mut |pairs| {
            let mut next: Vec<ElementSet> =
                lines.iter().map(|&l| if chosen.contains(&l) { l.with(new) } else { l }).collect();
            next.extend(pairs.iter().map(|&(x, y)| ElementSet::from_iter([x, y, new])));
            out.push(next);
        });
    }
}

/// Receives each partial matching as it is extended.
type MatchingSink<'a> = dyn FnMut(&[(usize, usize)]) + 'a;

fn matchings(
    free: &[usize],
    start: usize,
    used: ElementSet,
    collinear: &dyn Fn(usize, usize) -> bool,
    pairs: &mut Vec<(usize, usize)>,
    emit: &mut MatchingSink,
) {
    emit(pairs);
    for a in start..free.len() {
        let x = free[a];
        if used.contains(x) {
            continue;
        }
        for &y in &free[a + 1..] {
            if used.contains(y) || collinear(x, y) {
                continue;
            }
            pairs.push((x, y));
            matchings(free, a + 1, used.with(x).with(y), collinear, pairs, emit);
            pairs.pop();
        }
    }
}

/// All linear spaces on `[i]` up to isomorphism, including the single full line.
pub fn linear_spaces(i: usize) -> Vec<Vec<ElementSet>> {
    let mut level: Vec<Vec<ElementSet>> = vec![vec![]];
    for n in 1..i {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        let mut raw = Vec::new();
        for space in &level {
            raw.clear();
            extensions(n, space, &mut raw);
            for cand in raw.drain(..) {
                let (key, canon) = canonical_space(n + 1, cand);
                if seen.insert(key) {
                    next.push(canon);
                }
            }
        }
        next.sort();
        level = next;
    }
    level
}

/// All covers on `[i]` up to isomorphism, in a fixed order.
pub fn cycle_covers(i: usize) -> Result<Vec<Cover>> {
    if i < 3 {
        return Err(Error::InvalidArguments(format!("covers need i >= 3, got {i}")));
    }
    let mut out: Vec<Cover> = linear_spaces(i)
        .into_iter()
        .filter(|lines| !(lines.len() == 1 && lines[0].len() == i))
        .map(|lines| Cover::new(i, lines))
        .collect::<Result<_>>()?;
    out.sort();
    Ok(out)
}

/// Counts labeled covers on `[i]` by brute force over all admissible line families.
pub fn count_labeled_covers(i: usize) -> u64 {
    let candidates: Vec<ElementSet> =
        (1u128..1 << i).map(ElementSet::from_bits).filter(|s| s.len() >= 3 && s.len() < i).collect();
    fn go(c: &[ElementSet], from: usize, chosen: &mut Vec<ElementSet>) -> u64 {
        let mut total = 1;
        for k in from..c.len() {
            if chosen.iter().all(|g| g.intersection(c[k]).len() <= 1) {
                chosen.push(c[k]);
                total += go(c, k + 1, chosen);
                chosen.pop();
            }
        }
        total
    }
    go(&candidates, 0, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> ElementSet {
        v.iter().copied().collect()
    }

    #[test]
    fn small_covers() {
        assert_eq!(cycle_covers(3).unwrap(), vec![Cover::new(3, vec![]).unwrap()]);
        let c4 = cycle_covers(4).unwrap();
        assert_eq!(c4.len(), 2);
        assert!(c4.iter().any(|c| c.t() == 1 && c.t_k(3) == 1));
        let target = Cover::new(5, vec![set(&[1, 2, 3]), set(&[3, 4, 5])]).unwrap().canonical();
        assert!(cycle_covers(5).unwrap().contains(&target));
    }

    #[test]
    fn counts_match_known_simple_rank3_counts() {
        let counts: Vec<usize> = (3..=8).map(|i| cycle_covers(i).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 9, 23, 68]);
    }

    #[test]
    fn orbit_counting_matches_brute_force() {
        for i in 3..=6 {
            let covers = cycle_covers(i).unwrap();
            let factorial: u64 = (1..=i as u64).product();
            let labeled: u64 = covers.iter().map(|c| factorial / c.automorphisms()).sum();
            assert_eq!(labeled, count_labeled_covers(i), "i = {i}");
        }
    }

    #[test]
    fn validation() {
        assert!(Cover::new(4, vec![set(&[1, 2, 3, 4])]).is_err());
        assert!(Cover::new(5, vec![set(&[1, 2, 3]), set(&[1, 2, 4])]).is_err());
        assert!(Cover::new(5, vec![set(&[1, 2])]).is_err());
    }

    #[test]
    fn coloops_of_covers() {
        assert_eq!(Cover::new(4, vec![set(&[1, 2, 3])]).unwrap().coloops(), set(&[4]));
        assert_eq!(Cover::new(3, vec![]).unwrap().coloops(), set(&[1, 2, 3]));
        assert!(Cover::new(5, vec![set(&[1, 2, 3])]).unwrap().coloops().is_empty());
    }
}
