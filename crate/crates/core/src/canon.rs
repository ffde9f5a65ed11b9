//! Canonical forms of small colored set systems.
//!
//! Points carry colors, sets carry colors. The canonical form is the lexicographically
//! smallest relabeled image over all relabelings that respect an invariant partition of
//! the points obtained by color refinement. Twins (same color, same memberships) are
//! kept in increasing order, which loses nothing since swapping them fixes the system.

use std::collections::BTreeMap;

use crate::set::ElementSet;

/// Points `1..=n` with colors, and colored subsets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColoredSetSystem {
    pub point_colors: Vec<u32>,
    pub sets: Vec<(u32, ElementSet)>,
}

/// Canonical image: point colors by new position, then the sorted colored sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    pub point_colors: Vec<u32>,
    pub sets: Vec<(u32, u128)>,
}

/// The canonical key, one relabeling achieving it and the automorphism group order.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub key: CanonicalKey,
    /// `perm[e - 1]` is the canonical label of point `e`.
    pub perm: Vec<usize>,
    pub automorphisms: u64,
}

impl ColoredSetSystem {
    pub fn n(&self) -> usize {
        self.point_colors.len()
    }

    /// Iterated refinement of point colors by the colored sets through each point.
    fn refined_colors(&self) -> Vec<usize> {
        let n = self.n();
        let mut colors: Vec<usize> = dense_ranks(&self.point_colors);
        let mut classes = count_distinct(&colors);
        loop {
            let set_sig: Vec<(u32, Vec<usize>)> = self
                .sets
                .iter()
                .map(|&(c, s)| {
                    let mut members: Vec<usize> = s.iter().map(|e| colors[e - 1]).collect();
                    members.sort_unstable();
                    (c, members)
                })
                .collect();
            let set_ids = dense_ranks(&set_sig);
            let point_sig: Vec<(usize, Vec<usize>)> = (1..=n)
                .map(|e| {
                    let mut through: Vec<usize> =
                        self.sets.iter().zip(&set_ids).filter(|((_, s), _)| s.contains(e)).map(|(_, &id)| id).collect();
                    through.sort_unstable();
                    (colors[e - 1], through)
                })
                .collect();
            let next = dense_ranks(&point_sig);
            let next_classes = count_distinct(&next);
            colors = next;
            if next_classes == classes {
                return colors;
            }
            classes = next_classes;
        }
    }

    pub fn canonical(&self) -> Canonical {
        let n = self.n();
        let colors = self.refined_colors();
        // points sorted by refined color give the target block of each point
        let mut order: Vec<usize> = (1..=n).collect();
        order.sort_by_key(|&e| (colors[e - 1], e));
        let block_of_pos: Vec<usize> = order.iter().map(|&e| colors[e - 1]).collect();

        // twin[e] = the previous twin of e, if any
        let membership = |e: usize| -> Vec<usize> {
            self.sets.iter().enumerate().filter(|(_, (_, s))| s.contains(e)).map(|(i, _)| i).collect()
        };
        let members: Vec<Vec<usize>> = (1..=n).map(membership).collect();
        let mut prev_twin = vec![None; n + 1];
        let mut twin_groups: BTreeMap<(u32, &Vec<usize>), Vec<usize>> = BTreeMap::new();
        for e in 1..=n {
            let g = twin_groups.entry((self.point_colors[e - 1], &members[e - 1])).or_default();
            prev_twin[e] = g.last().copied();
            g.push(e);
        }
        let twin_factor: u64 = twin_groups.values().map(|g| (1..=g.len() as u64).product::<u64>()).product();

        let mut search = Search {
            sys: self,
            colors: &colors,
            block_of_pos: &block_of_pos,
            prev_twin: &prev_twin,
            perm: vec![0; n],
            used: vec![false; n + 1],
            pos_of: vec![usize::MAX; n + 1],
            best: None,
            hits: 0,
        };
        search.assign(0);
        let (key, perm) = search.best.expect("at least one relabeling");
        Canonical { key, perm, automorphisms: search.hits * twin_factor }
    }
}

struct Search<'a> {
    sys: &'a ColoredSetSystem,
    colors: &'a [usize],
    block_of_pos: &'a [usize],
    prev_twin: &'a [Option<usize>],
    // perm[pos] = point placed at position pos
    perm: Vec<usize>,
    used: Vec<bool>,
    pos_of: Vec<usize>,
    best: Option<(CanonicalKey, Vec<usize>)>,
    hits: u64,
}

impl Search<'_> {
    fn assign(&mut self, pos: usize) {
        let n = self.perm.len();
        if pos == n {
            self.finish();
            return;
        }
        for e in 1..=n {
            if self.used[e] || self.colors[e - 1] != self.block_of_pos[pos] {
                continue;
            }
            if let Some(t) = self.prev_twin[e] {
                if !self.used[t] {
                    continue;
                }
            }
            self.used[e] = true;
            self.perm[pos] = e;
            self.pos_of[e] = pos;
            self.assign(pos + 1);
            self.used[e] = false;
        }
    }

    fn finish(&mut self) {
        let mut sets: Vec<(u32, u128)> = self
            .sys
            .sets
            .iter()
            .map(|&(c, s)| (c, s.iter().fold(0u128, |acc, e| acc | 1u128 << self.pos_of[e])))
            .collect();
        sets.sort_unstable();
        let point_colors: Vec<u32> = self.perm.iter().map(|&e| self.sys.point_colors[e - 1]).collect();
        let key = CanonicalKey { point_colors, sets };
        match &self.best {
            Some((b, _)) if *b < key => {}
            Some((b, _)) if *b == key => self.hits += 1,
            _ => {
                let mut perm = vec![0; self.perm.len()];
                for (pos, &e) in self.perm.iter().enumerate() {
                    perm[e - 1] = pos + 1;
                }
                self.best = Some((key, perm));
                self.hits = 1;
            }
        }
    }
}

/// Replaces each value by its rank among the distinct values.
fn dense_ranks<T: Ord + Clone>(values: &[T]) -> Vec<usize> {
    let mut distinct: Vec<T> = values.to_vec();
    distinct.sort();
    distinct.dedup();
    values.iter().map(|v| distinct.binary_search(v).expect("present")).collect()
}

fn count_distinct(values: &[usize]) -> usize {
    let mut v = values.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(n: usize, sets: &[&[usize]]) -> ColoredSetSystem {
        ColoredSetSystem {
            point_colors: vec![0; n],
            sets: sets.iter().map(|s| (0, s.iter().copied().collect())).collect(),
        }
    }

    fn relabel(s: &ColoredSetSystem, perm: &[usize]) -> ColoredSetSystem {
        let mut colors = vec![0; s.n()];
        for (i, &c) in s.point_colors.iter().enumerate() {
            colors[perm[i] - 1] = c;
        }
        ColoredSetSystem { point_colors: colors, sets: s.sets.iter().map(|&(c, x)| (c, x.permuted(perm))).collect() }
    }

    #[test]
    fn isomorphic_systems_agree() {
        let a = sys(5, &[&[1, 2, 3], &[3, 4, 5]]);
        let b = sys(5, &[&[1, 4, 5], &[2, 3, 5]]);
        assert_eq!(a.canonical().key, b.canonical().key);
        let c = sys(5, &[&[1, 2, 3], &[1, 2, 4, 5]]);
        assert_ne!(a.canonical().key, c.canonical().key);
    }

    #[test]
    fn perm_realises_key() {
        let a = sys(6, &[&[1, 2, 3], &[3, 4, 5], &[1, 6, 5]]);
        let can = a.canonical();
        let img = relabel(&a, &can.perm);
        let mut sets: Vec<(u32, u128)> = img.sets.iter().map(|&(c, s)| (c, s.bits())).collect();
        sets.sort_unstable();
        assert_eq!(sets, can.key.sets);
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(sys(4, &[]).canonical().automorphisms, 24);
        assert_eq!(sys(4, &[&[1, 2, 3]]).canonical().automorphisms, 6);
        // two lines through a common point: swap the lines, swap within each line
        assert_eq!(sys(5, &[&[1, 2, 3], &[3, 4, 5]]).canonical().automorphisms, 8);
        let fano = sys(7, &[&[1, 2, 3], &[1, 4, 5], &[1, 6, 7], &[2, 4, 6], &[2, 5, 7], &[3, 4, 7], &[3, 5, 6]]);
        assert_eq!(fano.canonical().automorphisms, 168);
    }

    #[test]
    fn colors_distinguish() {
        let mut a = sys(3, &[]);
        let mut b = sys(3, &[]);
        a.point_colors = vec![2, 1, 1];
        b.point_colors = vec![1, 1, 2];
        assert_eq!(a.canonical().key, b.canonical().key);
        b.point_colors = vec![1, 2, 2];
        assert_ne!(a.canonical().key, b.canonical().key);
    }
}
