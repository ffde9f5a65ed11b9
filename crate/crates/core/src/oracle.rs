//! Brute-force enumeration of all rank 3 lattices of cyclic flats on small ground sets.
//!
//! Independent of covers and insertion: candidate flat families are searched directly,
//! filtered by the axioms, and deduplicated by canonical form.

use std::collections::HashSet;

use crate::canon::ColoredSetSystem;
use crate::error::{Error, Result};
use crate::expansion::schubert_expansion_oracle;
use crate::lattice::validate_z_axioms;
use crate::set::ElementSet;
use crate::types::{CyclicFlat, CyclicFlatLattice, ExpansionVector};

/// Largest ground set the brute-force search accepts.
pub const MAX_ORACLE_N: usize = 8;

/// All rank 3 lattices of cyclic flats on `[n]`, one per isomorphism class.
///
/// Loops are placed on `[1, l]` and coloops on `[n - c + 1, n]`, which loses no class.
pub fn enumerate_rank3_lattices(n: usize) -> Result<Vec<CyclicFlatLattice>> {
    if n > MAX_ORACLE_N {
        return Err(Error::UnsupportedSize { n, max: MAX_ORACLE_N });
    }
    if n < 3 {
        return Err(Error::InvalidArguments(format!("rank 3 needs n >= 3, got {n}")));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for loops in 0..=n - 3 {
        for c in 0..=3 {
            if loops + c > n {
                continue;
            }
            let bottom = ElementSet::interval(1, loops);
            let top = ElementSet::interval(1, n - c);
            let top_rank = 3 - c;
            if (top == bottom) != (top_rank == 0) {
                continue;
            }
            let candidates = candidates(bottom, top, top_rank);
            let mut chosen = Vec::new();
            search(&candidates, 0, bottom, &mut chosen, &mut |fam| {
                let mut flats = vec![CyclicFlat::new(bottom, 0)];
                flats.extend(fam.iter().cloned());
                if top != bottom {
                    flats.push(CyclicFlat::new(top, top_rank));
                }
                if validate_z_axioms(&flats, n).is_err() {
                    return;
                }
                let z = CyclicFlatLattice::new_unchecked(n, flats);
                if z.rank() != 3 {
                    return;
                }
                let sys = ColoredSetSystem {
                    point_colors: vec![0; n],
                    sets: z.flats().iter().map(|f| (f.rank as u32, f.elements)).collect(),
                };
                if seen.insert(sys.canonical().key) {
                    out.push(z);
                }
            });
        }
    }
    Ok(out)
}

/// Pairs `(set, rank)` strictly between the bottom and top that satisfy the rank gap axiom against both.
fn candidates(bottom: ElementSet, top: ElementSet, top_rank: usize) -> Vec<CyclicFlat> {
    let free = top.difference(bottom);
    let m = free.len();
    let members: Vec<usize> = free.to_vec();
    let mut out = Vec::new();
    for mask in 1u64..(1 << m) {
        let extra: ElementSet = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| members[i]).collect();
        let set = bottom.union(extra);
        if set == top {
            continue;
        }
        for rank in 1..top_rank {
            let gap_low = rank < extra.len();
            let gap_high = top_rank - rank < top.len() - set.len();
            if gap_low && gap_high {
                out.push(CyclicFlat::new(set, rank));
            }
        }
    }
    out.sort_by_key(|f| f.rank);
    out
}

/// Necessary conditions for adding `b` to a partial family. Rank 1 candidates come first,
/// so all classes are known by the time a rank 2 flat is tested.
fn compatible(chosen: &[CyclicFlat], b: &CyclicFlat, bottom: ElementSet) -> bool {
    chosen.iter().all(|a| {
        let meet = a.elements.intersection(b.elements);
        let outside = meet.difference(bottom);
        match (a.rank, b.rank) {
            (1, 1) => outside.is_empty(),
            (1, _) => outside.is_empty() || a.elements.is_subset(b.elements),
            // two lines meet in at most a point, or exactly in a parallel class
            _ => outside.len() <= 1 || chosen.iter().any(|c| c.rank == 1 && c.elements == meet),
        }
    })
}

fn search(
    c: &[CyclicFlat],
    from: usize,
    bottom: ElementSet,
    chosen: &mut Vec<CyclicFlat>,
    emit: &mut dyn FnMut(&[CyclicFlat]),
) {
    emit(chosen);
    for k in from..c.len() {
        if compatible(chosen, &c[k], bottom) {
            chosen.push(c[k]);
            search(c, k + 1, bottom, chosen, emit);
            chosen.pop();
        }
    }
}

/// Distinct expansions over all rank 3 classes on `[n]`, in canonical string order.
pub fn distinct_rank3_expansions(n: usize) -> Result<Vec<ExpansionVector>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for z in enumerate_rank3_lattices(n)? {
        let ev = schubert_expansion_oracle(&z)?;
        if seen.insert(ev.clone()) {
            out.push(ev);
        }
    }
    out.sort_by_cached_key(|e| e.to_string());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_class_counts() {
        // rank 3 matroids up to isomorphism: 1 on three elements, 4 on four, 13 on five
        assert_eq!(enumerate_rank3_lattices(3).unwrap().len(), 1);
        assert_eq!(enumerate_rank3_lattices(4).unwrap().len(), 4);
        assert_eq!(enumerate_rank3_lattices(5).unwrap().len(), 13);
    }

    #[test]
    #[ignore = "diagnostic"]
    fn print_counts() {
        for n in 3..=7 {
            let classes = enumerate_rank3_lattices(n).unwrap().len();
            let distinct = distinct_rank3_expansions(n).unwrap().len();
            let built = crate::rank3::build_o3(n).unwrap().ncols();
            println!("n={n} classes={classes} distinct={distinct} built={built}");
        }
    }

    #[test]
    fn size_limits() {
        assert!(enumerate_rank3_lattices(2).is_err());
        assert!(enumerate_rank3_lattices(MAX_ORACLE_N + 1).is_err());
    }
}
