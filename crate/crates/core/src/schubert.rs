//! Schubert matroids: their cyclic flats and the chain signature that names them.

use crate::error::{Error, Result};
use crate::set::ElementSet;
use crate::types::{CyclicFlat, CyclicFlatLattice, SchubertLabel};

/// The cyclic flats of `S(x)`, a chain of initial segments `[m]`.
///
/// `[m]` is a cyclic flat exactly when `m` is not in `x` and either `m + 1` is in `x` or `m = n`.
/// Its rank is the number of `x_i <= m`.
pub fn schubert_lattice(label: &SchubertLabel) -> CyclicFlatLattice {
    let n = label.n();
    let xs = label.xs();
    let flats = (0..=n)
        .filter(|&m| !xs.contains(&m) && (m == n || xs.contains(&(m + 1))))
        .map(|m| CyclicFlat::new(ElementSet::interval(1, m), xs.iter().filter(|&&x| x <= m).count()))
        .collect();
    CyclicFlatLattice::new_unchecked(n, flats)
}

/// The label of the Schubert matroid whose cyclic flats have the given `(size, rank)` chain.
///
/// Reads the lattice path: the first flat contributes horizontal steps, each later flat
/// contributes its rank jump as vertical steps followed by horizontal steps up to its size,
/// and the elements beyond the last flat are coloops. Vertical steps are the entries of `x`.
pub fn chain_to_schubert_label(chain: &[(usize, usize)], n: usize) -> Result<SchubertLabel> {
    let bad = |why: &str| Error::InvalidChain(format!("{chain:?} on [{n}]: {why}"));
    let &(s0, r0) = chain.first().ok_or_else(|| bad("empty chain"))?;
    if r0 != 0 {
        return Err(bad("the minimal flat must have rank 0"));
    }
    let mut xs = Vec::new();
    let (mut size, mut rank) = (s0, r0);
    for &(s, r) in &chain[1..] {
        if !(s > size && r > rank && r - rank < s - size) {
            return Err(bad("consecutive flats must satisfy 0 < rank gap < size gap"));
        }
        xs.extend(size + 1..=size + (r - rank));
        size = s;
        rank = r;
    }
    if size > n {
        return Err(bad("chain exceeds the ground set"));
    }
    xs.extend(size + 1..=n);
    if xs.is_empty() {
        return Err(bad("rank 0 has no Schubert label"));
    }
    SchubertLabel::new(xs, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::validate_z_axioms;
    use crate::types::canonical_schubert_order;

    fn label(xs: &[usize], n: usize) -> SchubertLabel {
        SchubertLabel::new(xs.to_vec(), n).unwrap()
    }

    #[test]
    fn lattice_of_u24_and_loops() {
        let z = schubert_lattice(&label(&[1, 2], 4));
        assert_eq!(z.flats().len(), 2);
        assert_eq!(z.rank(), 2);
        let z = schubert_lattice(&label(&[3, 4], 4));
        assert_eq!(z.flats(), &[CyclicFlat::new(ElementSet::interval(1, 2), 0)]);
        let z = schubert_lattice(&label(&[1, 2, 3], 3));
        assert_eq!(z.flats().len(), 1);
        assert!(z.flats()[0].is_empty());
    }

    #[test]
    fn examples() {
        assert_eq!(chain_to_schubert_label(&[(0, 0), (4, 2)], 4).unwrap(), label(&[1, 2], 4));
        assert_eq!(chain_to_schubert_label(&[(0, 0), (2, 1), (5, 3)], 5).unwrap(), label(&[1, 3, 4], 5));
        assert_eq!(chain_to_schubert_label(&[(2, 0)], 4).unwrap(), label(&[3, 4], 4));
        assert!(chain_to_schubert_label(&[(0, 0), (1, 1)], 3).is_err());
        assert!(chain_to_schubert_label(&[(0, 1)], 3).is_err());
        assert!(chain_to_schubert_label(&[], 3).is_err());
    }

    #[test]
    fn signature_roundtrip_all_labels() {
        for n in 1..=9 {
            for r in 1..=n.min(4) {
                for l in canonical_schubert_order(r, n).unwrap() {
                    let z = schubert_lattice(&l);
                    assert!(validate_z_axioms(z.flats(), n).is_ok(), "{l:?}");
                    assert_eq!(z.rank(), r);
                    let sig: Vec<_> = z.flats().iter().map(|f| (f.len(), f.rank)).collect();
                    assert_eq!(chain_to_schubert_label(&sig, n).unwrap(), l);
                }
            }
        }
    }
}
