//! Loopless rank 3 matroids under construction, and parallel insertion.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::closed_form_expansion;
use crate::lattice::rank_unchecked;
use crate::set::ElementSet;
use crate::types::{CyclicFlat, CyclicFlatLattice, ExpansionVector};

use super::rules::{predict, Prediction};

/// Counts derived from the lattice of a loopless rank 3 matroid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank3Stats {
    /// Rank 1 cyclic flats, i.e. parallel classes of size at least 2.
    pub classes: Vec<ElementSet>,
    /// Rank 2 cyclic flats that are not the union of two parallel classes.
    pub inseparable: Vec<ElementSet>,
    /// Whether each class lies inside some inseparable flat.
    pub contained: Vec<bool>,
    pub coloops: usize,
}

fn histogram<'a>(sizes: impl Iterator<Item = &'a ElementSet>) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for s in sizes {
        *out.entry(s.len()).or_insert(0) += 1;
    }
    out
}

impl Rank3Stats {
    pub fn from_lattice(z: &CyclicFlatLattice) -> Self {
        let classes: Vec<ElementSet> = z.flats().iter().filter(|f| f.rank == 1).map(|f| f.elements).collect();
        let inseparable: Vec<ElementSet> = z
            .flats()
            .iter()
            .filter(|f| f.rank == 2)
            .map(|f| f.elements)
            .filter(|&f| {
                let inside: Vec<&ElementSet> = classes.iter().filter(|c| c.is_subset(f)).collect();
                !(inside.len() == 2 && inside[0].union(*inside[1]) == f)
            })
            .collect();
        let contained = classes.iter().map(|c| inseparable.iter().any(|f| c.is_subset(*f))).collect();
        Rank3Stats { classes, inseparable, contained, coloops: z.coloops().len() }
    }

    /// `p`, the number of parallel classes.
    pub fn p(&self) -> usize {
        self.classes.len()
    }

    /// `p_k` by class size.
    pub fn p_k(&self) -> BTreeMap<usize, usize> {
        histogram(self.classes.iter())
    }

    /// `p^c_k`, contained classes by size.
    pub fn pc_k(&self) -> BTreeMap<usize, usize> {
        histogram(self.classes.iter().zip(&self.contained).filter(|(_, &c)| c).map(|(s, _)| s))
    }

    /// `p^u_k`, uncontained classes by size.
    pub fn pu_k(&self) -> BTreeMap<usize, usize> {
        histogram(self.classes.iter().zip(&self.contained).filter(|(_, &c)| !c).map(|(s, _)| s))
    }

    /// `t`, the number of inseparable flats.
    pub fn t(&self) -> usize {
        self.inseparable.len()
    }

    /// `t_k` by flat size.
    pub fn t_k(&self) -> BTreeMap<usize, usize> {
        histogram(self.inseparable.iter())
    }

    /// `f`, the number of inseparable flats containing `e`.
    pub fn f(&self, e: usize) -> usize {
        self.inseparable.iter().filter(|f| f.contains(e)).count()
    }

    /// The class containing `e`, if any.
    pub fn class_of(&self, e: usize) -> Option<(ElementSet, bool)> {
        self.classes.iter().zip(&self.contained).find(|(c, _)| c.contains(e)).map(|(&c, &b)| (c, b))
    }

    /// `p^e_k`: classes not inside any inseparable flat through `e`, by size.
    pub fn pe_k(&self, e: usize) -> BTreeMap<usize, usize> {
        let through: Vec<&ElementSet> = self.inseparable.iter().filter(|f| f.contains(e)).collect();
        histogram(self.classes.iter().filter(|c| !c.contains(e) && !through.iter().any(|f| c.is_subset(**f))))
    }

    /// `p^f_k`: classes inside the flat `f`, by size.
    pub fn pf_k(&self, f: ElementSet) -> BTreeMap<usize, usize> {
        histogram(self.classes.iter().filter(|c| c.is_subset(f)))
    }
}

/// Which insertion case applies to an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InsertionCase {
    /// The element is a coloop or lies only in the maximal cyclic flat.
    FreePoint,
    /// The element lies in inseparable flats but in no parallel class.
    InseparableOnly,
    /// The element lies in a class contained in an inseparable flat.
    ContainedClass,
    /// The element lies in a class contained in no inseparable flat.
    UncontainedClass,
}

impl InsertionCase {
    /// The case number of the update rule that covers this insertion.
    pub fn number(self) -> usize {
        match self {
            InsertionCase::FreePoint => 1,
            InsertionCase::InseparableOnly => 2,
            InsertionCase::ContainedClass => 3,
            InsertionCase::UncontainedClass => 4,
        }
    }
}

/// A loopless rank 3 matroid with its expansion kept in sync.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank3State {
    lattice: CyclicFlatLattice,
    stats: Rank3Stats,
    coeffs: ExpansionVector,
}

/// What happened during one insertion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InsertionReport {
    pub case: InsertionCase,
    pub exceptional: bool,
    /// The update rule's result, when one applies.
    pub rule: Option<ExpansionVector>,
}

impl InsertionReport {
    /// `None` if no update rule applies, otherwise whether it agrees.
    pub fn rule_agrees(&self, actual: &ExpansionVector) -> Option<bool> {
        self.rule.as_ref().map(|p| p == actual)
    }
}

impl Rank3State {
    pub fn new(lattice: CyclicFlatLattice) -> Result<Self> {
        if lattice.rank() != 3 {
            return Err(Error::UnsupportedRank(lattice.rank()));
        }
        if !lattice.loops().is_empty() {
            return Err(Error::Unsupported("states are loopless; loops are added at block level".into()));
        }
        let coeffs = closed_form_expansion(&lattice)?;
        let stats = Rank3Stats::from_lattice(&lattice);
        Ok(Rank3State { lattice, stats, coeffs })
    }

    pub fn lattice(&self) -> &CyclicFlatLattice {
        &self.lattice
    }

    pub fn stats(&self) -> &Rank3Stats {
        &self.stats
    }

    pub fn coeffs(&self) -> &ExpansionVector {
        &self.coeffs
    }

    pub fn n(&self) -> usize {
        self.lattice.n()
    }

    pub fn coloops(&self) -> usize {
        self.stats.coloops
    }

    pub fn classify(&self, e: usize) -> Result<InsertionCase> {
        if e == 0 || e > self.n() {
            return Err(Error::NotFound(e));
        }
        if let Some((_, contained)) = self.stats.class_of(e) {
            return Ok(if contained { InsertionCase::ContainedClass } else { InsertionCase::UncontainedClass });
        }
        Ok(if self.stats.f(e) > 0 { InsertionCase::InseparableOnly } else { InsertionCase::FreePoint })
    }

    /// Whether the exceptional rules rather than the general ones apply.
    pub fn is_exceptional(&self, case: InsertionCase) -> bool {
        let s = &self.stats;
        let single_uncontained = s.p() == 1 && !s.contained[0];
        match case {
            InsertionCase::FreePoint => s.p() == 0,
            InsertionCase::InseparableOnly => s.p() == 0 || single_uncontained,
            InsertionCase::ContainedClass => false,
            InsertionCase::UncontainedClass => s.p() == 1,
        }
    }
}

/// Adds element `n + 1` parallel to `e`.
pub fn insert_parallel(state: &Rank3State, e: usize) -> Result<Rank3State> {
    insert_parallel_with_report(state, e).map(|(s, _)| s)
}

/// As [`insert_parallel`], also reporting the case and the update rule's prediction.
///
/// The new lattice keeps every flat avoiding `e`, adds the new element to every flat
/// containing `e`, and adds `G + e + new` for each cyclic flat `G` avoiding `e` such that
/// `G + e` is a flat. Coefficients are then recomputed by the closed form.
pub fn insert_parallel_with_report(state: &Rank3State, e: usize) -> Result<(Rank3State, InsertionReport)> {
    let case = state.classify(e)?;
    let n = state.n();
    let new = n + 1;
    let old = state.lattice.flats();
    let ground = ElementSet::full(n);
    let mut flats: Vec<CyclicFlat> = old
        .iter()
        .map(|f| if f.elements.contains(e) { CyclicFlat::new(f.elements.with(new), f.rank) } else { *f })
        .collect();
    for g in old.iter().filter(|g| !g.elements.contains(e)) {
        let ge = g.elements.with(e);
        let r = rank_unchecked(old, ge);
        if r != g.rank + 1 {
            continue;
        }
        let closed = ground.difference(ge).iter().all(|x| rank_unchecked(old, ge.with(x)) > r);
        if closed {
            flats.push(CyclicFlat::new(ge.with(new), r));
        }
    }
    let lattice = CyclicFlatLattice::new_unchecked(new, flats);
    let next = Rank3State::new(lattice)?;
    let exceptional = state.is_exceptional(case);
    let rule = match predict(state, e, case, exceptional) {
        Prediction::Applies(ev) => Some(ev),
        Prediction::NotApplicable => None,
    };
    if let Some(p) = &rule {
        if p != &next.coeffs {
            log::debug!(
                "case {} update rule diverges at e = {e}: rule gives {p}, actual {}",
                case.number(),
                next.coeffs
            );
        }
    }
    Ok((next, InsertionReport { case, exceptional, rule }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::schubert_expansion_oracle;
    use crate::schubert::schubert_lattice;
    use crate::types::SchubertLabel;

    fn label(xs: &[usize], n: usize) -> SchubertLabel {
        SchubertLabel::new(xs.to_vec(), n).unwrap()
    }

    fn state_of(xs: &[usize], n: usize) -> Rank3State {
        Rank3State::new(schubert_lattice(&label(xs, n))).unwrap()
    }

    fn ev(n: usize, entries: &[(&[usize], i64)]) -> ExpansionVector {
        let mut out = ExpansionVector::new(3, n);
        for (xs, c) in entries {
            out.add(label(xs, n), *c);
        }
        out
    }

    #[test]
    fn free_point_insertion_with_one_class() {
        let s = state_of(&[1, 3, 4], 5);
        assert_eq!(s.stats().p(), 1);
        assert_eq!(s.classify(4).unwrap(), InsertionCase::FreePoint);
        let (next, report) = insert_parallel_with_report(&s, 4).unwrap();
        let want = ev(6, &[(&[1, 3, 5], 2), (&[1, 2, 5], -1)]);
        assert_eq!(next.coeffs(), &want);
        assert_eq!(report.rule_agrees(next.coeffs()), Some(true));
    }

    #[test]
    fn insertion_next_to_the_three_point_line() {
        // U_{2,3} plus a coloop; the new element doubles the coloop
        let s = state_of(&[1, 2, 4], 4);
        assert_eq!(s.classify(4).unwrap(), InsertionCase::FreePoint);
        assert!(s.is_exceptional(InsertionCase::FreePoint));
        let (next, report) = insert_parallel_with_report(&s, 4).unwrap();
        assert_eq!(next.coeffs(), &ev(5, &[(&[1, 2, 3], -1), (&[1, 3, 4], 1), (&[1, 2, 4], 1)]));
        assert_eq!(report.rule_agrees(next.coeffs()), Some(true));
    }

    #[test]
    fn insertion_on_the_three_point_line() {
        let s = state_of(&[1, 2, 4], 4);
        assert_eq!(s.classify(1).unwrap(), InsertionCase::InseparableOnly);
        let next = insert_parallel(&s, 1).unwrap();
        assert_eq!(next.coeffs(), &ev(5, &[(&[1, 3, 5], 1)]));
    }

    #[test]
    fn exceptional_free_point_on_uniform() {
        let s = state_of(&[1, 2, 3], 4);
        let (next, report) = insert_parallel_with_report(&s, 2).unwrap();
        assert!(report.exceptional);
        assert_eq!(next.coeffs(), &ev(5, &[(&[1, 3, 4], 1)]));
        assert_eq!(report.rule_agrees(next.coeffs()), Some(true));
    }

    #[test]
    fn coloop_insertion_matches_oracle() {
        // U_{3,3}: every element is a coloop
        let s = state_of(&[1, 2, 3], 3);
        let next = insert_parallel(&s, 3).unwrap();
        assert_eq!(next.coeffs(), &ev(4, &[(&[1, 3, 4], 1)]));
        assert_eq!(next.coloops(), 2);
    }

    #[test]
    fn insertion_agrees_with_oracle_on_schubert_states() {
        for n in 3..=6 {
            for l in crate::types::canonical_schubert_order(3, n).unwrap() {
                if l.xs()[0] != 1 {
                    continue;
                }
                let s = Rank3State::new(schubert_lattice(&l)).unwrap();
                for e in 1..=n {
                    let next = insert_parallel(&s, e).unwrap();
                    assert_eq!(next.coeffs(), &schubert_expansion_oracle(next.lattice()).unwrap(), "{l:?} at {e}");
                }
            }
        }
    }

    #[test]
    fn loops_are_rejected() {
        assert!(Rank3State::new(schubert_lattice(&label(&[2, 3, 4], 4))).is_err());
        assert!(state_of(&[1, 2, 3], 3).classify(4).is_err());
    }

    #[test]
    fn stats_of_two_lines() {
        let z = CyclicFlatLattice::new(
            5,
            vec![
                CyclicFlat::new(ElementSet::empty(), 0),
                CyclicFlat::new([1, 2, 3].into_iter().collect(), 2),
                CyclicFlat::new([3, 4, 5].into_iter().collect(), 2),
                CyclicFlat::new(ElementSet::full(5), 3),
            ],
        )
        .unwrap();
        let s = Rank3State::new(z).unwrap();
        assert_eq!(s.stats().t(), 2);
        assert_eq!(s.stats().f(3), 2);
        assert_eq!(s.stats().p(), 0);
        assert_eq!(s.coeffs(), &ev(5, &[(&[1, 2, 3], -1), (&[1, 2, 4], 2)]));
    }
}
