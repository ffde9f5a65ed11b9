//! Domain types shared by all modules.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::validate_z_axioms;
use crate::set::{ElementSet, MAX_ELEMENTS};

/// The ground set `[n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArguments("ground set must be non-empty".into()));
        }
        if n > MAX_ELEMENTS {
            return Err(Error::UnsupportedSize { n, max: MAX_ELEMENTS });
        }
        Ok(GroundSet { n })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> ElementSet {
        ElementSet::full(self.n)
    }
}

/// A cyclic flat together with its rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicFlat {
    #[serde(rename = "set")]
    pub elements: ElementSet,
    pub rank: usize,
}

impl CyclicFlat {
    pub fn new(elements: ElementSet, rank: usize) -> Self {
        CyclicFlat { elements, rank }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// A matroid presented by its lattice of cyclic flats.
///
/// Flats are kept sorted by size, so the loop set comes first and the union of
/// all circuits last. Construction validates the cyclic flat axioms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicFlatLattice {
    ground: GroundSet,
    flats: Vec<CyclicFlat>,
    matroid_rank: usize,
}

impl CyclicFlatLattice {
    pub fn new(n: usize, flats: Vec<CyclicFlat>) -> Result<Self> {
        let ground = GroundSet::new(n)?;
        validate_z_axioms(&flats, n).map_err(Error::AxiomViolation)?;
        Ok(Self::from_validated(ground, flats))
    }

    /// Skips validation. Callers must only pass families that satisfy the axioms.
    pub(crate) fn new_unchecked(n: usize, flats: Vec<CyclicFlat>) -> Self {
        let ground = GroundSet::new(n).expect("ground set size checked by caller");
        debug_assert!(validate_z_axioms(&flats, n).is_ok(), "invalid lattice {flats:?}");
        Self::from_validated(ground, flats)
    }

    fn from_validated(ground: GroundSet, mut flats: Vec<CyclicFlat>) -> Self {
        flats.sort_by_key(|f| (f.elements.len(), f.elements));
        let top = flats.last().expect("validated lattice is non-empty");
        let matroid_rank = top.rank + ground.size() - top.len();
        CyclicFlatLattice { ground, flats, matroid_rank }
    }

    pub fn n(&self) -> usize {
        self.ground.size()
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn flats(&self) -> &[CyclicFlat] {
        &self.flats
    }

    pub fn rank(&self) -> usize {
        self.matroid_rank
    }

    /// The loop set, i.e. the minimal cyclic flat.
    pub fn bottom(&self) -> &CyclicFlat {
        &self.flats[0]
    }

    /// The union of all circuits, i.e. the maximal cyclic flat.
    pub fn top(&self) -> &CyclicFlat {
        self.flats.last().expect("non-empty")
    }

    pub fn loops(&self) -> ElementSet {
        self.bottom().elements
    }

    pub fn coloops(&self) -> ElementSet {
        self.ground.elements().difference(self.top().elements)
    }

    /// Relabels the ground set; `perm[e - 1]` is the new label of `e`.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let flats = self.flats.iter().map(|f| CyclicFlat::new(f.elements.permuted(perm), f.rank)).collect();
        Self::from_validated(self.ground, flats)
    }
}

/// Label `S(x_1, ..., x_r)` of a Schubert matroid on `[n]`.
///
/// The matroid has as bases the sets `{b_1 < ... < b_r}` with `b_i >= x_i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SchubertLabel {
    xs: Vec<usize>,
    n: usize,
}

impl SchubertLabel {
    pub fn new(xs: Vec<usize>, n: usize) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::InvalidArguments("label must have rank >= 1".into()));
        }
        if xs[0] < 1 || xs.windows(2).any(|w| w[0] >= w[1]) || *xs.last().unwrap() > n {
            return Err(Error::InvalidArguments(format!("label {xs:?} is not strictly increasing within [1, {n}]")));
        }
        Ok(SchubertLabel { xs, n })
    }

    pub fn xs(&self) -> &[usize] {
        &self.xs
    }

    pub fn rank(&self) -> usize {
        self.xs.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of loops, `x_1 - 1`.
    pub fn loops(&self) -> usize {
        self.xs[0] - 1
    }

    /// The label of the same matroid with one loop prepended.
    pub fn with_loop(&self) -> Self {
        SchubertLabel { xs: self.xs.iter().map(|x| x + 1).collect(), n: self.n + 1 }
    }

    /// The label of the same matroid with one coloop appended.
    pub fn with_coloop(&self) -> Self {
        let mut xs = self.xs.clone();
        xs.push(self.n + 1);
        SchubertLabel { xs, n: self.n + 1 }
    }
}

impl fmt::Display for SchubertLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S(")?;
        for (i, x) in self.xs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for SchubertLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}/{}", self.n)
    }
}

/// Parses `S(1,3,4)/5`, the form produced by `{:?}`. The `/n` suffix is mandatory.
impl FromStr for SchubertLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed Schubert label {s:?}"));
        let (body, n) = s.trim().rsplit_once('/').ok_or_else(bad)?;
        let n: usize = n.parse().map_err(|_| bad())?;
        let inner = body.strip_prefix("S(").and_then(|b| b.strip_suffix(')')).ok_or_else(bad)?;
        let xs = inner.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
        SchubertLabel::new(xs, n)
    }
}

impl Serialize for SchubertLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format!("{self:?}"))
    }
}

impl<'de> Deserialize<'de> for SchubertLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All `C(n, r)` labels of rank `r` on `[n]`, in descending lexicographic order.
///
/// This is the row order of every generated matrix.
pub fn canonical_schubert_order(r: usize, n: usize) -> Result<Vec<SchubertLabel>> {
    if r == 0 || r > n {
        return Err(Error::InvalidArguments(format!("need 1 <= r <= n, got r={r}, n={n}")));
    }
    let mut out = Vec::new();
    let mut xs: Vec<usize> = (n - r + 1..=n).collect();
    loop {
        out.push(SchubertLabel { xs: xs.clone(), n });
        // step to the lexicographic predecessor
        let mut i = r;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            let lower = if i == 0 { 1 } else { xs[i - 1] + 1 };
            if xs[i] > lower {
                xs[i] -= 1;
                for (j, x) in xs.iter_mut().enumerate().skip(i + 1) {
                    *x = n - (r - 1 - j);
                }
                break;
            }
        }
    }
}

/// Integer Schubert coefficients of one matroid, keyed by label.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExpansionVector {
    r: usize,
    n: usize,
    coeffs: BTreeMap<SchubertLabel, i64>,
}

impl ExpansionVector {
    pub fn new(r: usize, n: usize) -> Self {
        ExpansionVector { r, n, coeffs: BTreeMap::new() }
    }

    pub fn unit(label: SchubertLabel) -> Self {
        let mut v = Self::new(label.rank(), label.n());
        v.add(label, 1);
        v
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, label: &SchubertLabel) -> i64 {
        self.coeffs.get(label).copied().unwrap_or(0)
    }

    pub fn add(&mut self, label: SchubertLabel, delta: i64) {
        assert!(
            label.rank() == self.r && label.n() == self.n,
            "label {label:?} does not match expansion of rank {} on {}",
            self.r,
            self.n
        );
        if delta == 0 {
            return;
        }
        let entry = self.coeffs.entry(label);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let v = o.get().checked_add(delta).expect("coefficient overflow");
                if v == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(delta);
            }
        }
    }

    /// Nonzero entries in ascending label order.
    pub fn iter(&self) -> impl Iterator<Item = (&SchubertLabel, i64)> {
        self.coeffs.iter().map(|(k, &v)| (k, v))
    }

    /// Nonzero entries in canonical (descending) row order.
    pub fn iter_canonical(&self) -> impl Iterator<Item = (&SchubertLabel, i64)> {
        self.coeffs.iter().rev().map(|(k, &v)| (k, v))
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Sum of all coefficients.
    pub fn total(&self) -> i64 {
        self.coeffs.values().sum()
    }

    /// Dense vector over `order`.
    pub fn to_dense(&self, order: &[SchubertLabel]) -> Vec<i64> {
        order.iter().map(|l| self.get(l)).collect()
    }

    /// Rewrites every label through `f`, summing collisions.
    pub fn map_labels(&self, r: usize, n: usize, f: impl Fn(&SchubertLabel) -> SchubertLabel) -> Self {
        let mut out = Self::new(r, n);
        for (l, c) in self.iter() {
            out.add(f(l), c);
        }
        out
    }

    pub fn with_loop(&self) -> Self {
        self.map_labels(self.r, self.n + 1, SchubertLabel::with_loop)
    }

    pub fn with_coloop(&self) -> Self {
        self.map_labels(self.r + 1, self.n + 1, SchubertLabel::with_coloop)
    }
}

impl fmt::Display for ExpansionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (l, c)) in self.iter_canonical().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}: {c}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct ExpansionRepr {
    r: usize,
    n: usize,
    coeffs: Vec<(SchubertLabel, i64)>,
}

impl Serialize for ExpansionVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ExpansionRepr { r: self.r, n: self.n, coeffs: self.iter_canonical().map(|(l, c)| (l.clone(), c)).collect() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExpansionVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ExpansionRepr::deserialize(deserializer)?;
        let mut v = ExpansionVector::new(repr.r, repr.n);
        for (l, c) in repr.coeffs {
            if l.rank() != repr.r || l.n() != repr.n {
                return Err(serde::de::Error::custom(format!("label {l:?} out of place")));
            }
            v.add(l, c);
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(r: usize, n: usize) -> Vec<String> {
        canonical_schubert_order(r, n).unwrap().iter().map(|l| l.to_string()).collect()
    }

    #[test]
    fn order_rank2_on_4() {
        assert_eq!(labels(2, 4), ["S(3,4)", "S(2,4)", "S(2,3)", "S(1,4)", "S(1,3)", "S(1,2)"]);
    }

    #[test]
    fn order_rank3_on_5_descends() {
        assert_eq!(
            labels(3, 5),
            [
                "S(3,4,5)", "S(2,4,5)", "S(2,3,5)", "S(2,3,4)", "S(1,4,5)", "S(1,3,5)", "S(1,3,4)", "S(1,2,5)",
                "S(1,2,4)", "S(1,2,3)"
            ]
        );
    }

    #[test]
    fn order_trivial_and_errors() {
        assert_eq!(labels(1, 1), ["S(1)"]);
        assert!(canonical_schubert_order(3, 2).is_err());
        assert!(canonical_schubert_order(0, 2).is_err());
    }

    #[test]
    fn order_lengths_and_loopless_counts() {
        fn binom(n: usize, k: usize) -> usize {
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        }
        for n in 1..=10 {
            for r in 1..=n {
                let order = canonical_schubert_order(r, n).unwrap();
                assert_eq!(order.len(), binom(n, r));
                assert!(order.windows(2).all(|w| w[0] > w[1]));
                let loopless = order.iter().filter(|l| l.xs()[0] == 1).count();
                assert_eq!(loopless, binom(n - 1, r - 1));
            }
        }
    }

    #[test]
    fn label_parse_roundtrip() {
        let l = SchubertLabel::new(vec![1, 3, 4], 5).unwrap();
        assert_eq!(format!("{l:?}").parse::<SchubertLabel>().unwrap(), l);
        assert!("S(2,1)/4".parse::<SchubertLabel>().is_err());
        assert!("S(1,2)".parse::<SchubertLabel>().is_err());
    }

    #[test]
    fn expansion_drops_zeros() {
        let l = SchubertLabel::new(vec![1, 2], 4).unwrap();
        let mut v = ExpansionVector::new(2, 4);
        v.add(l.clone(), 2);
        v.add(l.clone(), -2);
        assert!(v.is_zero());
        v.add(l.clone(), -1);
        assert_eq!(v.get(&l), -1);
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(serde_json::from_str::<ExpansionVector>(&json).unwrap(), v);
    }
}
