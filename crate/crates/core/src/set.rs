//! Small subsets of a ground set `[n]`, `n <= 128`, stored as bit masks.
//!
//! Elements are 1-indexed to match the usual notation for `[n]`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest ground set an [`ElementSet`] can address.
pub const MAX_ELEMENTS: usize = 128;

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet(u128);

impl ElementSet {
    pub const fn empty() -> Self {
        ElementSet(0)
    }

    /// The full ground set `[n]`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_ELEMENTS, "ground set too large");
        if n == MAX_ELEMENTS {
            ElementSet(u128::MAX)
        } else {
            ElementSet((1u128 << n) - 1)
        }
    }

    /// The interval `[a, b]`; empty when `a > b`.
    pub fn interval(a: usize, b: usize) -> Self {
        if a > b || b == 0 {
            return Self::empty();
        }
        let a = a.max(1);
        Self::full(b).difference(Self::full(a - 1))
    }

    pub fn singleton(e: usize) -> Self {
        assert!((1..=MAX_ELEMENTS).contains(&e), "element out of range");
        ElementSet(1u128 << (e - 1))
    }

    pub fn from_bits(bits: u128) -> Self {
        ElementSet(bits)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn insert(&mut self, e: usize) {
        *self = self.union(Self::singleton(e));
    }

    pub fn remove(&mut self, e: usize) {
        *self = self.difference(Self::singleton(e));
    }

    pub fn with(self, e: usize) -> Self {
        self.union(Self::singleton(e))
    }

    pub fn contains(self, e: usize) -> bool {
        (1..=MAX_ELEMENTS).contains(&e) && self.0 & (1u128 << (e - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: Self) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn union(self, other: Self) -> Self {
        ElementSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ElementSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ElementSet(self.0 & !other.0)
    }

    /// Largest element, if any.
    pub fn max_element(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(128 - self.0.leading_zeros() as usize)
        }
    }

    /// Elements in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(tz + 1)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Image under a permutation given as `perm[e - 1] = image of e`.
    pub fn permuted(self, perm: &[usize]) -> Self {
        self.iter().map(|e| perm[e - 1]).collect()
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ElementSet::empty();
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for ElementSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ElementSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(deserializer)?;
        if let Some(&bad) = v.iter().find(|&&e| e == 0 || e > MAX_ELEMENTS) {
            return Err(serde::de::Error::custom(format!("element {bad} out of range")));
        }
        Ok(v.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a: ElementSet = [1, 2, 5].into_iter().collect();
        assert_eq!(a.len(), 3);
        assert!(a.contains(5));
        assert!(!a.contains(3));
        assert_eq!(a.to_vec(), vec![1, 2, 5]);
        assert_eq!(a.max_element(), Some(5));
        assert!(ElementSet::interval(1, 2).is_proper_subset(a));
        assert_eq!(ElementSet::interval(3, 2), ElementSet::empty());
        assert_eq!(ElementSet::full(4).difference(a).to_vec(), vec![3, 4]);
        assert_eq!(format!("{a}"), "{1,2,5}");
    }

    #[test]
    fn full_128() {
        assert_eq!(ElementSet::full(128).len(), 128);
        assert!(ElementSet::full(128).contains(128));
    }

    #[test]
    fn permuted_maps_elements() {
        let a: ElementSet = [1, 3].into_iter().collect();
        assert_eq!(a.permuted(&[2, 1, 4, 3]).to_vec(), vec![2, 4]);
    }
}
