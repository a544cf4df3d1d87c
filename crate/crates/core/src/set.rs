//! Word-sized vertex sets and ordered edge sets.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest supported vertex count; a [`VertexSet`] is one `u64`.
pub const MAX_VERTICES: usize = 64;

/// A set of vertex indices in `0..64`, stored as a bitmask.
///
/// Ordering is by the raw mask, which is the "lexicographic by bitmask"
/// order used for every deterministic tie-break in the crate.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    #[inline]
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        if n == MAX_VERTICES {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    #[inline]
    pub fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 >> v & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    #[inline]
    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1u64 << v)
    }

    #[inline]
    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1u64 << v))
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest member.
    #[inline]
    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    pub fn iter(self) -> Members {
        Members(self.0)
    }

    /// Every subset of `self` (including the empty set), in increasing mask order.
    pub fn subsets(self) -> Subsets {
        Subsets { universe: self.0, next: Some(0) }
    }

    /// The `count` smallest members, or `None` if there are fewer.
    pub fn lowest(self, count: usize) -> Option<VertexSet> {
        let mut out = VertexSet::EMPTY;
        for v in self.iter().take(count) {
            out.insert(v);
        }
        (out.len() == count).then_some(out)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl<'a> FromIterator<&'a usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = &'a usize>>(iter: I) -> Self {
        iter.into_iter().copied().collect()
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = Members;
    fn into_iter(self) -> Members {
        self.iter()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

// Serialized as a sorted list of indices so files stay readable.
impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let items = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = items.iter().find(|&&v| v >= MAX_VERTICES) {
            return Err(serde::de::Error::custom(format!("vertex index {bad} out of range")));
        }
        Ok(items.into_iter().collect())
    }
}

pub struct Members(u64);

impl Iterator for Members {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

/// Subset enumeration via the `(s - u) & u` successor trick.
pub struct Subsets {
    universe: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        let cur = self.next?;
        let succ = cur.wrapping_sub(self.universe) & self.universe;
        self.next = (succ != 0).then_some(succ);
        Some(VertexSet(cur))
    }
}

/// An unordered vertex pair stored with `u < v`.
pub type Edge = (usize, usize);

#[inline]
pub fn edge(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A set of undirected edges in canonical `(min, max)` form.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct EdgeSet(BTreeSet<Edge>);

impl EdgeSet {
    pub fn new() -> Self {
        EdgeSet(BTreeSet::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn insert(&mut self, u: usize, v: usize) -> bool {
        assert_ne!(u, v, "edge sets hold no loops");
        self.0.insert(edge(u, v))
    }

    pub fn remove(&mut self, u: usize, v: usize) -> bool {
        self.0.remove(&edge(u, v))
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.0.contains(&edge(u, v))
    }

    pub fn iter(&self) -> impl Iterator<Item = Edge> + '_ {
        self.0.iter().copied()
    }

    /// Edges present in exactly one of `self` and `other`.
    pub fn symmetric_difference(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet(self.0.symmetric_difference(&other.0).copied().collect())
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet(self.0.union(&other.0).copied().collect())
    }

    pub fn degree(&self, v: usize) -> usize {
        self.0.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Degree of every vertex in `0..n`.
    pub fn degrees(&self, n: usize) -> Vec<usize> {
        let mut deg = vec![0; n];
        for (u, v) in self.iter() {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Vertices incident to at least one edge.
    pub fn touched(&self) -> VertexSet {
        self.iter().flat_map(|(u, v)| [u, v]).collect()
    }

    pub fn to_vec(&self) -> Vec<Edge> {
        self.iter().collect()
    }
}

impl FromIterator<Edge> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        let mut s = EdgeSet::new();
        for (u, v) in iter {
            s.insert(u, v);
        }
        s
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for EdgeSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(|(u, v)| [u, v]))
    }
}

impl<'de> Deserialize<'de> for EdgeSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs = Vec::<[usize; 2]>::deserialize(d)?;
        let mut out = EdgeSet::new();
        for [u, v] in pairs {
            if u == v {
                return Err(serde::de::Error::custom(format!("loop at vertex {u}")));
            }
            out.insert(u, v);
        }
        Ok(out)
    }
}

/// Free-standing form of [`EdgeSet::symmetric_difference`].
pub fn symmetric_difference(a: &EdgeSet, b: &EdgeSet) -> EdgeSet {
    a.symmetric_difference(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_cover_power_set() {
        let u = VertexSet::from_iter([1usize, 3, 4]);
        let all: Vec<_> = u.subsets().collect();
        assert_eq!(all.len(), 8);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.iter().all(|s| s.is_subset(u)));
        assert_eq!(VertexSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn full_word() {
        assert_eq!(VertexSet::full(64).len(), 64);
        assert_eq!(VertexSet::full(0), VertexSet::EMPTY);
        assert_eq!(VertexSet::full(3).to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn lowest_members() {
        let s = VertexSet::from_iter([0usize, 2, 5, 7]);
        assert_eq!(s.lowest(2), Some(VertexSet::from_iter([0usize, 2])));
        assert_eq!(s.lowest(5), None);
    }

    #[test]
    fn symmetric_difference_prism_instance() {
        // matching edge {1,4} (0-indexed) cancels against the augmenting path 0-1-4-5
        let a: EdgeSet = [(0, 1), (1, 4), (4, 5)].into_iter().collect();
        let b: EdgeSet = [(1, 4)].into_iter().collect();
        let expected: EdgeSet = [(0, 1), (4, 5)].into_iter().collect();
        assert_eq!(symmetric_difference(&a, &b), expected);
        assert!(symmetric_difference(&a, &a).is_empty());
        assert_eq!(symmetric_difference(&a, &EdgeSet::new()), a);
    }

    #[test]
    fn serde_shapes() {
        let s = VertexSet::from_iter([4usize, 1]);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[1,4]");
        let e: EdgeSet = [(3, 1)].into_iter().collect();
        assert_eq!(serde_json::to_string(&e).unwrap(), "[[1,3]]");
        assert!(serde_json::from_str::<VertexSet>("[70]").is_err());
    }
}
