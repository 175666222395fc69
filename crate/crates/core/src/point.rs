use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A point of the domain, identified by its position in the structure's
/// canonical enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point(pub u64);

impl Point {
    pub fn index(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u{}", self.0)
    }
}

/// The first `n` points of the enumeration.
pub fn window(n: usize) -> impl Iterator<Item = Point> {
    (0..n as u64).map(Point)
}

/// Sorted, duplicate-free finite set of points.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FiniteSet(Vec<Point>);

impl FiniteSet {
    pub fn new() -> Self {
        FiniteSet(Vec::new())
    }

    pub fn singleton(p: Point) -> Self {
        FiniteSet(vec![p])
    }

    pub fn from_indices<I: IntoIterator<Item = u64>>(it: I) -> Self {
        it.into_iter().map(Point).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.0.binary_search(&p).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Point> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Point] {
        &self.0
    }

    pub fn insert(&mut self, p: Point) -> bool {
        match self.0.binary_search(&p) {
            Ok(_) => false,
            Err(i) => {
                self.0.insert(i, p);
                true
            }
        }
    }

    pub fn remove(&mut self, p: Point) -> bool {
        match self.0.binary_search(&p) {
            Ok(i) => {
                self.0.remove(i);
                true
            }
            Err(_) => false,
        }
    }

    pub fn with(&self, p: Point) -> Self {
        let mut s = self.clone();
        s.insert(p);
        s
    }

    pub fn union(&self, other: &FiniteSet) -> Self {
        self.iter().chain(other.iter()).collect()
    }

    pub fn intersection(&self, other: &FiniteSet) -> Self {
        self.iter().filter(|p| other.contains(*p)).collect()
    }

    pub fn difference(&self, other: &FiniteSet) -> Self {
        self.iter().filter(|p| !other.contains(*p)).collect()
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.iter().all(|p| other.contains(p))
    }

    pub fn is_disjoint(&self, other: &FiniteSet) -> bool {
        self.iter().all(|p| !other.contains(p))
    }

    pub fn greatest(&self) -> Option<Point> {
        self.0.last().copied()
    }

    /// All subsets of size at most `cap`, smallest first, then
    /// lexicographic by enumeration index.
    pub fn subsets_up_to(&self, cap: usize) -> Vec<FiniteSet> {
        fn combos(items: &[Point], k: usize, start: usize, cur: &mut Vec<Point>, out: &mut Vec<FiniteSet>) {
            if cur.len() == k {
                out.push(FiniteSet(cur.clone()));
                return;
            }
            for i in start..items.len() {
                cur.push(items[i]);
                combos(items, k, i + 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        for k in 0..=cap.min(self.len()) {
            combos(&self.0, k, 0, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl FromIterator<Point> for FiniteSet {
    fn from_iter<T: IntoIterator<Item = Point>>(iter: T) -> Self {
        let mut v: Vec<Point> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        FiniteSet(v)
    }
}

impl<'a> IntoIterator for &'a FiniteSet {
    type Item = &'a Point;
    type IntoIter = std::slice::Iter<'a, Point>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// A finite partial injection on the domain.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialMap {
    pairs: Vec<(Point, Point)>,
    #[serde(skip)]
    fwd: HashMap<Point, Point>,
    #[serde(skip)]
    inv: HashMap<Point, Point>,
}

impl PartialMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a map, rejecting repeated sources or targets.
    pub fn from_pairs<I: IntoIterator<Item = (Point, Point)>>(pairs: I) -> Result<Self, Error> {
        let mut m = PartialMap::new();
        for (a, b) in pairs {
            m.insert(a, b)?;
        }
        Ok(m)
    }

    pub fn identity(set: &FiniteSet) -> Self {
        let mut m = PartialMap::new();
        for p in set.iter() {
            m.push_unchecked(p, p);
        }
        m
    }

    pub fn insert(&mut self, a: Point, b: Point) -> Result<(), Error> {
        if let Some(&old) = self.fwd.get(&a) {
            if old == b {
                return Ok(());
            }
            return Err(Error::Precondition(format!("{a} already maps to {old}")));
        }
        if let Some(&old) = self.inv.get(&b) {
            return Err(Error::Precondition(format!("{b} is already the image of {old}")));
        }
        self.push_unchecked(a, b);
        Ok(())
    }

    fn push_unchecked(&mut self, a: Point, b: Point) {
        self.pairs.push((a, b));
        self.fwd.insert(a, b);
        self.inv.insert(b, a);
    }

    /// `self ∪ {a ↦ b}`, or `None` when that breaks functionality or injectivity.
    pub fn extended(&self, a: Point, b: Point) -> Option<Self> {
        let mut m = self.clone();
        m.insert(a, b).ok()?;
        Some(m)
    }

    pub fn get(&self, a: Point) -> Option<Point> {
        self.fwd.get(&a).copied()
    }

    pub fn preimage(&self, b: Point) -> Option<Point> {
        self.inv.get(&b).copied()
    }

    pub fn in_domain(&self, a: Point) -> bool {
        self.fwd.contains_key(&a)
    }

    pub fn in_range(&self, b: Point) -> bool {
        self.inv.contains_key(&b)
    }

    pub fn pairs(&self) -> &[(Point, Point)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn domain(&self) -> FiniteSet {
        self.pairs.iter().map(|p| p.0).collect()
    }

    pub fn range(&self) -> FiniteSet {
        self.pairs.iter().map(|p| p.1).collect()
    }

    pub fn restrict(&self, keep: &FiniteSet) -> Self {
        let mut m = PartialMap::new();
        for &(a, b) in &self.pairs {
            if keep.contains(a) {
                m.push_unchecked(a, b);
            }
        }
        m
    }

    pub fn inverse(&self) -> Self {
        let mut m = PartialMap::new();
        for &(a, b) in &self.pairs {
            m.push_unchecked(b, a);
        }
        m
    }

    /// Rebuilds lookup tables after deserialization.
    pub fn reindex(self) -> Result<Self, Error> {
        PartialMap::from_pairs(self.pairs)
    }
}

/// Numeric bijections used by the point encodings.
pub mod codes {
    /// Cantor pairing ℕ² → ℕ.
    pub fn cantor(a: u64, b: u64) -> Option<u64> {
        let s = (a as u128) + (b as u128);
        let v = s * (s + 1) / 2 + b as u128;
        u64::try_from(v).ok()
    }

    pub fn uncantor(z: u64) -> (u64, u64) {
        let z = z as u128;
        let mut w = (((8 * z + 1) as f64).sqrt() as u128).saturating_sub(1) / 2;
        while (w + 1) * (w + 2) / 2 <= z {
            w += 1;
        }
        while w * (w + 1) / 2 > z {
            w -= 1;
        }
        let t = w * (w + 1) / 2;
        let b = z - t;
        let a = w - b;
        (a as u64, b as u64)
    }

    /// 0, 1, −1, 2, −2, … ↔ 0, 1, 2, 3, 4, …
    pub fn zigzag(n: u64) -> i64 {
        if n % 2 == 1 {
            (n / 2 + 1) as i64
        } else {
            -((n / 2) as i64)
        }
    }

    pub fn unzigzag(v: i64) -> Option<u64> {
        if v > 0 {
            (v as u64).checked_mul(2).map(|x| x - 1)
        } else {
            v.unsigned_abs().checked_mul(2)
        }
    }

    /// Bijection from finite sequences of naturals to ℕ:
    /// `[] ↦ 0`, `a :: rest ↦ 2^a (2 code(rest) + 1)`.
    pub fn seq_code(seq: &[u64]) -> Option<u64> {
        let mut acc: u64 = 0;
        for &a in seq.iter().rev() {
            let odd = acc.checked_mul(2)?.checked_add(1)?;
            if a >= 64 || odd.leading_zeros() < a as u32 {
                return None;
            }
            acc = odd << a;
        }
        Some(acc)
    }

    pub fn seq_decode(mut n: u64) -> Vec<u64> {
        let mut out = Vec::new();
        while n != 0 {
            let a = n.trailing_zeros() as u64;
            out.push(a);
            n = ((n >> a) - 1) / 2;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::codes::*;
    use super::*;

    #[test]
    fn cantor_roundtrip() {
        for z in 0..5000 {
            let (a, b) = uncantor(z);
            assert_eq!(cantor(a, b), Some(z));
        }
        assert_eq!(cantor(1, 0), Some(1));
        assert_eq!(cantor(0, 1), Some(2));
    }

    #[test]
    fn zigzag_roundtrip() {
        let first: Vec<i64> = (0..5).map(zigzag).collect();
        assert_eq!(first, vec![0, 1, -1, 2, -2]);
        for n in 0..1000 {
            assert_eq!(unzigzag(zigzag(n)), Some(n));
        }
    }

    #[test]
    fn seq_code_roundtrip() {
        for n in 0..4000 {
            let s = seq_decode(n);
            assert_eq!(seq_code(&s), Some(n));
        }
    }

    #[test]
    fn subsets_smallest_first() {
        let s = FiniteSet::from_indices([0, 1, 2]);
        let subs = s.subsets_up_to(2);
        let shown: Vec<Vec<u64>> = subs.iter().map(|f| f.iter().map(|p| p.0).collect()).collect();
        assert_eq!(
            shown,
            vec![vec![], vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        assert_eq!(FiniteSet::new().subsets_up_to(3).len(), 1);
    }

    #[test]
    fn partial_map_rejects_collisions() {
        assert!(PartialMap::from_pairs([(Point(0), Point(1)), (Point(0), Point(2))]).is_err());
        assert!(PartialMap::from_pairs([(Point(0), Point(1)), (Point(2), Point(1))]).is_err());
        assert!(PartialMap::from_pairs([(Point(0), Point(1)), (Point(0), Point(1))]).is_ok());
    }
}
