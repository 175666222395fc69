//! [ℕ]², the 2-element subsets of ℕ in colex order, under the action
//! induced by the symmetric group of ℕ.

use std::collections::{BTreeMap, BTreeSet};

use super::zeta2::unwrap_brackets;
use super::{parse_err, parse_nat, Capabilities, FinitenessAnswer, Rankedness, Structure};
use crate::error::{Error, Result};
use crate::point::{FiniteSet, PartialMap, Point};
use crate::typesets::TypeHandle;

pub fn elements(p: Point) -> (u64, u64) {
    let n = p.0 as u128;
    // largest j with j(j−1)/2 ≤ n
    let mut j = (((8 * n + 1) as f64).sqrt() as u128).div_ceil(2) + 1;
    while j * (j - 1) / 2 > n {
        j -= 1;
    }
    while (j + 1) * j / 2 <= n {
        j += 1;
    }
    let i = n - j * (j - 1) / 2;
    (i as u64, j as u64)
}

pub fn pair(a: u64, b: u64) -> Option<Point> {
    let (i, j) = if a < b { (a, b) } else { (b, a) };
    if i == j {
        return None;
    }
    let v = (j as u128) * (j as u128 - 1) / 2 + i as u128;
    u64::try_from(v).ok().map(Point)
}

pub fn support(s: &FiniteSet) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for p in s.iter() {
        let (a, b) = elements(p);
        out.insert(a);
        out.insert(b);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Label {
    Free,
    /// Member of an isolated pair of F; the two members may be swapped.
    Isolated(Point),
    Fixed(u64),
}

fn label(f: &FiniteSet, e: u64) -> Label {
    let holders: Vec<Point> = f
        .iter()
        .filter(|&p| {
            let (a, b) = elements(p);
            a == e || b == e
        })
        .collect();
    match holders.as_slice() {
        [] => Label::Free,
        [p] => {
            let (a, b) = elements(*p);
            let other = if a == e { b } else { a };
            let other_count = f
                .iter()
                .filter(|&q| {
                    let (c, d) = elements(q);
                    c == other || d == other
                })
                .count();
            if other_count == 1 {
                Label::Isolated(*p)
            } else {
                Label::Fixed(e)
            }
        }
        _ => Label::Fixed(e),
    }
}

fn labels(f: &FiniteSet, x: Point) -> [Label; 2] {
    let (a, b) = elements(x);
    let mut l = [label(f, a), label(f, b)];
    l.sort();
    l
}

/// Finds an injective element map σ with σ[P] = Q for every P ↦ Q.
fn element_map(p: &PartialMap) -> Option<BTreeMap<u64, u64>> {
    let mut cand: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &(src, dst) in p.pairs() {
        let (a, b) = elements(src);
        let (c, d) = elements(dst);
        for e in [a, b] {
            let entry = cand.entry(e).or_insert_with(|| vec![c, d]);
            entry.retain(|v| *v == c || *v == d);
        }
    }
    let mut order: Vec<(u64, Vec<u64>)> = cand.into_iter().collect();
    order.sort_by_key(|(_, c)| c.len());
    let mut used = BTreeSet::new();
    let mut sigma = BTreeMap::new();
    fn go(k: usize, order: &[(u64, Vec<u64>)], used: &mut BTreeSet<u64>, sigma: &mut BTreeMap<u64, u64>) -> bool {
        let Some((e, cands)) = order.get(k) else {
            return true;
        };
        for &v in cands {
            if used.insert(v) {
                sigma.insert(*e, v);
                if go(k + 1, order, used, sigma) {
                    return true;
                }
                sigma.remove(e);
                used.remove(&v);
            }
        }
        false
    }
    go(0, &order, &mut used, &mut sigma).then_some(sigma)
}

#[derive(Debug)]
pub struct Pairs;

impl Structure for Pairs {
    fn id(&self) -> &str {
        "pairs"
    }

    fn description(&self) -> &str {
        "2-subsets [N]^2 under the induced symmetric-group action"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            finiteness_exact: true,
            unranked_witness: true,
            algebraically_finite: true,
            disjoint_amalgamation: false,
            single_copy: false,
            infinite_orbits: false,
            explicit_maps: true,
        }
    }

    fn format_point(&self, p: Point) -> String {
        let (i, j) = elements(p);
        format!("{{{i},{j}}}")
    }

    fn parse_point(&self, text: &str) -> Result<Point> {
        let inner = unwrap_brackets("pairs", text, '{', '}')?;
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| parse_err("pairs", text, "expected {i,j}"))?;
        let (a, b) = (parse_nat("pairs", a)?, parse_nat("pairs", b)?);
        if a == b {
            return Err(parse_err("pairs", text, "elements must differ"));
        }
        pair(a, b).ok_or(Error::Overflow)
    }

    fn extendable(&self, p: &PartialMap) -> bool {
        element_map(p).is_some()
    }

    fn same_type(&self, f: &FiniteSet, x: Point, y: Point) -> bool {
        labels(f, x) == labels(f, y)
    }

    fn typeset_finite(&self, f: &FiniteSet, x: Point) -> FinitenessAnswer {
        if f.contains(x) {
            return FinitenessAnswer::Finite(FiniteSet::singleton(x));
        }
        let (a, b) = elements(x);
        let options = |e: u64| -> Option<Vec<u64>> {
            match label(f, e) {
                Label::Free => None,
                Label::Fixed(v) => Some(vec![v]),
                Label::Isolated(p) => {
                    let (c, d) = elements(p);
                    Some(vec![c, d])
                }
            }
        };
        match (options(a), options(b)) {
            (Some(oa), Some(ob)) => {
                let members: FiniteSet = oa
                    .iter()
                    .flat_map(|&c| ob.iter().filter_map(move |&d| pair(c, d)))
                    .collect();
                FinitenessAnswer::Finite(members)
            }
            _ => FinitenessAnswer::Infinite(TypeHandle::new_unchecked(f.clone(), x)),
        }
    }

    fn rankedness(&self, f: &FiniteSet, x: Point) -> Rankedness {
        if self.typeset_finite(f, x).is_finite() {
            Rankedness::Ranked
        } else {
            Rankedness::Unranked
        }
    }

    fn algebraic_closure_exact(&self, s: &FiniteSet) -> Option<FiniteSet> {
        let supp: Vec<u64> = support(s).into_iter().collect();
        let mut out = Vec::new();
        for (k, &a) in supp.iter().enumerate() {
            for &b in &supp[k + 1..] {
                out.push(pair(a, b)?);
            }
        }
        Some(out.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colex_roundtrip() {
        assert_eq!(elements(Point(0)), (0, 1));
        assert_eq!(elements(Point(1)), (0, 2));
        assert_eq!(elements(Point(2)), (1, 2));
        assert_eq!(elements(Point(3)), (0, 3));
        for n in 0..5000u64 {
            let (i, j) = elements(Point(n));
            assert!(i < j);
            assert_eq!(pair(i, j), Some(Point(n)));
        }
    }
}
