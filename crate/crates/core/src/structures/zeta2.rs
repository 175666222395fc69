//! ζ² = ℤ × ℤ ordered lexicographically. Point (a, b) is offset b in block
//! a; automorphisms shift blocks by one t and each block by its own s_a.

use std::collections::HashMap;

use super::{parse_err, parse_int, Capabilities, FinitenessAnswer, Rankedness, Structure};
use crate::error::{Error, Result};
use crate::point::codes::{cantor, uncantor, unzigzag, zigzag};
use crate::point::{FiniteSet, PartialMap, Point};
use crate::typesets::TypeHandle;

pub fn coords(p: Point) -> (i64, i64) {
    let (i, j) = uncantor(p.0);
    (zigzag(i), zigzag(j))
}

pub fn point(a: i64, b: i64) -> Option<Point> {
    cantor(unzigzag(a)?, unzigzag(b)?).map(Point)
}

/// Strips one pair of surrounding brackets.
pub(crate) fn unwrap_brackets<'a>(structure: &str, text: &'a str, open: char, close: char) -> Result<&'a str> {
    let t = text.trim();
    t.strip_prefix(open)
        .and_then(|r| r.strip_suffix(close))
        .ok_or_else(|| parse_err(structure, text, &format!("expected {open}…{close}")))
}

#[derive(Debug)]
pub struct Zeta2;

impl Structure for Zeta2 {
    fn id(&self) -> &str {
        "zeta2"
    }

    fn description(&self) -> &str {
        "order type zeta^2 (Z x Z lexicographic)"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            finiteness_exact: true,
            unranked_witness: true,
            algebraically_finite: false,
            disjoint_amalgamation: false,
            single_copy: true,
            infinite_orbits: false,
            explicit_maps: true,
        }
    }

    fn format_point(&self, p: Point) -> String {
        let (a, b) = coords(p);
        format!("({a},{b})")
    }

    fn parse_point(&self, text: &str) -> Result<Point> {
        let inner = unwrap_brackets("zeta2", text, '(', ')')?;
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| parse_err("zeta2", text, "expected (a,b)"))?;
        point(parse_int("zeta2", a)?, parse_int("zeta2", b)?).ok_or(Error::Overflow)
    }

    fn extendable(&self, p: &PartialMap) -> bool {
        let mut t: Option<i64> = None;
        let mut inner: HashMap<i64, i64> = HashMap::new();
        for &(x, y) in p.pairs() {
            let ((a, b), (c, d)) = (coords(x), coords(y));
            if *t.get_or_insert(c - a) != c - a {
                return false;
            }
            if *inner.entry(a).or_insert(d - b) != d - b {
                return false;
            }
        }
        true
    }

    fn same_type(&self, f: &FiniteSet, x: Point, y: Point) -> bool {
        if f.is_empty() {
            return true;
        }
        let (bx, by) = (coords(x).0, coords(y).0);
        if f.iter().any(|p| coords(p).0 == bx) {
            x == y
        } else {
            bx == by
        }
    }

    fn typeset_finite(&self, f: &FiniteSet, x: Point) -> FinitenessAnswer {
        let bx = coords(x).0;
        if f.contains(x) || f.iter().any(|p| coords(p).0 == bx) {
            FinitenessAnswer::Finite(FiniteSet::singleton(x))
        } else {
            FinitenessAnswer::Infinite(TypeHandle::new_unchecked(f.clone(), x))
        }
    }

    fn rankedness(&self, _f: &FiniteSet, _x: Point) -> Rankedness {
        Rankedness::Ranked
    }
}
