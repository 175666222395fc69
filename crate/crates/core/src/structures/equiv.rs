//! Infinitely many infinite equivalence classes; point (c, i) is the i-th
//! element of class c, enumerated by Cantor pairing.

use super::{parse_err, parse_nat, Capabilities, FinitenessAnswer, Rankedness, Structure};
use crate::error::{Error, Result};
use crate::point::codes::{cantor, uncantor};
use crate::point::{FiniteSet, PartialMap, Point};
use crate::typesets::TypeHandle;

pub fn class(p: Point) -> u64 {
    uncantor(p.0).0
}

#[derive(Debug)]
pub struct EquivInf;

impl Structure for EquivInf {
    fn id(&self) -> &str {
        "equiv"
    }

    fn description(&self) -> &str {
        "equivalence relation with infinitely many infinite classes"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            finiteness_exact: true,
            unranked_witness: true,
            algebraically_finite: true,
            disjoint_amalgamation: true,
            single_copy: false,
            infinite_orbits: true,
            explicit_maps: true,
        }
    }

    fn format_point(&self, p: Point) -> String {
        let (c, i) = uncantor(p.0);
        format!("{c}.{i}")
    }

    fn parse_point(&self, text: &str) -> Result<Point> {
        let (c, i) = text
            .trim()
            .split_once('.')
            .ok_or_else(|| parse_err("equiv", text, "expected class.index"))?;
        let (c, i) = (parse_nat("equiv", c)?, parse_nat("equiv", i)?);
        cantor(c, i).map(Point).ok_or(Error::Overflow)
    }

    fn extendable(&self, p: &PartialMap) -> bool {
        let v: Vec<(u64, u64)> = p.pairs().iter().map(|&(a, b)| (class(a), class(b))).collect();
        v.iter()
            .enumerate()
            .all(|(i, &(a, b))| v[..i].iter().all(|&(c, d)| (a == c) == (b == d)))
    }

    fn extend_ok(&self, p: &PartialMap, x: Point, y: Point) -> bool {
        if p.in_domain(x) || p.in_range(y) {
            return p.get(x) == Some(y);
        }
        let (cx, cy) = (class(x), class(y));
        p.pairs().iter().all(|&(a, b)| (class(a) == cx) == (class(b) == cy))
    }

    fn same_type(&self, f: &FiniteSet, x: Point, y: Point) -> bool {
        let (cx, cy) = (class(x), class(y));
        f.iter().all(|p| {
            let c = class(p);
            (c == cx) == (c == cy)
        })
    }

    fn typeset_finite(&self, f: &FiniteSet, x: Point) -> FinitenessAnswer {
        if f.contains(x) {
            return FinitenessAnswer::Finite(FiniteSet::singleton(x));
        }
        FinitenessAnswer::Infinite(TypeHandle::new_unchecked(f.clone(), x))
    }

    fn rankedness(&self, f: &FiniteSet, x: Point) -> Rankedness {
        if f.contains(x) {
            Rankedness::Ranked
        } else {
            Rankedness::Unranked
        }
    }

    fn algebraic_closure_exact(&self, s: &FiniteSet) -> Option<FiniteSet> {
        Some(s.clone())
    }
}
