//! The Rado graph on ℕ: for i < j, i ~ j iff bit i of j is set.

use super::{parse_nat, Capabilities, FinitenessAnswer, Rankedness, Structure};
use crate::error::Result;
use crate::point::{FiniteSet, PartialMap, Point};
use crate::typesets::TypeHandle;

pub fn adjacent(a: u64, b: u64) -> bool {
    let (i, j) = if a < b { (a, b) } else { (b, a) };
    i != j && i < 64 && (j >> i) & 1 == 1
}

#[derive(Debug)]
pub struct Rado;

impl Structure for Rado {
    fn id(&self) -> &str {
        "rado"
    }

    fn description(&self) -> &str {
        "Rado graph on N with BIT adjacency"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            finiteness_exact: true,
            unranked_witness: true,
            algebraically_finite: true,
            disjoint_amalgamation: true,
            single_copy: false,
            infinite_orbits: true,
            explicit_maps: false,
        }
    }

    fn format_point(&self, p: Point) -> String {
        p.0.to_string()
    }

    fn parse_point(&self, text: &str) -> Result<Point> {
        parse_nat("rado", text).map(Point)
    }

    fn extendable(&self, p: &PartialMap) -> bool {
        let v = p.pairs();
        v.iter()
            .enumerate()
            .all(|(i, &(a, b))| v[..i].iter().all(|&(c, d)| adjacent(a.0, c.0) == adjacent(b.0, d.0)))
    }

    fn extend_ok(&self, p: &PartialMap, x: Point, y: Point) -> bool {
        if p.in_domain(x) || p.in_range(y) {
            return p.get(x) == Some(y);
        }
        p.pairs().iter().all(|&(a, b)| adjacent(x.0, a.0) == adjacent(y.0, b.0))
    }

    fn same_type(&self, f: &FiniteSet, x: Point, y: Point) -> bool {
        f.iter().all(|p| adjacent(x.0, p.0) == adjacent(y.0, p.0))
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
