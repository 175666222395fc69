//! ℕ under the full symmetric group.

use super::{parse_nat, Capabilities, FinitenessAnswer, Rankedness, Structure};
use crate::error::Result;
use crate::point::{FiniteSet, PartialMap, Point};
use crate::typesets::TypeHandle;

#[derive(Debug)]
pub struct PureSet;

impl Structure for PureSet {
    fn id(&self) -> &str {
        "pureset"
    }

    fn description(&self) -> &str {
        "pure set N under the full symmetric group"
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
        p.0.to_string()
    }

    fn parse_point(&self, text: &str) -> Result<Point> {
        parse_nat("pureset", text).map(Point)
    }

    // PartialMap is already injective.
    fn extendable(&self, _p: &PartialMap) -> bool {
        true
    }

    fn extend_ok(&self, p: &PartialMap, x: Point, y: Point) -> bool {
        if p.in_domain(x) || p.in_range(y) {
            return p.get(x) == Some(y);
        }
        true
    }

    fn same_type(&self, _f: &FiniteSet, _x: Point, _y: Point) -> bool {
        true
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
