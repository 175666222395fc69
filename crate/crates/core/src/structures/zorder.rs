//! (ℤ, <) enumerated 0, 1, −1, 2, −2, …; automorphisms are translations.

use super::{parse_int, Capabilities, FinitenessAnswer, Rankedness, Structure};
use crate::error::{Error, Result};
use crate::point::codes::{unzigzag, zigzag};
use crate::point::{FiniteSet, PartialMap, Point};
use crate::typesets::TypeHandle;

pub fn value(p: Point) -> i64 {
    zigzag(p.0)
}

#[derive(Debug)]
pub struct ZOrder;

impl Structure for ZOrder {
    fn id(&self) -> &str {
        "zorder"
    }

    fn description(&self) -> &str {
        "integers (Z,<) under translations"
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
        value(p).to_string()
    }

    fn parse_point(&self, text: &str) -> Result<Point> {
        unzigzag(parse_int("zorder", text)?).map(Point).ok_or(Error::Overflow)
    }

    fn extendable(&self, p: &PartialMap) -> bool {
        let mut shifts = p.pairs().iter().map(|&(a, b)| value(b) as i128 - value(a) as i128);
        match shifts.next() {
            None => true,
            Some(t) => shifts.all(|s| s == t),
        }
    }

    fn same_type(&self, f: &FiniteSet, x: Point, y: Point) -> bool {
        f.is_empty() || x == y
    }

    fn typeset_finite(&self, f: &FiniteSet, x: Point) -> FinitenessAnswer {
        if f.is_empty() {
            FinitenessAnswer::Infinite(TypeHandle::new_unchecked(f.clone(), x))
        } else {
            FinitenessAnswer::Finite(FiniteSet::singleton(x))
        }
    }

    fn rankedness(&self, _f: &FiniteSet, _x: Point) -> Rankedness {
        Rankedness::Ranked
    }
}
