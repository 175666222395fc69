//! Checked entry points over any [`Structure`].

use crate::error::{Error, Result};
use crate::point::{window, FiniteSet, PartialMap, Point};
use crate::structures::{Rankedness, Structure};

/// Scan length used when searching a typeset for a witness.
pub const WITNESS_SCAN: u64 = 1 << 12;

pub fn enumerate(n: usize) -> Vec<Point> {
    window(n).collect()
}

pub fn same_type(s: &dyn Structure, f: &FiniteSet, x: Point, y: Point) -> Result<bool> {
    if f.contains(x) || f.contains(y) {
        return Err(Error::Precondition(
            "type representatives must lie outside the sockel".into(),
        ));
    }
    Ok(s.same_type(f, x, y))
}

/// Lazy candidate images for `x` under extensions of `p`.
pub struct Extensions<'a> {
    s: &'a dyn Structure,
    p: &'a PartialMap,
    x: Point,
    next: u64,
    budget: u64,
}

impl Iterator for Extensions<'_> {
    type Item = Point;
    fn next(&mut self) -> Option<Point> {
        while self.next < self.budget {
            let y = Point(self.next);
            self.next += 1;
            if !self.p.in_range(y) && self.s.extend_ok(self.p, self.x, y) {
                return Some(y);
            }
        }
        None
    }
}

pub fn extensions<'a>(s: &'a dyn Structure, p: &'a PartialMap, x: Point, budget: u64) -> Result<Extensions<'a>> {
    if p.in_domain(x) {
        return Err(Error::Precondition(format!("{} is already mapped", s.format_point(x))));
    }
    if !s.extendable(p) {
        return Err(Error::Precondition("map is not extendable".into()));
    }
    Ok(Extensions {
        s,
        p,
        x,
        next: 0,
        budget,
    })
}

/// q ∈ G⟨F ▷ x⟩ \ F′ with ⟨F′ ▷ q⟩ unranked, or `None` when the type is
/// certified ranked or no witness is certified.
pub fn unranked_witness(s: &dyn Structure, f: &FiniteSet, x: Point, f2: &FiniteSet) -> Result<Option<Point>> {
    if !f.is_subset(f2) {
        return Err(Error::Precondition("F must be a subset of F′".into()));
    }
    if f.contains(x) {
        return Err(Error::Precondition("representative lies in the sockel".into()));
    }
    if s.rankedness(f, x) != Rankedness::Unranked {
        return Ok(None);
    }
    if let Some(q) = s.preferred_unranked_witness(f, x, f2) {
        return Ok(Some(q));
    }
    Ok((0..WITNESS_SCAN).map(Point).find(|&q| {
        !f2.contains(q) && !f.contains(q) && s.same_type(f, x, q) && s.rankedness(f2, q) == Rankedness::Unranked
    }))
}
