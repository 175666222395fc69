//! Staged back-and-forth construction of a single copy.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CopyHandle, Membership, MoveKind, TraceRecord};
use crate::error::{Error, Result};
use crate::point::{FiniteSet, PartialMap, Point};
use crate::structures::{Rankedness, Structure};

/// How often the parent is advanced before a stuck forth move gives up.
const PARENT_RETRIES: usize = 8;

/// Candidate-scan budget at a given stage.
pub fn stage_budget(stage: usize) -> u64 {
    10 * stage as u64 + 100
}

/// Extra admissibility rule used by the joint construction of disjoint pairs:
/// the closure of the new range may meet `foreign` only inside `base`.
#[derive(Clone, Debug, Default)]
pub(crate) struct Guard {
    pub base: FiniteSet,
    pub foreign: FiniteSet,
}

#[derive(Clone, Debug)]
pub(crate) struct Staged {
    pub map: PartialMap,
    pub out: BTreeSet<Point>,
    pub fix: FiniteSet,
    pub avoid: FiniteSet,
    pub parent: Option<Box<CopyHandle>>,
    pub proper: bool,
    pub back: bool,
    pub guard: Option<Guard>,
    pub trace: Vec<TraceRecord>,
    rng: ChaCha8Rng,
    skipped: bool,
    cursor: u64,
}

impl Staged {
    pub fn new(
        fix: FiniteSet,
        avoid: FiniteSet,
        parent: Option<CopyHandle>,
        proper: bool,
        back: bool,
        seed: u64,
    ) -> Self {
        Staged {
            map: PartialMap::identity(&fix),
            out: avoid.iter().collect(),
            fix,
            avoid,
            parent: parent.map(Box::new),
            proper,
            back,
            guard: None,
            trace: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            skipped: false,
            cursor: 0,
        }
    }

    pub fn membership(&self, x: Point, stage: usize) -> Membership {
        if self.map.in_range(x) {
            return Membership::In;
        }
        if self.out.contains(&x) {
            return Membership::Out;
        }
        if let Some(p) = &self.parent {
            if p.membership(x) == Membership::Out {
                return Membership::Out;
            }
        }
        Membership::UnknownAtStage(stage)
    }

    fn parent_in(&self, y: Point) -> bool {
        self.parent.as_ref().is_none_or(|p| p.membership(y) == Membership::In)
    }

    fn decided(&self, y: Point) -> bool {
        self.map.in_range(y) || self.out.contains(&y)
    }

    /// Adding `y` to the range keeps every excluded point avoidable.
    fn lookahead(&self, s: &dyn Structure, y: Point) -> bool {
        if let Some(g) = &self.guard {
            let Some(ac) = s.algebraic_closure_exact(&self.map.range().with(y)) else {
                return false;
            };
            return ac.iter().all(|q| !self.out.contains(&q)) && ac.intersection(&g.foreign).is_subset(&g.base);
        }
        if s.capabilities().infinite_orbits {
            return !self.out.contains(&y);
        }
        let range = self.map.range().with(y);
        self.out
            .iter()
            .all(|&e| !range.contains(e) && s.rankedness(&range, e) == Rankedness::Unranked)
    }

    fn next_targets(&mut self) -> (Point, Point) {
        while self.map.in_domain(Point(self.cursor)) {
            self.cursor += 1;
        }
        let mut second = self.cursor + 1;
        while self.map.in_domain(Point(second)) {
            second += 1;
        }
        (Point(self.cursor), Point(second))
    }

    pub fn step(&mut self, s: &dyn Structure, stage: usize) -> Result<()> {
        if let Some(p) = self.parent.as_mut() {
            p.advance(1)?;
        }
        self.forth(s, stage)?;
        if self.back {
            self.back_move(s, stage)?;
        }
        Ok(())
    }

    pub fn forth(&mut self, s: &dyn Structure, stage: usize) -> Result<()> {
        let (first, second) = self.next_targets();
        let pick_second = !self.skipped && self.rng.gen_ratio(1, 3);
        self.skipped = pick_second;
        let x = if pick_second { second } else { first };
        let budget = stage_budget(stage);
        let mut retries = 0;
        loop {
            if let Some((y, scanned)) = self.find_image(s, x, budget)? {
                self.map
                    .insert(x, y)
                    .map_err(|e| Error::Contract(format!("forth move broke injectivity: {e}")))?;
                self.trace.push(TraceRecord {
                    round: stage,
                    kind: MoveKind::Forth,
                    source: Some(x),
                    target: y,
                    scanned,
                    checks: self.checks(),
                });
                return Ok(());
            }
            match self.parent.as_mut() {
                Some(p) if retries < PARENT_RETRIES && !p.is_closed() => {
                    p.advance(1)?;
                    retries += 1;
                }
                _ => {
                    return Err(Error::Budget {
                        obligation: format!(
                            "forth image of {} over a prefix of {} pairs at stage {stage}",
                            s.format_point(x),
                            self.map.len()
                        ),
                        scanned: budget,
                    })
                }
            }
        }
    }

    fn checks(&self) -> Vec<&'static str> {
        let mut v = vec!["extendable", "fresh"];
        if self.parent.is_some() {
            v.push("parent");
        }
        if !self.out.is_empty() || self.guard.is_some() {
            v.push("lookahead");
        }
        v
    }

    /// Least admissible image of `x` among the first `budget` candidates.
    /// Points the parent has not settled yet are pulled into it by a back
    /// move of the parent.
    fn find_image(&mut self, s: &dyn Structure, x: Point, budget: u64) -> Result<Option<(Point, u64)>> {
        let candidates: Box<dyn Iterator<Item = Point>> = match s.image_candidates(&self.map, x) {
            Some(it) => Box::new(it.take(budget as usize)),
            None => Box::new((0..budget).map(Point)),
        };
        for (i, y) in candidates.enumerate() {
            if self.decided(y) || !s.extend_ok(&self.map, x, y) || !self.lookahead(s, y) {
                continue;
            }
            let admitted = match self.parent.as_mut() {
                None => true,
                Some(p) => match p.membership(y) {
                    Membership::In => true,
                    Membership::Out => false,
                    Membership::UnknownAtStage(_) => p.admit(y)?,
                },
            };
            if admitted {
                return Ok(Some((y, i as u64 + 1)));
            }
        }
        Ok(None)
    }

    /// Tries to put `y` into the range by a back move, pulling it into the
    /// parent first.
    pub fn admit(&mut self, s: &dyn Structure, y: Point, stage: usize) -> Result<bool> {
        if self.map.in_range(y) {
            return Ok(true);
        }
        if self.out.contains(&y) {
            return Ok(false);
        }
        if let Some(p) = self.parent.as_mut() {
            if !p.admit(y)? {
                return Ok(false);
            }
        }
        if !self.lookahead(s, y) {
            return Ok(false);
        }
        let Some(a) = self.find_preimage(s, y, stage_budget(stage)) else {
            return Ok(false);
        };
        self.map
            .insert(a, y)
            .map_err(|e| Error::Contract(format!("back move broke injectivity: {e}")))?;
        self.trace.push(TraceRecord {
            round: stage,
            kind: MoveKind::Back,
            source: Some(a),
            target: y,
            scanned: 0,
            checks: self.checks(),
        });
        Ok(true)
    }

    fn find_preimage(&self, s: &dyn Structure, t: Point, budget: u64) -> Option<Point> {
        let ok = |a: Point| !self.map.in_domain(a) && s.extend_ok(&self.map, a, t);
        match s.image_candidates(&self.map.inverse(), t) {
            Some(it) => it.take(budget as usize).find(|&a| ok(a)),
            None => (0..budget).map(Point).find(|&a| ok(a)),
        }
    }

    fn back_move(&mut self, s: &dyn Structure, stage: usize) -> Result<()> {
        let budget = stage_budget(stage);
        let Some(t) = (0..budget).map(Point).find(|&t| !self.decided(t) && self.parent_in(t)) else {
            return Ok(());
        };
        if self.lookahead(s, t) {
            let pre = self.find_preimage(s, t, budget);
            if let Some(a) = pre {
                self.map
                    .insert(a, t)
                    .map_err(|e| Error::Contract(format!("back move broke injectivity: {e}")))?;
                self.trace.push(TraceRecord {
                    round: stage,
                    kind: MoveKind::Back,
                    source: Some(a),
                    target: t,
                    scanned: a.0 + 1,
                    checks: self.checks(),
                });
                return Ok(());
            }
        }
        match s.rankedness(&self.map.range(), t) {
            Rankedness::Unranked => {
                self.out.insert(t);
                self.trace.push(TraceRecord {
                    round: stage,
                    kind: MoveKind::Avoid,
                    source: None,
                    target: t,
                    scanned: 0,
                    checks: vec!["unranked"],
                });
                Ok(())
            }
            Rankedness::Ranked if self.lookahead(s, t) => Err(Error::Budget {
                obligation: format!("preimage of {} at stage {stage}", s.format_point(t)),
                scanned: budget,
            }),
            _ => Err(Error::Contract(format!(
                "{} is forced into the copy but conflicts with an excluded point",
                s.format_point(t)
            ))),
        }
    }
}
