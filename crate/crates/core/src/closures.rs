//! Algebraic, ranked and (sampled) intersection closures of finite sets.

use serde_json::{json, Value};

use crate::copy_engine::{self, CopyHandle, Membership};
use crate::error::{Error, Result};
use crate::point::{window, FiniteSet, Point};
use crate::structures::{FinitenessAnswer, Rankedness, Shared, Structure};
use crate::typesets::{self, RankAnswer, TypeHandle};

/// Rank bound used when the ranked closure feeds the sampled intersection.
pub const IC_MAXRANK: u32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// The complete finite typeset.
    Finite(FiniteSet),
    Rank(RankAnswer),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureResult {
    pub base: FiniteSet,
    pub closure_window: FiniteSet,
    pub exact: bool,
    /// One entry per type over the base that was examined, keyed by its
    /// enumeration-least representative.
    pub certificates: Vec<(Point, Evidence)>,
}

impl ClosureResult {
    pub fn to_json(&self, s: &dyn Structure) -> Value {
        let fmt = |set: &FiniteSet| -> Vec<String> { set.iter().map(|p| s.format_point(p)).collect() };
        json!({
            "base": fmt(&self.base),
            "members": fmt(&self.closure_window),
            "exact": self.exact,
            "evidence": self.certificates.iter().map(|(p, ev)| {
                let body = match ev {
                    Evidence::Finite(all) => json!({"finite": fmt(all)}),
                    Evidence::Rank(r) => r.to_json(s),
                };
                json!({"rep": s.format_point(*p), "evidence": body})
            }).collect::<Vec<_>>(),
        })
    }
}

fn check_depth(f: &FiniteSet, depth: usize) -> Result<()> {
    if depth < f.len() {
        return Err(Error::Precondition("depth must be at least |F|".into()));
    }
    Ok(())
}

/// Representatives of the types over F met by U_depth \ F.
fn type_reps(s: &dyn Structure, f: &FiniteSet, depth: usize) -> Vec<Point> {
    let mut reps: Vec<Point> = Vec::new();
    for x in window(depth).filter(|&x| !f.contains(x)) {
        if !reps.iter().any(|&r| s.same_type(f, r, x)) {
            reps.push(x);
        }
    }
    reps
}

/// F together with every finite typeset over F met by U_depth.
pub fn algebraic_closure(s: &dyn Structure, f: &FiniteSet, depth: usize) -> Result<ClosureResult> {
    check_depth(f, depth)?;
    let mut members = f.clone();
    let mut certificates = Vec::new();
    let mut undecided = false;
    for rep in type_reps(s, f, depth) {
        match s.typeset_finite(f, rep) {
            FinitenessAnswer::Finite(all) => {
                members = members.union(&all);
                certificates.push((rep, Evidence::Finite(all)));
            }
            FinitenessAnswer::Infinite(_) => {}
            FinitenessAnswer::Unknown { .. } => undecided = true,
        }
    }
    let exact =
        !undecided && s.capabilities().finiteness_exact && s.algebraic_closure_exact(f).as_ref() == Some(&members);
    Ok(ClosureResult {
        base: f.clone(),
        closure_window: members,
        exact,
        certificates,
    })
}

/// 𝔞𝔠(∅).
pub fn kernel(s: &dyn Structure, depth: usize) -> Result<ClosureResult> {
    algebraic_closure(s, &FiniteSet::new(), depth)
}

/// Lower approximation of 𝔯𝔠(F) ∩ U_depth: F plus the window members of
/// every type over F whose rank is bounded by `maxrank`.
pub fn ranked_closure(s: &dyn Structure, f: &FiniteSet, maxrank: u32, depth: usize) -> Result<ClosureResult> {
    check_depth(f, depth)?;
    let mut members = f.clone();
    let mut certificates = Vec::new();
    let mut exact = true;
    for rep in type_reps(s, f, depth) {
        let t = TypeHandle::new_unchecked(f.clone(), rep);
        let ans = typesets::rank_at_most(s, &t, maxrank, depth)?;
        match &ans {
            RankAnswer::AtMost { .. } => {
                members = members.union(&window(depth).filter(|&q| t.contains(s, q)).collect());
            }
            RankAnswer::Unranked { certified: true, .. } => {}
            _ => exact = false,
        }
        certificates.push((rep, Evidence::Rank(ans)));
    }
    Ok(ClosureResult {
        base: f.clone(),
        closure_window: members,
        exact,
        certificates,
    })
}

/// The copies whose intersection bounds 𝔦𝔠(F) from above: one copy through
/// F, plus copies avoiding the certified-unranked points of U_depth outside
/// the ranked closure, dealt round-robin over the remaining samples.
pub fn ic_samples(s: &Shared, f: &FiniteSet, samples: usize, depth: usize, seed: u64) -> Result<Vec<CopyHandle>> {
    let sd = s.as_ref();
    check_depth(f, depth)?;
    if samples == 0 {
        return Err(Error::Precondition("at least one sample is needed".into()));
    }
    let u = copy_engine::copy_identity(s);
    let mut copies = vec![copy_engine::copy_through(s, f, &u, false, seed)?];
    let rc = ranked_closure(sd, f, IC_MAXRANK, depth)?;
    let avoidable: Vec<Point> = window(depth)
        .filter(|&y| !rc.closure_window.contains(y) && sd.rankedness(f, y) == Rankedness::Unranked)
        .collect();
    if samples > 1 && !avoidable.is_empty() {
        let groups = (samples - 1).min(avoidable.len());
        let mut chunks = vec![FiniteSet::new(); groups];
        for (i, y) in avoidable.iter().enumerate() {
            chunks[i % groups].insert(*y);
        }
        for (j, e) in chunks.into_iter().enumerate() {
            copies.push(copy_engine::copy_avoiding(s, f, &e, seed.wrapping_add(j as u64 + 1))?);
        }
    }
    for c in &mut copies {
        c.advance(depth)?;
    }
    Ok(copies)
}

/// Points of U_depth not excluded by any sampled copy containing F.
pub fn intersection_closure_upper(
    s: &Shared,
    f: &FiniteSet,
    samples: usize,
    depth: usize,
    seed: u64,
) -> Result<FiniteSet> {
    let copies = ic_samples(s, f, samples, depth, seed)?;
    Ok(window(depth)
        .filter(|&y| copies.iter().all(|c| c.membership(y) != Membership::Out))
        .collect())
}
