//! Construction of copies: closed forms, staged back-and-forth embeddings,
//! chains, disjoint pairs, unions and Bernstein bases.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::point::{window, FiniteSet, PartialMap, Point};
use crate::structures::{FinitenessAnswer, Rankedness, Shared, Structure};
use crate::typesets::{self, TypeHandle};

pub mod closed;
mod disjoint;
mod staged;

pub use closed::{Base, ClosedForm, DloSet, Subset};
pub use disjoint::{disjoint_pair, DisjointPair};
pub use staged::stage_budget;
use staged::Staged;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    In,
    Out,
    UnknownAtStage(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MoveKind {
    Forth,
    Back,
    Avoid,
}

/// One round of a staged construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRecord {
    pub round: usize,
    pub kind: MoveKind,
    pub source: Option<Point>,
    pub target: Point,
    pub scanned: u64,
    pub checks: Vec<&'static str>,
}

impl TraceRecord {
    pub fn to_json(&self, s: &dyn Structure) -> Value {
        json!({
            "round": self.round,
            "move": self.kind,
            "source": self.source.map(|p| s.format_point(p)),
            "target": s.format_point(self.target),
            "scanned": self.scanned,
            "checks": self.checks,
        })
    }
}

#[derive(Clone, Debug)]
enum Kind {
    Closed(ClosedForm),
    Staged(Box<Staged>),
    Union(Vec<CopyHandle>, usize),
}

/// A copy under construction (or a total closed-form set).
#[derive(Clone, Debug)]
pub struct CopyHandle {
    s: Shared,
    label: String,
    seed: u64,
    stage: usize,
    sealed: bool,
    kind: Kind,
}

impl CopyHandle {
    fn closed(s: &Shared, label: String, form: ClosedForm) -> Self {
        CopyHandle {
            s: s.clone(),
            label,
            seed: 0,
            stage: 0,
            sealed: false,
            kind: Kind::Closed(form),
        }
    }

    fn staged(s: &Shared, label: String, seed: u64, st: Staged) -> Self {
        CopyHandle {
            s: s.clone(),
            label,
            seed,
            stage: 0,
            sealed: false,
            kind: Kind::Staged(Box::new(st)),
        }
    }

    /// A closed-form set that is not required to be a copy. Used to plant
    /// counterexamples for the checker.
    pub fn planted(s: &Shared, label: &str, form: ClosedForm) -> Self {
        CopyHandle::closed(s, label.to_string(), form)
    }

    pub fn structure(&self) -> &Shared {
        &self.s
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn is_closed(&self) -> bool {
        match &self.kind {
            Kind::Closed(_) => true,
            Kind::Union(v, _) => v.iter().all(|c| c.is_closed()),
            Kind::Staged(_) => false,
        }
    }

    pub fn closed_form(&self) -> Option<&ClosedForm> {
        match &self.kind {
            Kind::Closed(f) => Some(f),
            _ => None,
        }
    }

    /// Runs `stages` rounds. A no-op for closed forms apart from the stage counter.
    pub fn advance(&mut self, stages: usize) -> Result<()> {
        if stages == 0 {
            return Ok(());
        }
        if self.sealed {
            return Err(Error::Contract(format!(
                "{} belongs to a jointly built pair and cannot be advanced alone",
                self.label
            )));
        }
        for _ in 0..stages {
            match &mut self.kind {
                Kind::Closed(_) => {}
                Kind::Staged(st) => st.step(self.s.as_ref(), self.stage)?,
                Kind::Union(members, depth) => {
                    for m in members.iter_mut() {
                        m.advance(1)?;
                    }
                    let depth = *depth;
                    check_chain(members, depth)?;
                }
            }
            self.stage += 1;
        }
        Ok(())
    }

    pub fn advanced(mut self, stages: usize) -> Result<Self> {
        self.advance(stages)?;
        Ok(self)
    }

    pub fn membership(&self, x: Point) -> Membership {
        match &self.kind {
            Kind::Closed(f) => {
                if f.contains(x) {
                    Membership::In
                } else {
                    Membership::Out
                }
            }
            Kind::Staged(st) => st.membership(x, self.stage),
            Kind::Union(members, _) => {
                let mut all_out = true;
                for m in members {
                    match m.membership(x) {
                        Membership::In => return Membership::In,
                        Membership::Out => {}
                        Membership::UnknownAtStage(_) => all_out = false,
                    }
                }
                if all_out {
                    Membership::Out
                } else {
                    Membership::UnknownAtStage(self.stage)
                }
            }
        }
    }

    /// Settles `y` as a member if the construction can still take it.
    /// Closed and jointly built handles only report their membership.
    pub fn admit(&mut self, y: Point) -> Result<bool> {
        if self.sealed {
            return Ok(self.membership(y) == Membership::In);
        }
        match &mut self.kind {
            Kind::Staged(st) => st.admit(self.s.as_ref(), y, self.stage),
            _ => Ok(self.membership(y) == Membership::In),
        }
    }

    pub fn map_prefix(&self) -> Option<&PartialMap> {
        match &self.kind {
            Kind::Staged(st) => Some(&st.map),
            _ => None,
        }
    }

    pub fn decided_in(&self, depth: usize) -> FiniteSet {
        window(depth)
            .filter(|&p| self.membership(p) == Membership::In)
            .collect()
    }

    pub fn decided_out(&self, depth: usize) -> FiniteSet {
        window(depth)
            .filter(|&p| self.membership(p) == Membership::Out)
            .collect()
    }

    /// Every point whose membership was settled by an explicit move, in
    /// this handle or any handle it depends on.
    pub fn explicit_points(&self) -> BTreeSet<Point> {
        let mut acc = BTreeSet::new();
        self.collect_explicit(&mut acc);
        acc
    }

    fn collect_explicit(&self, acc: &mut BTreeSet<Point>) {
        match &self.kind {
            Kind::Closed(f) => {
                acc.extend(f.plus.iter());
                acc.extend(f.minus.iter());
            }
            Kind::Staged(st) => {
                acc.extend(st.map.pairs().iter().map(|p| p.1));
                acc.extend(st.out.iter().copied());
                if let Some(p) = &st.parent {
                    p.collect_explicit(acc);
                }
            }
            Kind::Union(members, _) => members.iter().for_each(|m| m.collect_explicit(acc)),
        }
    }

    /// Closed-form DLO parts, when membership is total and rational-valued.
    pub(crate) fn dlo_forms(&self) -> Option<Vec<&ClosedForm>> {
        if self.s.id() != "dlo" {
            return None;
        }
        match &self.kind {
            Kind::Closed(f) => f.dlo_region().map(|_| vec![f]),
            Kind::Union(members, _) => {
                let mut v = Vec::new();
                for m in members {
                    v.extend(m.dlo_forms()?);
                }
                Some(v)
            }
            Kind::Staged(_) => None,
        }
    }

    pub fn fix(&self) -> FiniteSet {
        match &self.kind {
            Kind::Staged(st) => st.fix.clone(),
            Kind::Closed(f) => f.plus.clone(),
            Kind::Union(..) => FiniteSet::new(),
        }
    }

    pub fn avoid(&self) -> FiniteSet {
        match &self.kind {
            Kind::Staged(st) => st.avoid.clone(),
            Kind::Closed(f) => f.minus.clone(),
            Kind::Union(..) => FiniteSet::new(),
        }
    }

    pub fn parent(&self) -> Option<&CopyHandle> {
        match &self.kind {
            Kind::Staged(st) => st.parent.as_deref(),
            _ => None,
        }
    }

    pub fn is_proper(&self) -> bool {
        match &self.kind {
            Kind::Staged(st) => st.proper,
            _ => false,
        }
    }

    pub fn trace(&self) -> &[TraceRecord] {
        match &self.kind {
            Kind::Staged(st) => &st.trace,
            _ => &[],
        }
    }

    pub fn trace_json(&self) -> Vec<Value> {
        self.trace().iter().map(|r| r.to_json(self.s.as_ref())).collect()
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            Kind::Closed(f) => format!("{} = {}", self.label, f.describe()),
            _ => format!("{} at stage {}", self.label, self.stage),
        }
    }

    pub(crate) fn seal(mut self) -> Self {
        self.sealed = true;
        self
    }

    pub(crate) fn staged_mut(&mut self) -> Option<&mut Staged> {
        match &mut self.kind {
            Kind::Staged(st) => Some(st),
            _ => None,
        }
    }

    pub(crate) fn staged_ref(&self) -> Option<&Staged> {
        match &self.kind {
            Kind::Staged(st) => Some(st),
            _ => None,
        }
    }

    pub(crate) fn bump_stage(&mut self) {
        self.stage += 1;
    }
}

/// The copy U itself.
pub fn copy_identity(s: &Shared) -> CopyHandle {
    CopyHandle::closed(s, "U".to_string(), ClosedForm::new(Base::All))
}

fn is_plain_identity(c: &CopyHandle) -> bool {
    matches!(&c.kind, Kind::Closed(f) if f.base == Base::All && f.minus.is_empty())
}

fn uses_closed_forms(s: &dyn Structure) -> bool {
    !s.capabilities().explicit_maps
}

fn require_in(c: &CopyHandle, f: &FiniteSet) -> Result<()> {
    for p in f.iter() {
        if c.membership(p) != Membership::In {
            return Err(Error::Precondition(format!(
                "{} is not known to lie in {}",
                c.s.format_point(p),
                c.label
            )));
        }
    }
    Ok(())
}

/// Least point In `parent`, outside F, whose type over F is certified unranked.
fn avoidable_point(s: &dyn Structure, f: &FiniteSet, parent: &CopyHandle) -> Option<Point> {
    (0..crate::oracle::WITNESS_SCAN).map(Point).find(|&e| {
        !f.contains(e) && parent.membership(e) == Membership::In && s.rankedness(f, e) == Rankedness::Unranked
    })
}

fn fmt_set(s: &dyn Structure, f: &FiniteSet) -> String {
    crate::structures::format_set(s, f)
}

/// A copy fixing F pointwise with image inside `parent`; strictly smaller
/// than the parent when `proper`.
pub fn copy_through(s: &Shared, f: &FiniteSet, parent: &CopyHandle, proper: bool, seed: u64) -> Result<CopyHandle> {
    let sd = s.as_ref();
    require_in(parent, f)?;
    if proper && sd.capabilities().single_copy {
        return Err(Error::Unsupported(format!("{} has no copy other than U", sd.id())));
    }
    let avoid = if proper {
        let e = avoidable_point(sd, f, parent).ok_or_else(|| {
            Error::Unsupported(format!(
                "no certified unranked point over {} inside {}",
                fmt_set(sd, f),
                parent.label
            ))
        })?;
        FiniteSet::singleton(e)
    } else {
        FiniteSet::new()
    };
    let label = format!(
        "{}through{}({})",
        if proper { "proper-" } else { "" },
        fmt_set(sd, f),
        parent.label
    );
    if uses_closed_forms(sd) {
        let Kind::Closed(form) = &parent.kind else {
            return Err(Error::Unsupported(format!(
                "{} copies are built from closed forms only",
                sd.id()
            )));
        };
        let mut form = form.clone();
        form.plus = form.plus.union(f);
        form.minus = form.minus.union(&avoid);
        return Ok(CopyHandle::closed(s, label, form));
    }
    let parent = (!is_plain_identity(parent)).then(|| parent.clone());
    Ok(CopyHandle::staged(
        s,
        label,
        seed,
        Staged::new(f.clone(), avoid, parent, proper, true, seed),
    ))
}

/// Checks that every point of E may be excluded from a copy containing F.
fn check_avoidable(s: &dyn Structure, f: &FiniteSet, e: &FiniteSet) -> Result<()> {
    for p in e.iter() {
        if f.contains(p) {
            return Err(Error::Impossible(format!("{} lies in F", s.format_point(p))));
        }
        match s.rankedness(f, p) {
            Rankedness::Unranked => {}
            Rankedness::Ranked => {
                let t = TypeHandle::new(f.clone(), p)?;
                let cert = match typesets::rank_at_most(s, &t, 4, f.len().max(4)) {
                    Ok(ans) => ans.to_json(s).to_string(),
                    Err(_) => "ranked".into(),
                };
                return Err(Error::Impossible(format!(
                    "{} lies in the ranked closure of {}: {cert}",
                    s.format_point(p),
                    fmt_set(s, f)
                )));
            }
            Rankedness::Unknown => {
                return Err(Error::Unsupported(format!(
                    "rankedness of {} over {} is not certified",
                    s.format_point(p),
                    fmt_set(s, f)
                )))
            }
        }
    }
    Ok(())
}

/// A copy containing F and permanently excluding E.
pub fn copy_avoiding(s: &Shared, f: &FiniteSet, e: &FiniteSet, seed: u64) -> Result<CopyHandle> {
    let sd = s.as_ref();
    check_avoidable(sd, f, e)?;
    let label = format!("avoid{}{}", fmt_set(sd, f), fmt_set(sd, e));
    if uses_closed_forms(sd) {
        let mut form = ClosedForm::new(Base::All);
        form.plus = f.clone();
        form.minus = e.clone();
        return Ok(CopyHandle::closed(s, label, form));
    }
    Ok(CopyHandle::staged(
        s,
        label,
        seed,
        Staged::new(f.clone(), e.clone(), None, !e.is_empty(), true, seed),
    ))
}

/// C_0 ⊃ C_1 ⊃ … ⊃ C_k, all containing F. The unranked points of
/// U_window \ F are spread over the links so that every one of them is
/// excluded from some C_i; each link also excludes one point known to lie
/// in the previous link, which witnesses strictness. The returned handles
/// are snapshots after `stages` rounds.
pub fn descending_chain(
    s: &Shared,
    f: &FiniteSet,
    c0: &CopyHandle,
    k: usize,
    window_len: usize,
    stages: usize,
    seed: u64,
) -> Result<Vec<CopyHandle>> {
    let sd = s.as_ref();
    if sd.capabilities().single_copy {
        return Err(Error::Unsupported(format!("{} has no copy other than U", sd.id())));
    }
    require_in(c0, f)?;
    let pool: Vec<Point> = window(window_len)
        .filter(|&p| !f.contains(p) && sd.rankedness(f, p) == Rankedness::Unranked)
        .filter(|&p| c0.membership(p) == Membership::In)
        .collect();
    if pool.is_empty() && k > 0 {
        return Err(Error::Unsupported(format!(
            "no unranked type over {} in the window",
            fmt_set(sd, f)
        )));
    }
    let mut chunks = vec![FiniteSet::new(); k];
    for (i, p) in pool.iter().enumerate() {
        chunks[i % k.max(1)].insert(*p);
    }
    let mut chain = vec![c0.clone()];
    for (i, chunk) in chunks.into_iter().enumerate() {
        let prev = chain.last().expect("chain starts nonempty");
        let mut probe = prev.clone();
        probe.advance(window_len)?;
        let z = avoidable_point(sd, f, &probe)
            .filter(|z| !chunk.contains(*z))
            .or_else(|| {
                (0..crate::oracle::WITNESS_SCAN).map(Point).find(|&z| {
                    !f.contains(z)
                        && !chunk.contains(z)
                        && probe.membership(z) == Membership::In
                        && sd.rankedness(f, z) == Rankedness::Unranked
                })
            })
            .ok_or_else(|| Error::Unsupported("no point witnesses strictness".into()))?;
        let avoid = chunk.with(z);
        check_avoidable(sd, f, &avoid)?;
        let label = format!("chain[{}]", i + 1);
        let next = if uses_closed_forms(sd) {
            let Kind::Closed(form) = &probe.kind else {
                return Err(Error::Unsupported(format!(
                    "{} copies are built from closed forms only",
                    sd.id()
                )));
            };
            let mut form = form.clone();
            form.plus = form.plus.union(f);
            form.minus = form.minus.union(&avoid);
            CopyHandle::closed(s, label, form)
        } else {
            let parent = (!is_plain_identity(&probe)).then_some(probe);
            CopyHandle::staged(
                s,
                label,
                seed + i as u64,
                Staged::new(f.clone(), avoid, parent, true, true, seed + i as u64),
            )
        };
        chain.push(next);
    }
    let mut last = chain.pop().expect("chain starts nonempty");
    if k == 0 {
        return Ok(vec![last]);
    }
    last.advance(stages)?;
    // walk the parents down so every link reflects the same run
    let mut out = vec![last.clone()];
    let mut cur = last;
    while let Some(p) = cur.parent().cloned() {
        out.push(p.clone());
        cur = p;
    }
    out.truncate(k + 1);
    if out.len() < k + 1 {
        // closed forms and identity roots have no embedded parent
        let mut rest: Vec<CopyHandle> = chain.into_iter().rev().skip(out.len() - 1).collect();
        out.append(&mut rest);
    }
    out.reverse();
    Ok(out)
}

/// S_Q = (−1,0) ∪ ⋃_{s∈S} (s, s+1) inside (ℚ, <).
pub fn powerset_embedding_dlo(s: &Shared, set: &Subset) -> Result<CopyHandle> {
    if s.id() != "dlo" {
        return Err(Error::Unsupported(format!(
            "the powerset embedding needs dlo, not {}",
            s.id()
        )));
    }
    Ok(CopyHandle::closed(
        s,
        format!("S_Q{}", set.describe()),
        ClosedForm::new(Base::Dlo(DloSet::powerset(set.clone()))),
    ))
}

fn check_chain(members: &[CopyHandle], depth: usize) -> Result<()> {
    for w in members.windows(2) {
        let cert = crate::certify::check_inclusion(&w[0], &w[1], depth);
        if cert.verdict.is_fail() {
            return Err(Error::Contract(format!(
                "{} is not contained in {}",
                w[0].label, w[1].label
            )));
        }
    }
    Ok(())
}

/// Union of an ascending chain; inclusion is re-checked on U_depth at
/// every stage.
pub fn union_chain(chain: &[CopyHandle], depth: usize) -> Result<CopyHandle> {
    let first = chain.first().ok_or_else(|| Error::Precondition("empty chain".into()))?;
    check_chain(chain, depth)?;
    let labels: Vec<&str> = chain.iter().map(|c| c.label.as_str()).collect();
    Ok(CopyHandle {
        s: first.s.clone(),
        label: format!("union[{}]", labels.join(", ")),
        seed: first.seed,
        stage: first.stage,
        sealed: false,
        kind: Kind::Union(chain.to_vec(), depth),
    })
}

/// g⁻¹ ∘ f.
pub fn compose_restrict(s: &dyn Structure, f: &PartialMap, g: &PartialMap) -> Result<PartialMap> {
    if !s.extendable(f) || !s.extendable(g) {
        return Err(Error::Precondition("both maps must be extendable".into()));
    }
    let mut out = PartialMap::new();
    for &(a, b) in f.pairs() {
        let pre = g
            .preimage(b)
            .ok_or_else(|| Error::Precondition(format!("{} is not in the range of g", s.format_point(b))))?;
        out.insert(a, pre)?;
    }
    Ok(out)
}

/// Distinct types ⟨F ▷ x⟩ with F ⊆ U_depth, |F| ≤ cap, x ∈ U_depth \ F.
pub fn scheduled_types(s: &dyn Structure, depth: usize, cap: usize) -> Vec<TypeHandle> {
    let all: FiniteSet = window(depth).collect();
    let mut out = Vec::new();
    for f in all.subsets_up_to(cap) {
        let mut reps: Vec<Point> = Vec::new();
        for x in window(depth).filter(|&x| !f.contains(x)) {
            if !reps.iter().any(|&r| s.same_type(&f, r, x)) {
                reps.push(x);
            }
        }
        out.extend(reps.into_iter().map(|r| TypeHandle::new_unchecked(f.clone(), r)));
    }
    out
}

/// A Bernstein-style partition (A, B) of a prefix U_N, N ≥ depth: every
/// type with sockel in U_depth of size ≤ cap receives one fresh point on
/// each side. Unassigned points of the prefix go to A.
pub fn bernstein_base(s: &Shared, depth: usize, cap: usize, budget: u64) -> Result<(FiniteSet, FiniteSet)> {
    let sd = s.as_ref();
    if !sd.capabilities().infinite_orbits {
        return Err(Error::Unsupported(format!(
            "{} has finite stabilizer orbits on some complement",
            sd.id()
        )));
    }
    let mut a = FiniteSet::new();
    let mut b = FiniteSet::new();
    for t in scheduled_types(sd, depth, cap) {
        if let FinitenessAnswer::Finite(_) = sd.typeset_finite(t.sockel(), t.rep()) {
            return Err(Error::Contract("finite typeset on an infinite-orbit structure".into()));
        }
        let mut fresh = (0..budget)
            .map(Point)
            .filter(|&q| t.contains(sd, q) && !a.contains(q) && !b.contains(q));
        let (Some(pa), Some(pb)) = (fresh.next(), fresh.next()) else {
            return Err(Error::Budget {
                obligation: format!(
                    "two fresh members of <{} | {}>",
                    fmt_set(sd, t.sockel()),
                    sd.format_point(t.rep())
                ),
                scanned: budget,
            });
        };
        a.insert(pa);
        b.insert(pb);
    }
    let top = a
        .greatest()
        .max(b.greatest())
        .map_or(depth as u64, |m| (m.0 + 1).max(depth as u64));
    for p in (0..top).map(Point) {
        if !b.contains(p) {
            a.insert(p);
        }
    }
    Ok((a, b))
}

/// A second copy in the basic neighbourhood {C′ : F ⊆ C′, C′ ∩ E = ∅} of
/// `c`, different from `c`: it excludes a point known to lie in `c`.
pub fn neighbour_copy(
    s: &Shared,
    c: &CopyHandle,
    f: &FiniteSet,
    e: &FiniteSet,
    depth: usize,
    seed: u64,
) -> Result<(CopyHandle, Point)> {
    let sd = s.as_ref();
    require_in(c, f)?;
    for p in e.iter() {
        if c.membership(p) != Membership::Out {
            return Err(Error::Precondition(format!(
                "{} is not known to lie outside {}",
                sd.format_point(p),
                c.label
            )));
        }
    }
    let z = window(2 * depth)
        .find(|&z| c.membership(z) == Membership::In && !f.contains(z) && sd.rankedness(f, z) == Rankedness::Unranked)
        .ok_or_else(|| Error::Unsupported("no avoidable point of the copy inside U_2d".into()))?;
    let other = copy_avoiding(s, f, &e.with(z), seed)?;
    Ok((other, z))
}

/// The copy named by a command-line spec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CopySpec {
    Identity,
    Through(FiniteSet),
    Proper(FiniteSet),
    Avoid(FiniteSet, FiniteSet),
    Powerset(Subset),
    Planted,
}

impl CopySpec {
    pub fn parse(s: &dyn Structure, text: &str) -> Result<Self> {
        let t = text.trim();
        let (head, rest) = t.split_once(':').unwrap_or((t, ""));
        let set = |x: &str| crate::structures::parse_set(s, x);
        let bad = || {
            crate::structures::parse_err(
                s.id(),
                text,
                "expected identity, through:F, proper:F, avoid:F;E, powerset:S, powerset-co:S or planted",
            )
        };
        Ok(match head {
            "identity" => CopySpec::Identity,
            "through" => CopySpec::Through(set(rest)?),
            "proper" => CopySpec::Proper(set(rest)?),
            "avoid" => {
                let (f, e) = rest.split_once(';').ok_or_else(bad)?;
                CopySpec::Avoid(set(f)?, set(e)?)
            }
            "powerset" | "powerset-co" => {
                let nums = parse_omega(rest).ok_or_else(bad)?;
                if head == "powerset" {
                    CopySpec::Powerset(Subset::Finite(nums))
                } else {
                    CopySpec::Powerset(Subset::Cofinite(nums))
                }
            }
            "planted" => CopySpec::Planted,
            _ => return Err(bad()),
        })
    }

    pub fn build(&self, s: &Shared, seed: u64) -> Result<CopyHandle> {
        let u = copy_identity(s);
        match self {
            CopySpec::Identity => Ok(u),
            CopySpec::Through(f) => copy_through(s, f, &u, false, seed),
            CopySpec::Proper(f) => copy_through(s, f, &u, true, seed),
            CopySpec::Avoid(f, e) => copy_avoiding(s, f, e, seed),
            CopySpec::Powerset(set) => powerset_embedding_dlo(s, set),
            CopySpec::Planted => planted_non_copy(s),
        }
    }
}

/// Parses a comma-separated list of naturals ("" or "-" is empty).
pub fn parse_omega(text: &str) -> Option<BTreeSet<u64>> {
    let t = text.trim();
    if t.is_empty() || t == "-" {
        return Some(BTreeSet::new());
    }
    t.split(',').map(|x| x.trim().parse::<u64>().ok()).collect()
}

/// {−1} ∪ (0, ∞) on (ℚ, <): not a copy, the gap (−1, 0) is missed.
pub fn planted_non_copy(s: &Shared) -> Result<CopyHandle> {
    if s.id() != "dlo" {
        return Err(Error::Unsupported("the planted non-copy lives on dlo".into()));
    }
    let minus_one = s.parse_point("-1")?;
    let mut form = ClosedForm::new(Base::Dlo(DloSet {
        intervals: vec![(Some(crate::structures::Q::from_integer(0)), None)],
        units: None,
    }));
    form.plus.insert(minus_one);
    Ok(CopyHandle::planted(s, "planted{-1}+(0,inf)", form))
}
