//! Types ⟨F ▷ p⟩, typesets, continuations and bounded rank search.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::point::{window, FiniteSet, PartialMap, Point};
use crate::structures::{FinitenessAnswer, Rankedness, Structure};

/// Largest extension F′ \ F tried by [`rank_at_most`].
pub const SEARCH_CAP: usize = 6;
/// Continuation representatives are drawn from U_{REP_FACTOR · window}.
pub const REP_FACTOR: usize = 4;
/// Scan limit when streaming members of an infinite typeset.
pub const MEMBER_SCAN: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypeHandle {
    sockel: FiniteSet,
    rep: Point,
}

impl TypeHandle {
    pub fn new(sockel: FiniteSet, rep: Point) -> Result<Self> {
        if sockel.contains(rep) {
            return Err(Error::Precondition("representative lies in the sockel".into()));
        }
        Ok(TypeHandle { sockel, rep })
    }

    pub(crate) fn new_unchecked(sockel: FiniteSet, rep: Point) -> Self {
        TypeHandle { sockel, rep }
    }

    pub fn sockel(&self) -> &FiniteSet {
        &self.sockel
    }

    pub fn rep(&self) -> Point {
        self.rep
    }

    pub fn same(&self, s: &dyn Structure, other: &TypeHandle) -> bool {
        self.sockel == other.sockel && s.same_type(&self.sockel, self.rep, other.rep)
    }

    pub fn contains(&self, s: &dyn Structure, q: Point) -> bool {
        !self.sockel.contains(q) && s.same_type(&self.sockel, self.rep, q)
    }
}

/// The first `n` members of G⟨F ▷ p⟩ in enumeration order.
pub fn typeset_members(s: &dyn Structure, t: &TypeHandle, n: usize) -> Vec<Point> {
    if let FinitenessAnswer::Finite(all) = s.typeset_finite(&t.sockel, t.rep) {
        return all.iter().take(n).collect();
    }
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while out.len() < n && i < MEMBER_SCAN {
        let q = Point(i);
        if t.contains(s, q) {
            out.push(q);
        }
        i += 1;
    }
    out
}

/// Members of the typeset inside U_depth.
pub fn typeset_in_window(s: &dyn Structure, t: &TypeHandle, depth: usize) -> Vec<Point> {
    window(depth).filter(|&q| t.contains(s, q)).collect()
}

/// Representatives (enumeration-least) of the distinct continuations
/// ⟨E ▷ q⟩ for q in the typeset of `t` inside U_depth.
pub fn continuation_partition(
    s: &dyn Structure,
    t: &TypeHandle,
    e: &FiniteSet,
    depth: usize,
) -> Result<Vec<TypeHandle>> {
    if !t.sockel.is_subset(e) {
        return Err(Error::Precondition("sockel must be contained in E".into()));
    }
    Ok(classes(s, t, e, depth))
}

fn classes(s: &dyn Structure, t: &TypeHandle, e: &FiniteSet, depth: usize) -> Vec<TypeHandle> {
    let mut reps: Vec<TypeHandle> = Vec::new();
    for q in typeset_in_window(s, t, depth) {
        if e.contains(q) {
            continue;
        }
        if !reps.iter().any(|r| s.same_type(e, r.rep, q)) {
            reps.push(TypeHandle::new_unchecked(e.clone(), q));
        }
    }
    reps
}

/// Evidence that a type has rank at most `rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankWitness {
    pub rank: u32,
    /// F′ at this level (equals the sockel for rank-0 leaves).
    pub extension: FiniteSet,
    /// Full typeset listing for rank-0 leaves.
    pub leaf: Option<FiniteSet>,
    pub continuations: Vec<(Point, RankWitness)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankAnswer {
    AtMost { rank: u32, witness: RankWitness },
    NotWithin { k: u32, window: usize },
    Unranked { certified: bool, witness: Option<Point> },
}

impl RankAnswer {
    pub fn at_most(&self) -> Option<u32> {
        match self {
            RankAnswer::AtMost { rank, .. } => Some(*rank),
            _ => None,
        }
    }

    pub fn is_unranked(&self) -> bool {
        matches!(self, RankAnswer::Unranked { certified: true, .. })
    }

    pub fn to_json(&self, s: &dyn Structure) -> Value {
        match self {
            RankAnswer::AtMost { rank, witness } => {
                json!({"answer": "at-most", "rank": rank, "witness": witness_json(s, witness, 0)})
            }
            RankAnswer::NotWithin { k, window } => {
                json!({"answer": "not-within", "k": k, "window": window})
            }
            RankAnswer::Unranked { certified, witness } => json!({
                "answer": "unranked",
                "certified": certified,
                "witness": witness.map(|p| s.format_point(p)),
            }),
        }
    }
}

fn witness_json(s: &dyn Structure, w: &RankWitness, level: u32) -> Value {
    let fmt = |set: &FiniteSet| -> Vec<String> { set.iter().map(|p| s.format_point(p)).collect() };
    json!({
        "level": level,
        "rank": w.rank,
        "F'": fmt(&w.extension),
        "leaf": w.leaf.as_ref().map(fmt),
        "continuations": w.continuations.iter().map(|(q, sub)| json!({
            "rep": s.format_point(*q),
            "evidence": witness_json(s, sub, level + 1),
        })).collect::<Vec<_>>(),
    })
}

/// Bounded search for rank ≤ k: each level looks for F′ = F ∪ S with
/// S ⊆ ({p} ∪ U_window) \ F, |S| ≤ [`SEARCH_CAP`], such that every
/// continuation over F′ (represented inside U_{4·window}) has smaller rank.
pub fn rank_at_most(s: &dyn Structure, t: &TypeHandle, k: u32, window_len: usize) -> Result<RankAnswer> {
    if window_len < t.sockel.len() {
        return Err(Error::Precondition("window must be at least the sockel size".into()));
    }
    Ok(rank_rec(s, t, k, window_len))
}

fn rank_rec(s: &dyn Structure, t: &TypeHandle, k: u32, w: usize) -> RankAnswer {
    match s.rankedness(&t.sockel, t.rep) {
        Rankedness::Unranked => {
            let witness = crate::oracle::unranked_witness(s, &t.sockel, t.rep, &t.sockel.with(t.rep))
                .ok()
                .flatten();
            return RankAnswer::Unranked {
                certified: true,
                witness,
            };
        }
        Rankedness::Ranked | Rankedness::Unknown => {}
    }
    if let FinitenessAnswer::Finite(all) = s.typeset_finite(&t.sockel, t.rep) {
        return RankAnswer::AtMost {
            rank: 0,
            witness: RankWitness {
                rank: 0,
                extension: t.sockel.clone(),
                leaf: Some(all),
                continuations: Vec::new(),
            },
        };
    }
    if k == 0 {
        return RankAnswer::NotWithin { k, window: w };
    }
    let mut pool = vec![t.rep];
    pool.extend(window(w).filter(|&q| q != t.rep && !t.sockel.contains(q)));
    let pool: Vec<Point> = pool;
    for size in 1..=SEARCH_CAP.min(pool.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let ext: FiniteSet = t.sockel.union(&idx.iter().map(|&i| pool[i]).collect());
            if let Some(wit) = try_extension(s, t, &ext, k, w) {
                return RankAnswer::AtMost {
                    rank: wit.rank,
                    witness: wit,
                };
            }
            if !next_combination(&mut idx, pool.len()) {
                break;
            }
        }
    }
    RankAnswer::NotWithin { k, window: w }
}

fn try_extension(s: &dyn Structure, t: &TypeHandle, ext: &FiniteSet, k: u32, w: usize) -> Option<RankWitness> {
    let mut conts = Vec::new();
    let mut worst = 0;
    for c in classes(s, t, ext, REP_FACTOR * w) {
        match rank_rec(s, &c, k - 1, w) {
            RankAnswer::AtMost { rank, witness } => {
                worst = worst.max(rank);
                conts.push((c.rep, witness));
            }
            _ => return None,
        }
    }
    Some(RankWitness {
        rank: worst + 1,
        extension: ext.clone(),
        leaf: None,
        continuations: conts,
    })
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Number of orbits of n-tuples (repeats allowed) drawn from U_window.
pub fn oligomorphic_profile(s: &dyn Structure, n: usize, window_len: usize) -> Result<usize> {
    if n == 0 || n > 4 {
        return Err(Error::Precondition("tuple length must be between 1 and 4".into()));
    }
    if window_len < n {
        return Err(Error::Precondition("window must be at least the tuple length".into()));
    }
    let mut reps: Vec<Vec<Point>> = Vec::new();
    let total = window_len.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let tuple: Vec<Point> = (0..n)
            .map(|_| {
                let p = Point((c % window_len) as u64);
                c /= window_len;
                p
            })
            .collect();
        if !reps.iter().any(|r| same_orbit(s, r, &tuple)) {
            reps.push(tuple);
        }
    }
    Ok(reps.len())
}

fn same_orbit(s: &dyn Structure, a: &[Point], b: &[Point]) -> bool {
    let mut m = PartialMap::new();
    for (i, (&x, &y)) in a.iter().zip(b).enumerate() {
        for j in 0..i {
            if (a[j] == x) != (b[j] == y) {
                return false;
            }
        }
        if m.insert(x, y).is_err() {
            return false;
        }
    }
    s.extendable(&m)
}
