//! Copies (and planted non-copies) with total, closed-form membership.

use std::collections::BTreeSet;

use crate::point::{FiniteSet, Point};
use crate::structures::dlo::{self, least_between, Q};

/// A subset of ω given as a finite set or as the complement of one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subset {
    Finite(BTreeSet<u64>),
    Cofinite(BTreeSet<u64>),
}

impl Subset {
    pub fn finite<I: IntoIterator<Item = u64>>(it: I) -> Self {
        Subset::Finite(it.into_iter().collect())
    }

    pub fn contains(&self, n: u64) -> bool {
        match self {
            Subset::Finite(s) => s.contains(&n),
            Subset::Cofinite(s) => !s.contains(&n),
        }
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        match (self, other) {
            (Subset::Finite(a), _) => a.iter().all(|&n| other.contains(n)),
            (Subset::Cofinite(_), Subset::Finite(_)) => false,
            (Subset::Cofinite(a), Subset::Cofinite(b)) => b.is_subset(a),
        }
    }

    fn bound(&self) -> u64 {
        match self {
            Subset::Finite(s) | Subset::Cofinite(s) => s.iter().next_back().map_or(0, |m| m + 1),
        }
    }

    pub fn describe(&self) -> String {
        let list = |s: &BTreeSet<u64>| s.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",");
        match self {
            Subset::Finite(s) => format!("{{{}}}", list(s)),
            Subset::Cofinite(s) => format!("omega-{{{}}}", list(s)),
        }
    }
}

/// Union of open rational intervals and of the unit intervals (s, s+1)
/// for s in a subset of ω.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DloSet {
    pub intervals: Vec<(Option<Q>, Option<Q>)>,
    pub units: Option<Subset>,
}

impl DloSet {
    pub fn full() -> Self {
        DloSet {
            intervals: vec![(None, None)],
            units: None,
        }
    }

    /// S_Q = (−1, 0) ∪ ⋃_{s ∈ S} (s, s+1).
    pub fn powerset(s: Subset) -> Self {
        DloSet {
            intervals: vec![(Some(Q::from_integer(-1)), Some(Q::from_integer(0)))],
            units: Some(s),
        }
    }

    pub fn contains(&self, q: Q) -> bool {
        let in_interval = self
            .intervals
            .iter()
            .any(|&(lo, hi)| lo.is_none_or(|l| q > l) && hi.is_none_or(|h| q < h));
        in_interval
            || self
                .units
                .as_ref()
                .is_some_and(|u| !q.is_integer() && q > Q::from_integer(0) && u.contains(q.floor().to_integer() as u64))
    }

    fn finite_marks(&self, out: &mut Vec<Q>) {
        for &(lo, hi) in &self.intervals {
            out.extend(lo);
            out.extend(hi);
        }
        if let Some(u) = &self.units {
            out.push(Q::from_integer(0));
            out.push(Q::from_integer(u.bound() as i64 + 1));
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Base {
    All,
    Dlo(DloSet),
    /// Rado points whose binary expansion has the given popcount parity.
    RadoParity(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub base: Base,
    pub plus: FiniteSet,
    pub minus: FiniteSet,
}

impl ClosedForm {
    pub fn new(base: Base) -> Self {
        ClosedForm {
            base,
            plus: FiniteSet::new(),
            minus: FiniteSet::new(),
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        if self.plus.contains(p) {
            return true;
        }
        if self.minus.contains(p) {
            return false;
        }
        match &self.base {
            Base::All => true,
            Base::Dlo(set) => set.contains(dlo::value(p.0)),
            Base::RadoParity(par) => p.0.count_ones() % 2 == *par,
        }
    }

    /// The DLO region behind this form, when it has one.
    pub(crate) fn dlo_region(&self) -> Option<DloSet> {
        match &self.base {
            Base::All => Some(DloSet::full()),
            Base::Dlo(set) => Some(set.clone()),
            Base::RadoParity(_) => None,
        }
    }

    pub fn describe(&self) -> String {
        let base = match &self.base {
            Base::All => "U".to_string(),
            Base::Dlo(set) => {
                let mut parts: Vec<String> = set
                    .intervals
                    .iter()
                    .map(|(lo, hi)| {
                        format!(
                            "({},{})",
                            lo.map_or("-inf".into(), dlo::format_q),
                            hi.map_or("inf".into(), dlo::format_q)
                        )
                    })
                    .collect();
                if let Some(u) = &set.units {
                    parts.push(format!("units{}", u.describe()));
                }
                parts.join("+")
            }
            Base::RadoParity(p) => format!("parity{p}"),
        };
        let mut out = base;
        if !self.plus.is_empty() {
            out.push_str(&format!(" +{:?}", self.plus.iter().map(|p| p.0).collect::<Vec<_>>()));
        }
        if !self.minus.is_empty() {
            out.push_str(&format!(" -{:?}", self.minus.iter().map(|p| p.0).collect::<Vec<_>>()));
        }
        out
    }
}

impl ClosedForm {
    /// Rationals at which membership may change.
    pub(crate) fn marks(&self, out: &mut Vec<Q>) {
        if let Some(region) = self.dlo_region() {
            region.finite_marks(out);
        }
        for p in self.plus.iter().chain(self.minus.iter()) {
            out.push(dlo::value(p.0));
        }
    }
}

/// Representative rationals of every region on which all the given forms
/// have constant membership, restricted to the open interval (lo, hi).
/// Each representative is the least-index point of its region.
pub(crate) fn sample_points(marks: &[Q], lo: Option<Q>, hi: Option<Q>) -> Vec<Q> {
    let inside = |q: &Q| lo.is_none_or(|l| *q > l) && hi.is_none_or(|h| *q < h);
    let mut pts: Vec<Q> = marks.to_vec();
    pts.extend(lo);
    pts.extend(hi);
    let (min, max) = match (pts.iter().min().copied(), pts.iter().max().copied()) {
        (Some(a), Some(b)) => (a, b),
        _ => (Q::from_integer(0), Q::from_integer(0)),
    };
    let lo_int = min.floor().to_integer().min(0) - 1;
    let hi_int = max.ceil().to_integer().max(0) + 1;
    for n in lo_int..=hi_int {
        pts.push(Q::from_integer(n));
    }
    pts.sort();
    pts.dedup();
    let mut out = Vec::new();
    for w in pts.windows(2) {
        if let Some(q) = least_between(Some(w[0]), Some(w[1])) {
            if inside(&q) {
                out.push(q);
            }
        }
    }
    out.extend(pts.iter().copied().filter(|q| inside(q)));
    let (first, last) = (pts[0], pts[pts.len() - 1]);
    let half = Q::new(1, 2);
    for q in [
        first - Q::from_integer(1),
        first - half,
        last + Q::from_integer(1),
        last + half,
    ] {
        if inside(&q) {
            out.push(q);
        }
    }
    out.sort_by_key(|q| dlo::index(*q).unwrap_or(u64::MAX));
    out.dedup();
    out
}
