//! (ℚ, <) with the signed Stern–Brocot breadth-first enumeration:
//! 0, then level by level the positive nodes left to right followed by
//! their negatives.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use num_rational::Ratio;

use super::{parse_err, Capabilities, FinitenessAnswer, Rankedness, Structure};
use crate::error::{Error, Result};
use crate::point::{FiniteSet, PartialMap, Point};
use crate::typesets::TypeHandle;

pub type Q = Ratio<i64>;

const MAX_DEPTH: u32 = 61;
const CACHE: usize = 1 << 14;

fn cache() -> &'static Vec<Q> {
    static TABLE: OnceLock<Vec<Q>> = OnceLock::new();
    TABLE.get_or_init(|| (0..CACHE as u64).map(decode).collect())
}

/// The rational at enumeration position `idx`.
pub fn value(idx: u64) -> Q {
    if (idx as usize) < CACHE {
        cache()[idx as usize]
    } else {
        decode(idx)
    }
}

fn decode(idx: u64) -> Q {
    if idx == 0 {
        return Q::from_integer(0);
    }
    let n = idx as u128 + 1;
    let level = 127 - n.leading_zeros();
    let off = n - (1u128 << level);
    let depth = level - 1;
    let half = 1u128 << depth;
    let neg = off >= half;
    let o = if neg { off - half } else { off };
    let (mut ln, mut ld, mut hn, mut hd) = (0i128, 1i128, 1i128, 0i128);
    let (mut nn, mut nd) = (1i128, 1i128);
    for k in (0..depth).rev() {
        if (o >> k) & 1 == 0 {
            hn = nn;
            hd = nd;
        } else {
            ln = nn;
            ld = nd;
        }
        nn = ln + hn;
        nd = ld + hd;
    }
    let q = Q::new(nn as i64, nd as i64);
    if neg {
        -q
    } else {
        q
    }
}

/// Enumeration position of `q`, if it fits.
pub fn index(q: Q) -> Option<u64> {
    if *q.numer() == 0 {
        return Some(0);
    }
    let neg = *q.numer() < 0;
    let (p, d) = (q.numer().unsigned_abs() as i128, *q.denom() as i128);
    let (mut ln, mut ld, mut hn, mut hd) = (0i128, 1i128, 1i128, 0i128);
    let (mut nn, mut nd) = (1i128, 1i128);
    let mut path: u64 = 0;
    let mut depth: u32 = 0;
    loop {
        match (p * nd).cmp(&(nn * d)) {
            Ordering::Equal => break,
            Ordering::Less => {
                path <<= 1;
                hn = nn;
                hd = nd;
            }
            Ordering::Greater => {
                path = (path << 1) | 1;
                ln = nn;
                ld = nd;
            }
        }
        depth += 1;
        if depth > MAX_DEPTH {
            return None;
        }
        nn = ln + hn;
        nd = ld + hd;
    }
    let base = (1u64 << (depth + 1)) - 1;
    Some(base + if neg { 1u64 << depth } else { 0 } + path)
}

pub fn format_q(q: Q) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_q(text: &str) -> Option<Q> {
    let t = text.trim();
    match t.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().ok()?;
            let b: i64 = b.trim().parse().ok()?;
            if b <= 0 {
                return None;
            }
            Some(Q::new(a, b))
        }
        None => t.parse::<i64>().ok().map(Q::from_integer),
    }
}

/// Least-index rational in the open interval (lo, hi); `None` bounds are
/// infinite. Returns `None` when the interval is empty or the answer is too
/// deep to index.
pub fn least_between(lo: Option<Q>, hi: Option<Q>) -> Option<Q> {
    if let (Some(a), Some(b)) = (lo, hi) {
        if a >= b {
            return None;
        }
    }
    let zero = Q::from_integer(0);
    let below_zero = lo.is_none_or(|a| a < zero);
    let above_zero = hi.is_none_or(|b| b > zero);
    if below_zero && above_zero {
        return Some(zero);
    }
    if !below_zero {
        positive_between(lo.unwrap_or(zero), hi)
    } else {
        // hi ≤ 0
        positive_between(-hi.unwrap_or(zero), lo.map(|a| -a)).map(|q| -q)
    }
}

fn positive_between(lo: Q, hi: Option<Q>) -> Option<Q> {
    let (mut ln, mut ld, mut hn, mut hd) = (0i64, 1i64, 1i64, 0i64);
    let (mut nn, mut nd) = (1i64, 1i64);
    for _ in 0..=MAX_DEPTH {
        let node = Q::new(nn, nd);
        if node <= lo {
            ln = nn;
            ld = nd;
        } else if hi.is_some_and(|h| node >= h) {
            hn = nn;
            hd = nd;
        } else {
            return Some(node);
        }
        nn = ln.checked_add(hn)?;
        nd = ld.checked_add(hd)?;
    }
    None
}

/// Pending subintervals keyed by the index of their least point.
type Pending = BinaryHeap<Reverse<(u64, Option<Q>, Option<Q>)>>;

/// Every indexable rational of the open interval (lo, hi), in increasing
/// enumeration order.
pub fn points_between(lo: Option<Q>, hi: Option<Q>) -> impl Iterator<Item = Point> {
    let mut heap = BinaryHeap::new();
    let push = |heap: &mut Pending, lo: Option<Q>, hi: Option<Q>| {
        if let Some(i) = least_between(lo, hi).and_then(index) {
            heap.push(Reverse((i, lo, hi)));
        }
    };
    push(&mut heap, lo, hi);
    std::iter::from_fn(move || {
        let Reverse((i, lo, hi)) = heap.pop()?;
        let q = value(i);
        push(&mut heap, lo, Some(q));
        push(&mut heap, Some(q), hi);
        Some(Point(i))
    })
}

/// The open gap of `f` (as rationals) containing `x`: (max below, min above).
pub fn gap(f: &FiniteSet, x: Q) -> (Option<Q>, Option<Q>) {
    let mut lo: Option<Q> = None;
    let mut hi: Option<Q> = None;
    for p in f.iter() {
        let v = value(p.0);
        if v < x && lo.is_none_or(|l| v > l) {
            lo = Some(v);
        }
        if v > x && hi.is_none_or(|h| v < h) {
            hi = Some(v);
        }
    }
    (lo, hi)
}

#[derive(Debug)]
pub struct Dlo;

impl Structure for Dlo {
    fn id(&self) -> &str {
        "dlo"
    }

    fn description(&self) -> &str {
        "dense linear order (Q,<), signed Stern-Brocot enumeration"
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
        format_q(value(p.0))
    }

    fn parse_point(&self, text: &str) -> Result<Point> {
        let q = parse_q(text).ok_or_else(|| parse_err("dlo", text, "expected p/q or an integer"))?;
        index(q).map(Point).ok_or(Error::Overflow)
    }

    fn extendable(&self, p: &PartialMap) -> bool {
        let mut v: Vec<(Q, Q)> = p.pairs().iter().map(|&(a, b)| (value(a.0), value(b.0))).collect();
        v.sort();
        v.windows(2).all(|w| w[0].1 < w[1].1)
    }

    fn extend_ok(&self, p: &PartialMap, x: Point, y: Point) -> bool {
        if p.in_domain(x) || p.in_range(y) {
            return p.get(x) == Some(y);
        }
        let (vx, vy) = (value(x.0), value(y.0));
        p.pairs()
            .iter()
            .all(|&(a, b)| vx.cmp(&value(a.0)) == vy.cmp(&value(b.0)))
    }

    fn image_candidates<'a>(&'a self, p: &PartialMap, x: Point) -> Option<Box<dyn Iterator<Item = Point> + 'a>> {
        if let Some(y) = p.get(x) {
            return Some(Box::new(std::iter::once(y)));
        }
        let vx = value(x.0);
        let mut lo: Option<(Q, Q)> = None;
        let mut hi: Option<(Q, Q)> = None;
        for &(a, b) in p.pairs() {
            let (va, vb) = (value(a.0), value(b.0));
            if va < vx && lo.is_none_or(|(l, _)| va > l) {
                lo = Some((va, vb));
            }
            if va > vx && hi.is_none_or(|(h, _)| va < h) {
                hi = Some((va, vb));
            }
        }
        Some(Box::new(points_between(lo.map(|t| t.1), hi.map(|t| t.1))))
    }

    fn same_type(&self, f: &FiniteSet, x: Point, y: Point) -> bool {
        let (vx, vy) = (value(x.0), value(y.0));
        f.iter().all(|p| {
            let v = value(p.0);
            vx.cmp(&v) == vy.cmp(&v)
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

    /// Least point of the F′-gap containing x, or of the gap just above x
    /// when x ∈ F′.
    fn preferred_unranked_witness(&self, f: &FiniteSet, x: Point, f2: &FiniteSet) -> Option<Point> {
        if f.contains(x) {
            return None;
        }
        let vx = value(x.0);
        let (lo, hi) = if f2.contains(x) {
            let (_, hi) = gap(f2, vx);
            (Some(vx), hi)
        } else {
            gap(f2, vx)
        };
        let q = least_between(lo, hi)?;
        let p = Point(index(q)?);
        // stay inside the typeset of ⟨F ▷ x⟩
        if self.same_type(f, x, p) {
            Some(p)
        } else {
            None
        }
    }

    fn algebraic_closure_exact(&self, s: &FiniteSet) -> Option<FiniteSet> {
        Some(s.clone())
    }
}
