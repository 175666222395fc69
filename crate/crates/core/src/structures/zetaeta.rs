//! ζ·η: a copy of ℤ for every rational. Point (r, n) is offset n in the
//! block indexed by r; automorphisms move blocks by an order automorphism
//! of ℚ and shift each block independently.

use std::collections::HashMap;

use super::dlo::{self, format_q, parse_q, Q};
use super::zeta2::unwrap_brackets;
use super::{parse_err, parse_int, Capabilities, FinitenessAnswer, Rankedness, Structure};
use crate::error::{Error, Result};
use crate::point::codes::{cantor, uncantor, unzigzag, zigzag};
use crate::point::{FiniteSet, PartialMap, Point};
use crate::typesets::TypeHandle;

pub fn coords(p: Point) -> (Q, i64) {
    let (i, j) = uncantor(p.0);
    (dlo::value(i), zigzag(j))
}

pub fn point(r: Q, n: i64) -> Option<Point> {
    cantor(dlo::index(r)?, unzigzag(n)?).map(Point)
}

#[derive(Debug)]
pub struct ZetaEta;

impl ZetaEta {
    fn in_sockel_block(f: &FiniteSet, r: Q) -> bool {
        f.iter().any(|p| coords(p).0 == r)
    }
}

impl Structure for ZetaEta {
    fn id(&self) -> &str {
        "zetaeta"
    }

    fn description(&self) -> &str {
        "order type zeta*eta (rationally many copies of Z)"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            finiteness_exact: true,
            unranked_witness: true,
            algebraically_finite: false,
            disjoint_amalgamation: false,
            single_copy: false,
            infinite_orbits: false,
            explicit_maps: true,
        }
    }

    fn format_point(&self, p: Point) -> String {
        let (r, n) = coords(p);
        format!("({}|{n})", format_q(r))
    }

    fn parse_point(&self, text: &str) -> Result<Point> {
        let inner = unwrap_brackets("zetaeta", text, '(', ')')?;
        let (r, n) = inner
            .split_once('|')
            .ok_or_else(|| parse_err("zetaeta", text, "expected (p/q|n)"))?;
        let r = parse_q(r).ok_or_else(|| parse_err("zetaeta", text, "bad block rational"))?;
        point(r, parse_int("zetaeta", n)?).ok_or(Error::Overflow)
    }

    fn extendable(&self, p: &PartialMap) -> bool {
        let mut blocks: HashMap<Q, Q> = HashMap::new();
        let mut shift: HashMap<Q, i64> = HashMap::new();
        for &(x, y) in p.pairs() {
            let ((r, n), (s, m)) = (coords(x), coords(y));
            if *blocks.entry(r).or_insert(s) != s {
                return false;
            }
            if *shift.entry(r).or_insert(m - n) != m - n {
                return false;
            }
        }
        let mut v: Vec<(Q, Q)> = blocks.into_iter().collect();
        v.sort();
        v.windows(2).all(|w| w[0].1 < w[1].1)
    }

    fn same_type(&self, f: &FiniteSet, x: Point, y: Point) -> bool {
        if f.is_empty() {
            return true;
        }
        let (rx, ry) = (coords(x).0, coords(y).0);
        if Self::in_sockel_block(f, rx) {
            return x == y;
        }
        f.iter().all(|p| {
            let b = coords(p).0;
            rx.cmp(&b) == ry.cmp(&b)
        })
    }

    fn typeset_finite(&self, f: &FiniteSet, x: Point) -> FinitenessAnswer {
        if f.contains(x) || Self::in_sockel_block(f, coords(x).0) {
            FinitenessAnswer::Finite(FiniteSet::singleton(x))
        } else {
            FinitenessAnswer::Infinite(TypeHandle::new_unchecked(f.clone(), x))
        }
    }

    fn rankedness(&self, f: &FiniteSet, x: Point) -> Rankedness {
        if self.typeset_finite(f, x).is_finite() {
            Rankedness::Ranked
        } else {
            Rankedness::Unranked
        }
    }
}
