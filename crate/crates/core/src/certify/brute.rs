//! Ground-truth orbit decisions from the raw data of each built-in.
//!
//! Nothing here calls the structures' own `same_type`/`extendable`; a
//! partial map is judged by re-checking every invariant relation pair by
//! pair (and, for the pairs action, by searching the underlying bijections
//! of ω exhaustively).

use crate::error::{Error, Result};
use crate::point::{FiniteSet, PartialMap, Point};
use crate::structures::tree::Node;
use crate::structures::{dlo, equiv, pairs, rado, zeta2, zetaeta, zorder, Structure};

/// Every pair of pairs (a ↦ b), (c ↦ d) of `m` satisfies `rel`.
fn pairwise(m: &PartialMap, rel: impl Fn((Point, Point), (Point, Point)) -> bool) -> bool {
    let v = m.pairs();
    v.iter()
        .enumerate()
        .all(|(i, &p)| v[i + 1..].iter().all(|&q| rel(p, q)))
}

/// Highest level at which the two root paths agree, found by walking down
/// from the lower node and comparing ancestors.
fn tree_meet(a: &Node, b: &Node) -> i64 {
    let mut m = a.level.min(b.level);
    while a.ancestor(m) != b.ancestor(m) {
        m -= 1;
    }
    m
}

fn tree_ok(m: &PartialMap) -> bool {
    let nodes: Vec<(Node, Node)> = m
        .pairs()
        .iter()
        .map(|&(a, b)| (Node::decode(a), Node::decode(b)))
        .collect();
    let Some((a0, b0)) = nodes.first() else {
        return true;
    };
    let shift = b0.level - a0.level;
    nodes.iter().all(|(a, b)| b.level - a.level == shift)
        && nodes.iter().enumerate().all(|(i, (a, b))| {
            nodes[i + 1..]
                .iter()
                .all(|(c, d)| tree_meet(b, d) - tree_meet(a, c) == shift)
        })
}

/// Searches a bijection σ of the underlying elements with σ[p] = m(p) for
/// every pair p in the domain.
fn pairs_ok(m: &PartialMap) -> bool {
    type Edge = ((u64, u64), (u64, u64));
    let items: Vec<Edge> = m
        .pairs()
        .iter()
        .map(|&(a, b)| (pairs::elements(a), pairs::elements(b)))
        .collect();
    fn go(items: &[Edge], sigma: &mut Vec<(u64, u64)>) -> bool {
        let Some((&((a, b), (c, d)), rest)) = items.split_first() else {
            return true;
        };
        for (x, y) in [(c, d), (d, c)] {
            let mark = sigma.len();
            if assign(sigma, a, x) && assign(sigma, b, y) && go(rest, sigma) {
                return true;
            }
            sigma.truncate(mark);
        }
        false
    }
    fn assign(sigma: &mut Vec<(u64, u64)>, from: u64, to: u64) -> bool {
        for &(f, t) in sigma.iter() {
            if f == from || t == to {
                return f == from && t == to;
            }
        }
        sigma.push((from, to));
        true
    }
    go(&items, &mut Vec::new())
}

/// Raw-data consistency of a finite partial injection.
pub fn brute_extendable(s: &dyn Structure, m: &PartialMap) -> Result<bool> {
    Ok(match s.id() {
        "pureset" => true,
        "dlo" => pairwise(m, |(a, b), (c, d)| {
            dlo::value(a.0).cmp(&dlo::value(c.0)) == dlo::value(b.0).cmp(&dlo::value(d.0))
        }),
        "rado" => pairwise(m, |(a, b), (c, d)| rado::adjacent(a.0, c.0) == rado::adjacent(b.0, d.0)),
        "equiv" => pairwise(m, |(a, b), (c, d)| {
            (equiv::class(a) == equiv::class(c)) == (equiv::class(b) == equiv::class(d))
        }),
        "zorder" => pairwise(m, |(a, b), (c, d)| {
            zorder::value(a) - zorder::value(c) == zorder::value(b) - zorder::value(d)
        }),
        "zeta2" => pairwise(m, |(a, b), (c, d)| {
            let ((a1, a2), (b1, b2), (c1, c2), (d1, d2)) =
                (zeta2::coords(a), zeta2::coords(b), zeta2::coords(c), zeta2::coords(d));
            a1 - c1 == b1 - d1 && (a1 != c1 || a2 - c2 == b2 - d2)
        }),
        "zetaeta" => pairwise(m, |(a, b), (c, d)| {
            let ((ar, an), (br, bn), (cr, cn), (dr, dn)) = (
                zetaeta::coords(a),
                zetaeta::coords(b),
                zetaeta::coords(c),
                zetaeta::coords(d),
            );
            ar.cmp(&cr) == br.cmp(&dr) && (ar != cr || an - cn == bn - dn)
        }),
        "treetz" => tree_ok(m),
        "pairs" => pairs_ok(m),
        other => return Err(Error::Unsupported(format!("no brute-force oracle for {other}"))),
    })
}

/// Whether id_F ∪ {x ↦ y} is consistent with the raw data, for inputs
/// inside U_ground_depth.
pub fn brute_same_type(s: &dyn Structure, f: &FiniteSet, x: Point, y: Point, ground_depth: usize) -> Result<bool> {
    let g = ground_depth as u64;
    if f.iter().chain([x, y]).any(|p| p.0 >= g) {
        return Err(Error::Precondition(format!("inputs must lie in U_{ground_depth}")));
    }
    if f.contains(x) || f.contains(y) {
        return Err(Error::Precondition(
            "type representatives must lie outside the sockel".into(),
        ));
    }
    let mut m = PartialMap::identity(f);
    m.insert(x, y)?;
    brute_extendable(s, &m)
}
