//! The tree T_ℤ: every node has a parent one level down and countably many
//! children, and any two nodes have a common ancestor. A node at level ℓ is
//! its choice sequence e_ℓ, e_{ℓ−1}, … (eventually zero), stored from e_ℓ
//! down to the last nonzero entry.

use super::zeta2::unwrap_brackets;
use super::{parse_err, parse_int, parse_nat, Capabilities, FinitenessAnswer, Rankedness, Structure};
use crate::error::{Error, Result};
use crate::point::codes::{cantor, seq_code, seq_decode, uncantor, unzigzag, zigzag};
use crate::point::{FiniteSet, PartialMap, Point};
use crate::typesets::TypeHandle;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    pub level: i64,
    /// e_level, e_{level−1}, …, last nonzero choice.
    pub choices: Vec<u64>,
}

impl Node {
    pub fn decode(p: Point) -> Node {
        let (i, j) = uncantor(p.0);
        let mut choices = seq_decode(j);
        if let Some(last) = choices.last_mut() {
            *last += 1;
        }
        Node {
            level: zigzag(i),
            choices,
        }
    }

    pub fn encode(&self) -> Option<Point> {
        let code = match self.choices.split_last() {
            None => 0,
            Some((&last, rest)) => {
                if last == 0 {
                    return None;
                }
                let mut v = rest.to_vec();
                v.push(last - 1);
                seq_code(&v)?
            }
        };
        cantor(unzigzag(self.level)?, code).map(Point)
    }

    pub fn choice(&self, m: i64) -> u64 {
        if m > self.level {
            return 0;
        }
        let k = self.level - m;
        self.choices.get(k as usize).copied().unwrap_or(0)
    }

    /// Every level at or below this one has choice zero.
    fn floor(&self) -> i64 {
        self.level - self.choices.len() as i64
    }

    /// Level of the meet x ∧ y.
    pub fn meet_level(&self, other: &Node) -> i64 {
        let top = self.level.min(other.level);
        let bottom = self.floor().min(other.floor());
        let mut m = bottom + 1;
        while m <= top {
            if self.choice(m) != other.choice(m) {
                return m - 1;
            }
            m += 1;
        }
        top
    }

    pub fn le(&self, other: &Node) -> bool {
        self.level <= other.level && self.meet_level(other) == self.level
    }

    /// The ancestor at level m ≤ self.level.
    pub fn ancestor(&self, m: i64) -> Node {
        let skip = (self.level - m) as usize;
        let mut choices: Vec<u64> = self.choices.iter().skip(skip).copied().collect();
        while choices.last() == Some(&0) {
            choices.pop();
        }
        Node { level: m, choices }
    }
}

fn in_downset(f: &FiniteSet, x: &Node) -> bool {
    f.iter().any(|p| x.le(&Node::decode(p)))
}

#[derive(Debug)]
pub struct TreeTz;

impl Structure for TreeTz {
    fn id(&self) -> &str {
        "treetz"
    }

    fn description(&self) -> &str {
        "tree T_Z: finite intervals, countably many successors, unique predecessor"
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
        let n = Node::decode(p);
        let parts: Vec<String> = n.choices.iter().map(|c| c.to_string()).collect();
        format!("L{}:[{}]", n.level, parts.join(","))
    }

    fn parse_point(&self, text: &str) -> Result<Point> {
        let t = text.trim();
        let rest = t
            .strip_prefix('L')
            .ok_or_else(|| parse_err("treetz", text, "expected L<level>:[…]"))?;
        let (level, list) = rest
            .split_once(':')
            .ok_or_else(|| parse_err("treetz", text, "expected L<level>:[…]"))?;
        let inner = unwrap_brackets("treetz", list, '[', ']')?;
        let choices = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|c| parse_nat("treetz", c))
                .collect::<Result<Vec<u64>>>()?
        };
        if choices.last() == Some(&0) {
            return Err(parse_err("treetz", text, "last listed choice must be nonzero"));
        }
        Node {
            level: parse_int("treetz", level)?,
            choices,
        }
        .encode()
        .ok_or(Error::Overflow)
    }

    fn extendable(&self, p: &PartialMap) -> bool {
        let v: Vec<(Node, Node)> = p
            .pairs()
            .iter()
            .map(|&(a, b)| (Node::decode(a), Node::decode(b)))
            .collect();
        let Some((a0, b0)) = v.first() else {
            return true;
        };
        let t = b0.level - a0.level;
        v.iter().enumerate().all(|(i, (a, b))| {
            b.level - a.level == t && v[..i].iter().all(|(c, d)| a.meet_level(c) + t == b.meet_level(d))
        })
    }

    fn extend_ok(&self, p: &PartialMap, x: Point, y: Point) -> bool {
        if p.in_domain(x) || p.in_range(y) {
            return p.get(x) == Some(y);
        }
        let (nx, ny) = (Node::decode(x), Node::decode(y));
        let t = ny.level - nx.level;
        p.pairs().iter().all(|&(a, b)| {
            let (na, nb) = (Node::decode(a), Node::decode(b));
            nb.level - na.level == t && nx.meet_level(&na) + t == ny.meet_level(&nb)
        })
    }

    /// The image level and the branch point below it are forced by the
    /// deepest meet of x with the domain; only choices above the branch
    /// point are free. Lists small choices there, not every candidate.
    fn image_candidates<'a>(&'a self, p: &PartialMap, x: Point) -> Option<Box<dyn Iterator<Item = Point> + 'a>> {
        if let Some(y) = p.get(x) {
            return Some(Box::new(std::iter::once(y)));
        }
        let nx = Node::decode(x);
        let pairs: Vec<(Node, Node)> = p
            .pairs()
            .iter()
            .map(|&(a, b)| (Node::decode(a), Node::decode(b)))
            .collect();
        let (a0, b0) = pairs.first()?;
        let t = b0.level - a0.level;
        let (star, m) = pairs
            .iter()
            .map(|(a, b)| (b, nx.meet_level(a)))
            .max_by_key(|&(_, m)| m)?;
        let top = nx.level + t;
        let branch = m + t;
        let anc = star.ancestor(branch);
        let mut out = Vec::new();
        if branch == top {
            out.extend(anc.encode());
        } else {
            let used: Vec<u64> = pairs
                .iter()
                .filter(|(_, b)| b.level > branch && b.ancestor(branch) == anc)
                .map(|(_, b)| b.choice(branch + 1))
                .collect();
            let free = (top - branch) as usize;
            let firsts = (0u64..).filter(|c| !used.contains(c)).take(free + 3);
            for c in firsts {
                for bump in 0..free {
                    let mut head = vec![0u64; free];
                    head[free - 1] = c;
                    if bump + 1 < free {
                        head[bump] = 1;
                    }
                    let mut choices = head;
                    choices.extend((0..=(branch - anc.floor())).map(|k| anc.choice(branch - k)));
                    while choices.last() == Some(&0) {
                        choices.pop();
                    }
                    out.extend(Node { level: top, choices }.encode());
                }
            }
        }
        out.sort();
        out.dedup();
        Some(Box::new(out.into_iter()))
    }

    fn same_type(&self, f: &FiniteSet, x: Point, y: Point) -> bool {
        if f.is_empty() {
            return true;
        }
        let (nx, ny) = (Node::decode(x), Node::decode(y));
        nx.level == ny.level
            && f.iter().all(|p| {
                let n = Node::decode(p);
                nx.meet_level(&n) == ny.meet_level(&n)
            })
    }

    fn typeset_finite(&self, f: &FiniteSet, x: Point) -> FinitenessAnswer {
        if f.contains(x) || in_downset(f, &Node::decode(x)) {
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_roundtrip() {
        for i in 0..3000u64 {
            let n = Node::decode(Point(i));
            assert_eq!(n.encode(), Some(Point(i)));
        }
    }

    #[test]
    fn meets_and_ancestors() {
        let a = Node {
            level: 2,
            choices: vec![0, 3, 0, 1],
        };
        let b = Node {
            level: 1,
            choices: vec![3, 0, 1],
        };
        let c = Node {
            level: 1,
            choices: vec![2, 0, 1],
        };
        assert!(b.le(&a));
        assert_eq!(a.ancestor(1), b);
        assert_eq!(a.meet_level(&c), 0);
        assert_eq!(
            a.ancestor(-1),
            Node {
                level: -1,
                choices: vec![1]
            }
        );
        assert_eq!(
            a.ancestor(-2),
            Node {
                level: -2,
                choices: vec![]
            }
        );
    }
}
