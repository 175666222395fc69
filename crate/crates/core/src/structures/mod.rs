//! Built-in group actions and the oracle interface they implement.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::point::{FiniteSet, PartialMap, Point};
use crate::typesets::TypeHandle;

pub mod dlo;
pub mod equiv;
pub mod pairs;
pub mod pureset;
pub mod rado;
pub mod tree;
pub mod zeta2;
pub mod zetaeta;
pub mod zorder;

pub use dlo::Q;
pub use tree::Node;

/// Answer to "is the typeset ⟨F ▷ x⟩ finite?".
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FinitenessAnswer {
    /// The complete typeset.
    Finite(FiniteSet),
    /// The typeset is infinite; its members can be streamed from the type.
    Infinite(TypeHandle),
    Unknown {
        window: usize,
    },
}

impl FinitenessAnswer {
    pub fn is_finite(&self) -> bool {
        matches!(self, FinitenessAnswer::Finite(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rankedness {
    Ranked,
    Unranked,
    Unknown,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Capabilities {
    pub finiteness_exact: bool,
    pub unranked_witness: bool,
    pub algebraically_finite: bool,
    pub disjoint_amalgamation: bool,
    /// The only copy is U itself.
    pub single_copy: bool,
    /// Every orbit of every finite stabilizer on the complement is infinite.
    pub infinite_orbits: bool,
    /// Copies are built from explicit finite map prefixes. When false the
    /// engine uses closed-form copies instead.
    pub explicit_maps: bool,
}

/// A countable group action presented by decision procedures.
///
/// Only `extendable` and the point codec are mandatory. The remaining
/// methods default to answers that make dependent operations degrade to
/// `Unknown` rather than guess.
pub trait Structure: Send + Sync + fmt::Debug {
    fn id(&self) -> &str;
    fn description(&self) -> &str;
    fn capabilities(&self) -> Capabilities;
    fn format_point(&self, p: Point) -> String;
    fn parse_point(&self, text: &str) -> Result<Point>;

    /// Some group element extends `p`.
    fn extendable(&self, p: &PartialMap) -> bool;

    /// `extendable(p ∪ {x ↦ y})`, assuming `p` itself is extendable.
    fn extend_ok(&self, p: &PartialMap, x: Point, y: Point) -> bool {
        match p.extended(x, y) {
            Some(q) => self.extendable(&q),
            None => false,
        }
    }

    /// ⟨F ▷ x⟩ = ⟨F ▷ y⟩, for x, y outside F.
    fn same_type(&self, f: &FiniteSet, x: Point, y: Point) -> bool {
        x == y || self.extend_ok(&PartialMap::identity(f), x, y)
    }

    /// Candidates y for `extend_ok(p, x, y)`, in increasing index order,
    /// when the structure can list them faster than a scan of U.
    fn image_candidates<'a>(&'a self, _p: &PartialMap, _x: Point) -> Option<Box<dyn Iterator<Item = Point> + 'a>> {
        None
    }

    fn typeset_finite(&self, _f: &FiniteSet, _x: Point) -> FinitenessAnswer {
        FinitenessAnswer::Unknown { window: 0 }
    }

    fn rankedness(&self, _f: &FiniteSet, _x: Point) -> Rankedness {
        Rankedness::Unknown
    }

    /// Structure-specific choice of unranked continuation point, if any.
    fn preferred_unranked_witness(&self, _f: &FiniteSet, _x: Point, _f2: &FiniteSet) -> Option<Point> {
        None
    }

    /// 𝔞𝔠(S) when the structure can compute it exactly and it is finite.
    fn algebraic_closure_exact(&self, _s: &FiniteSet) -> Option<FiniteSet> {
        None
    }
}

pub type Shared = Arc<dyn Structure>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StructureId {
    PureSet,
    ZOrder,
    Dlo,
    Rado,
    EquivInf,
    Zeta2,
    ZetaEta,
    TreeTz,
    Pairs,
}

impl StructureId {
    pub const ALL: [StructureId; 9] = [
        StructureId::PureSet,
        StructureId::ZOrder,
        StructureId::Dlo,
        StructureId::Rado,
        StructureId::EquivInf,
        StructureId::Zeta2,
        StructureId::ZetaEta,
        StructureId::TreeTz,
        StructureId::Pairs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StructureId::PureSet => "pureset",
            StructureId::ZOrder => "zorder",
            StructureId::Dlo => "dlo",
            StructureId::Rado => "rado",
            StructureId::EquivInf => "equiv",
            StructureId::Zeta2 => "zeta2",
            StructureId::ZetaEta => "zetaeta",
            StructureId::TreeTz => "treetz",
            StructureId::Pairs => "pairs",
        }
    }

    pub fn build(self) -> Shared {
        match self {
            StructureId::PureSet => Arc::new(pureset::PureSet),
            StructureId::ZOrder => Arc::new(zorder::ZOrder),
            StructureId::Dlo => Arc::new(dlo::Dlo),
            StructureId::Rado => Arc::new(rado::Rado),
            StructureId::EquivInf => Arc::new(equiv::EquivInf),
            StructureId::Zeta2 => Arc::new(zeta2::Zeta2),
            StructureId::ZetaEta => Arc::new(zetaeta::ZetaEta),
            StructureId::TreeTz => Arc::new(tree::TreeTz),
            StructureId::Pairs => Arc::new(pairs::Pairs),
        }
    }
}

impl fmt::Display for StructureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StructureId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        StructureId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::UnknownStructure(s.to_string()))
    }
}

/// Looks up a built-in structure by its command-line name.
pub fn builtin(name: &str) -> Result<Shared> {
    Ok(name.parse::<StructureId>()?.build())
}

pub(crate) fn parse_err(structure: &str, text: &str, reason: &str) -> Error {
    Error::Parse {
        structure: structure.to_string(),
        text: text.to_string(),
        reason: reason.to_string(),
    }
}

pub(crate) fn parse_int(structure: &str, text: &str) -> Result<i64> {
    text.trim()
        .parse::<i64>()
        .map_err(|e| parse_err(structure, text, &e.to_string()))
}

pub(crate) fn parse_nat(structure: &str, text: &str) -> Result<u64> {
    text.trim()
        .parse::<u64>()
        .map_err(|e| parse_err(structure, text, &e.to_string()))
}

/// Splits a comma-separated list, ignoring commas nested in brackets.
pub fn split_list(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' | '[' | '{' => {
                depth += 1;
                cur.push(ch);
            }
            ')' | ']' | '}' => {
                depth -= 1;
                cur.push(ch);
            }
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur.clear();
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out.retain(|s| !s.is_empty());
    out
}

/// Parses a comma-separated point list (empty text or `{}`-free `-` gives ∅).
pub fn parse_set(s: &dyn Structure, text: &str) -> Result<FiniteSet> {
    let t = text.trim();
    if t.is_empty() || t == "-" {
        return Ok(FiniteSet::new());
    }
    split_list(t).iter().map(|p| s.parse_point(p)).collect()
}

pub fn format_set(s: &dyn Structure, set: &FiniteSet) -> String {
    let parts: Vec<String> = set.iter().map(|p| s.format_point(p)).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn format_map(s: &dyn Structure, m: &PartialMap) -> Vec<(String, String)> {
    m.pairs()
        .iter()
        .map(|&(a, b)| (s.format_point(a), s.format_point(b)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_respects_brackets() {
        assert_eq!(split_list("{0,1},{2,3}"), vec!["{0,1}", "{2,3}"]);
        assert_eq!(split_list("(1,2), 1/2"), vec!["(1,2)", "1/2"]);
        assert_eq!(split_list(""), Vec::<String>::new());
    }

    #[test]
    fn ids_roundtrip() {
        for id in StructureId::ALL {
            assert_eq!(id.name().parse::<StructureId>().unwrap(), id);
            assert_eq!(id.build().id(), id.name());
        }
        assert!(builtin("nope").is_err());
    }
}
