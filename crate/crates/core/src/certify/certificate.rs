use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertKind {
    CopyCheck,
    Inclusion,
    Disjointness,
    ClosureSandwich,
    Partition,
    Rank,
    MeetIrreducible,
    OrbitAgreement,
    Exchange,
    Refusal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail { counterexample: Value },
    Unknown { obligation: Value },
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail { .. } => "fail",
            Verdict::Unknown { .. } => "unknown",
        }
    }
}

/// One JSON-lines record of evidence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: u32,
    pub kind: CertKind,
    pub structure: String,
    pub parameters: BTreeMap<String, Value>,
    pub verdict: Verdict,
    pub witnesses: Vec<Value>,
}

impl Certificate {
    pub fn new(kind: CertKind, structure: &str) -> Self {
        Certificate {
            schema: SCHEMA,
            kind,
            structure: structure.to_string(),
            parameters: BTreeMap::new(),
            verdict: Verdict::Pass,
            witnesses: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("certificates serialize")
    }

    pub fn from_line(line: &str) -> serde_json::Result<Self> {
        serde_json::from_str(line)
    }
}
