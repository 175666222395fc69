use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown structure `{0}`")]
    UnknownStructure(String),
    #[error("cannot parse `{text}` as a {structure} point: {reason}")]
    Parse {
        structure: String,
        text: String,
        reason: String,
    },
    #[error("point is outside the representable enumeration range")]
    Overflow,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("budget exhausted after scanning {scanned} candidates: {obligation}")]
    Budget { obligation: String, scanned: u64 },
    #[error("unsupported construction: {0}")]
    Unsupported(String),
    #[error("impossible construction: {0}")]
    Impossible(String),
    #[error("contract violated: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;
