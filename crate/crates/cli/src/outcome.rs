use std::process::ExitCode;

use copies::certify::Verdict;
use copies::Error;

/// Process exit status, ordered by severity so runs can keep the worst.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Pass,
    Unsupported,
    Unknown,
    Fail,
    Usage,
}

impl Outcome {
    pub fn code(self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Unknown => 2,
            Outcome::Unsupported => 3,
            Outcome::Usage => 64,
        }
    }

    pub fn of(v: &Verdict) -> Self {
        match v {
            Verdict::Pass => Outcome::Pass,
            Verdict::Fail { .. } => Outcome::Fail,
            Verdict::Unknown { .. } => Outcome::Unknown,
        }
    }

    pub fn of_error(e: &Error) -> Self {
        match e {
            Error::Budget { .. } => Outcome::Unknown,
            Error::Unsupported(_) | Error::Impossible(_) => Outcome::Unsupported,
            Error::Contract(_) => Outcome::Fail,
            Error::UnknownStructure(_) | Error::Parse { .. } | Error::Overflow | Error::Precondition(_) => {
                Outcome::Usage
            }
        }
    }

    pub fn exit(self) -> ExitCode {
        ExitCode::from(self.code())
    }
}
