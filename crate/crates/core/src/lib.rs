//! Copies of countable permutation group actions.
//!
//! A copy is an image f[U] of a map f in the closure of the group inside
//! U^U. The crate decides orbit questions through per-structure oracles,
//! computes the closure operators over finite sets, builds copies by
//! staged back-and-forth and checks them against the finite-set
//! characterization inside bounded windows.

pub mod certify;
pub mod closures;
pub mod copy_engine;
pub mod error;
pub mod oracle;
pub mod point;
pub mod structures;
pub mod suite;
pub mod typesets;

pub use error::{Error, Result};
pub use point::{FiniteSet, PartialMap, Point};
pub use structures::{builtin, Shared, Structure, StructureId};
