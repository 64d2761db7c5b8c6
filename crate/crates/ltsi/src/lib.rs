//! Labelled transition systems with independence: axiom checking, events,
//! causal equivalence and the causal safety and liveness properties of
//! reversible computation.

pub mod axioms;
pub mod calculus;
pub mod events;
pub mod format;
pub mod model;
pub mod paths;
pub mod properties;
pub mod report;
pub mod structural;
pub mod verdict;

pub use model::{Dir, Ltsi, LtsiBuilder, Path, Tr};
pub use verdict::{Status, Verdict, Witness};
