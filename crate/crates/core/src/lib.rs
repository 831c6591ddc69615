//! Cauchon diagrams, restricted permutations, minor families and the
//! restoration algorithm, with a harness cross-checking them.

pub mod error;
pub mod field;
pub mod grid;
pub mod harness;
pub mod minors;
pub mod oracle;
pub mod perm;
pub mod pipedream;
pub mod tnn;

pub use error::{Error, Result};
pub use field::{ExactField, FieldChoice, Fp, Sign};
pub use grid::{CauchonDiagram, GridPos, GridShape};
pub use minors::{MinorFamily, MinorIndex};
pub use perm::Permutation;
