//! Executable constructions for first-order interpretations between
//! arithmetic and free, trace and Baumslag-Solitar monoids.

pub mod check;
pub mod cli;
pub mod coding;
pub mod error;
pub mod formula;
pub mod gadgets;
pub mod interp;
pub mod monoid;
pub mod word;

pub use error::{Error, Result};
pub use formula::{parse, Formula, HierarchyLevel, Signature, Term};
pub use monoid::{MonoidKind, MonoidModel};
pub use word::{Alphabet, Word};
