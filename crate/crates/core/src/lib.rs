//! Posets of integer compositions built from a partial action of an
//! operator alphabet (`L`, `R`, `U_j`, `V_i^r`), together with exact
//! generating functions for saturated chains of fixed width, their
//! labeled (non-commutative) refinements, and the associated automata.
//!
//! Every closed form produced here can be checked against brute-force
//! chain enumeration from [`poset`].

pub mod composition;
pub mod error;
pub mod genfun;
pub mod ncgen;
pub mod operators;
pub mod polyfrac;
pub mod poset;
pub mod qsym;

pub use composition::{Composition, DescentSet, Diagram, Partition};
pub use error::{Error, Result};
pub use operators::{Alphabet, Letter, Word};
