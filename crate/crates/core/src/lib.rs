//! Projective systems over finite fields and the additive codes they describe.
//!
//! A projective `h-(n, r, s)_q` system is a multiset of `n` subspaces of
//! dimension at most `h` in `GF(q)^r` such that every hyperplane contains
//! at most `s` of them. These correspond to additive codes over `GF(q^h)`
//! with parameters `[n, r/h, n - s]`.

pub mod bounds;
pub mod constructions;
pub mod dataio;
pub mod error;
pub mod field;
pub mod geometry;
pub mod groups;
pub mod projsys;
pub mod search;

pub use error::{Error, Result};
pub use field::{Elem, FieldCtx, Subfield};
pub use geometry::{Matrix, ProjSpace, Subspace};
pub use projsys::{ProjSystem, SystemReport};

