//! Set-family toolkit for intersecting families: the lattice operators
//! (shadow, σ, shifting, traces), the named extremal constructions, exact
//! checks of the numeric inequalities around the `2^{n-2}` bound, and
//! exhaustive enumeration of up-sets for small ground sets.

pub mod constructions;
pub mod dense;
mod error;
pub mod exact;
pub mod family;
pub mod format;
pub mod search;
pub mod set;
pub mod verify;

pub use constructions::{
    big_triples, brace_daykin_family, katona_style_family, pattern_set, star, BigTriple, Construction, PatternKind,
    PatternSet,
};
pub use error::{Error, Result};
pub use exact::{binomial, binomial_tail, ExactScalar, QuadInt};
pub use family::{IntersectionProfile, SetFamily};
pub use format::{parse_family, write_family};
pub use set::{dominates_sorted, ElementSet, GroundSize};
