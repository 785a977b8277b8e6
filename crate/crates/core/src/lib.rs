//! Exact qq-characters, free-field bosonizations and W-algebra relation
//! checks over `Q(s1, s2)`.

pub mod ring;
pub mod cartan;
pub mod ycalc;
pub mod qqchar;
pub mod contraction;
pub mod wcurrents;
pub mod relations;
