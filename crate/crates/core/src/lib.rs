//! Operational machinery for the sensible λ-theory Hω: weak βΩ-reduction,
//! Böhm-tree approximants, ordinal notations, finite proof fragments, and the
//! tree-to-term construction of the pair B₀, B₁.

pub mod barendregt;
pub mod bohm;
pub mod ordinals;
pub mod proofs;
pub mod reduction;
pub mod term;

pub use term::{alpha_eq, parse, Path, Term};
