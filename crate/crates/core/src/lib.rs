//! Labeled combinatorial cell complexes and the cellular free resolutions of
//! monomial ideals they support.
//!
//! The crate builds cell complexes (by hand, from Taylor and Scarf
//! constructions, from hull complexes, or from exact polyhedra), forms the
//! chain complex of free modules they support, computes homology over fields
//! and the integers, and decides whether a complex supports a (minimal) free
//! resolution.

pub mod cli;
pub mod complex;
pub mod constructors;
pub mod homology;
pub mod linalg;
pub mod monomials;
pub mod polyhedral;
pub mod random;
pub mod resolution;

pub use complex::{Cell, CellComplex, CellId, CellRecord, ComplexCell, ComplexError, ComplexFile};
pub use linalg::IntegerMatrix;
pub use monomials::{lcm_lattice, Field, Monomial, MonomialError, MonomialIdeal, Ring};
