//! Decides membership in the first Bieri-Neumann-Strebel invariant of graph
//! groups (right-angled Artin groups) and finite generation of kernels of
//! maps onto free abelian groups, with a Cayley-graph oracle that checks the
//! combinatorial criteria by brute force.

pub mod cayley;
pub mod characters;
pub mod complex;
pub mod graph;
pub mod lattice;
pub mod sigma;
pub mod words;

pub use cayley::{CayleyBall, CayleyError, ConnectivityVerdict, PositiveSlice, VerdictTag};
pub use characters::{Character, CharacterError, Composite, IntegerCharacterMatrix, OpenSimplex, Rational, Ray};
pub use complex::{CellCounts, ComplexError, LinkComplex};
pub use graph::{GraphError, SimplicialGraph, VertexSet};
pub use sigma::{SigmaError, StabilityClass, StabilityTag};
pub use words::{CliqueGenerator, CliqueWord, Letter, Rewrite, RewritingSystem, Word, WordError};
