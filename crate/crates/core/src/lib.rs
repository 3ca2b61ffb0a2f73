//! Self-similar group actions given by wreath recursions: exact group
//! arithmetic, restrictions, nucleus closure and Levy-type obstructions,
//! truncations of the self-similarity complex, torus endomorphisms, and
//! combinatorial finite subdivision rules.

pub mod biset;
pub mod cli;
pub mod complex;
pub mod contraction;
pub mod fixtures;
pub mod group;
pub mod subdivision;
pub mod torus;

pub use biset::{Alphabet, BisetMachine, Word};
pub use complex::ComplexGraph;
pub use contraction::{Budget, ContractionReport, ContractionStatus, LevyWitness};
pub use group::{GroupElement, GroupModel};
pub use subdivision::{CellComplex2, SubdivisionRule};
