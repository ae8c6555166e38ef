//! Edge-coloring toolkit for loopless multigraphs.
//!
//! The crate covers degree-sequence realization, proper edge colorings and
//! their exact chromatic index, overfull-subgraph detection, the augmentation
//! of a multigraph to a regular supergraph, and a staged decomposition of
//! that regular supergraph into perfect matchings.

pub mod augment;
pub mod decompose;
pub mod degree_seq;
pub mod edge_color;
pub mod error;
pub mod generators;
pub mod matching;
pub mod multigraph;
pub mod overfull;

pub use error::{Error, Result};
/// Exact non-negative fraction used for `η`, `ε` and similar parameters.
pub type Fraction = num_rational::Ratio<usize>;
pub use multigraph::{EdgeRef, Multigraph};
