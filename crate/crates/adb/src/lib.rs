//! Annular decomposable Barnette (ADB) graphs.
//!
//! A Barnette graph is a planar, cubic, 3-connected, bipartite graph. This
//! crate works with such graphs given as rotation systems (a counterclockwise
//! cyclic order of the three neighbours at every vertex), decomposes suitable
//! embeddings into concentric annuli, constructs new graphs from the cube by
//! quad insertions, and produces Hamiltonian cycles as certified face
//! selections: a set of "grey" faces whose boundary is the cycle.
//!
//! The modules are layered bottom-up:
//!
//! * [`graph`]: embedded cubic graphs, face traversal, Barnette checks;
//! * [`annular`]: annular decomposition, face partitions, ring/block
//!   classification;
//! * [`construct`]: the cube, alpha/beta insertions, seeded generation of
//!   annular decomposable graphs, reduction back to the cube;
//! * [`hamilton`]: face-selection strategies and cycle extraction;
//! * [`oracle`]: exhaustive backtracking search used to cross-check the
//!   strategies;
//! * [`json`]: the wire formats used by the command line tool.

pub mod annular;
pub mod construct;
pub mod graph;
pub mod hamilton;
pub mod json;
pub mod oracle;
