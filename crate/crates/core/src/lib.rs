//! Reconstruction of unrooted binary level-1 phylogenetic networks from
//! quartets.
//!
//! Cyclic orderings of the taxa are encoded as vectors over GF(2) so that
//! every quartet becomes a sparse linear equation. Solving the system yields
//! a network displaying the quartets with the most splits, a small
//! infeasible subset of the input, or a 4-set on which the data are too thin
//! to decide.

pub mod bits;
pub mod commands;
pub mod cyclic;
pub mod fast;
pub mod general;
pub mod gf2;
pub mod network;
pub mod quartet;
pub mod taxa;

pub use bits::BitVec;
pub use cyclic::{CyclicOrdering, NonCyclicWitness, TripleIndex, TripleVector};
pub use gf2::{AffineSpace, Outcome, SparseEquation};
pub use network::{Level1Network, SplitFamily};
pub use quartet::{Quartet, QuartetSet};
pub use taxa::{Taxon, TaxonSet};
