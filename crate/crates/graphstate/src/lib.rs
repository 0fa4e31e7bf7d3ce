//! Graph states on k-regular graphs: construction, graph rewriting with
//! verified reductions, three independent simulation engines, and
//! entanglement width via rank width.
//!
//! The three engines cross-validate each other:
//!
//! - [`oracle`] — dense statevector ground truth up to a size limit;
//! - [`complete`] — the O(n²) Hamming-weight recursion for complete graphs;
//! - [`rankdp`] — GF(2)-signature contraction over a rank decomposition,
//!   polynomial in n and exponential only in the decomposition width.
//!
//! [`graph`] holds the bit-packed graph core, [`constructions`] the named
//! families (lattices, double tori, Gale–Ryser realizations), [`transform`]
//! the rewriting calculus with replayable certificates, and [`width`] the
//! exact and heuristic rank-width machinery.

pub mod bits;
pub mod complete;
pub mod constructions;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod random;
pub mod rankdp;
pub mod transform;
pub mod width;

mod eig;

pub use error::{Error, Result};
pub use graph::{Bipartition, Graph};
