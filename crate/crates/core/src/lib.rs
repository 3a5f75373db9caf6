//! Exact combinatorics of independent sets in induced shift subgraphs:
//! ordered graphs and k-tuple sets, the recursive extremal constructions with
//! per-instance discrepancy certification, exact and derandomized independence
//! solvers, and rational-arithmetic verification of the associated bounds.

pub mod bounds;
pub mod construct;
pub mod error;
pub mod graph;
pub mod independence;
pub mod io;
pub mod ratio;
pub mod rng;
pub mod tree;
pub mod tuple;

pub use error::{Error, Result};
pub use graph::{shortest_odd_cycle, OrderedGraph};
pub use tuple::{induced_conflicts, is_independent, shift_adjacent, KTuple, KTupleSet};
