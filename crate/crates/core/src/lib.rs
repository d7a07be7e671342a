//! Local-search refinement for balanced k-edge partitions of undirected
//! graphs.
//!
//! An edge partition splits the edge set into `k` parts, each holding at
//! most `ceil(alpha * m / k)` edges; vertices are replicated into every
//! part that touches them, and the replication factor (average copies per
//! vertex) is the quality measure. This crate loads graphs and partitions,
//! evaluates them, and improves them in place with two refiners: a greedy
//! per-block adjuster (`lsg`) and a max-flow multi-block adjuster (`lsf`).

pub mod error;
pub mod graph;
pub mod instances;
pub mod lsf;
pub mod lsg;
pub mod maxflow;
pub mod partfile;
pub mod partition;
pub mod report;

pub use error::{Error, Result};
pub use graph::{Graph, NormalizationLog};
pub use partition::{Alpha, Block, BlockStats, MoveDelta, Partition};
pub use report::{EvalReport, RefineReport};
