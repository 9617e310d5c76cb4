//! Exact Cops and Robber solving on periodic temporal graphs.

pub mod constructions;
pub mod corners;
pub mod error;
pub mod graph;
pub mod io;
pub mod periodic;
pub mod search;
pub mod solver;
pub mod table;
pub mod treewidth;

pub use error::{Error, Result};
pub use graph::{Graph, Vertex, VertexSet};
pub use periodic::PeriodicGraph;
