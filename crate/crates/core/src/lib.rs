//! Online embedding of bounded-degree trees as induced subgraphs of sparse
//! expanders, driven by escape-ways, critical sets and randomized
//! reservation.

pub mod critical;
pub mod embed;
pub mod escape;
pub mod exec;
pub mod experiments;
pub mod graph;
pub mod report;
pub mod reservation;
pub mod tree;
pub mod trials;
pub mod verify;

pub use graph::{Graph, GraphError, Vertex};
