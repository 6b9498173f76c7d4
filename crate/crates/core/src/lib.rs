//! Subspace clustering by low-rank representation with graph and hypergraph
//! locality regularizers.

pub mod cli;
pub mod clustering;
pub mod datasets;
pub mod error;
pub mod hypergraph;
pub mod linalg;
pub mod metrics;
pub mod solver;

pub use error::{Error, Result};
