//! Shared fixtures for the benchmarks.

use partfn_core::graph::{enumerate_regular, EnumerationConfig};
use partfn_core::Graph;

/// Every cubic graph on `n` vertices.
pub fn cubic(n: usize) -> Vec<Graph> {
    enumerate_regular(&EnumerationConfig::new(3, n, 3)).expect("cubic class")
}
