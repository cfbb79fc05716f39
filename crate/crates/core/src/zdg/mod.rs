//! Zero-divisor graphs, twin partitions and compressed graphs.

pub mod compressed;
pub mod dyadic;
pub mod export;
pub mod graph;
pub mod twins;

pub use compressed::{compress, CompressedGraph};
pub use dyadic::{
    degree_table_check, expected_degree_table, neighbor_formula_check, orbit_partition_of_graph,
    DyadicClassGraph, DyadicLabel,
};
pub use graph::{build_graph, GraphLimits, ZdGraph};
pub use twins::{structural_twin_partition, twin_partition, TwinClass, TwinPartition};
