pub mod audit;
pub mod certificates;
pub mod discharge;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod generators;
pub mod geometry;
pub mod graph;
pub mod interval;
pub mod scalar;
