pub mod complete;
pub mod eval;
pub mod experiment;
pub mod gen;
pub mod graph;
pub mod sample;
