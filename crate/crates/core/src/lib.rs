pub mod cycle;
pub mod cycles;
pub mod datasets;
pub mod deformation;
mod dsu;
pub mod error;
pub mod fill;
pub mod flow;
pub mod format;
pub mod graph;
pub mod homology;
pub mod iso;
pub mod linalg;
pub mod maps;
pub mod rational;
pub mod snf;
pub mod suite;
