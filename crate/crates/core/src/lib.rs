pub mod error;
pub mod graph;
pub mod io;
pub mod lagerberg;
pub mod linalg;
pub mod polyhedra;
pub mod tropical;
