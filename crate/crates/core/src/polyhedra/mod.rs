//! Rational polyhedra, their faces, and polyhedral complexes.

mod complex;
mod dd;
mod polyhedron;

pub use complex::{PolyComplex, Star};
pub use polyhedron::{halfspace, AffineForm, Polyhedron};

pub(crate) use complex::{split_by_hyperplanes, supporting_hyperplanes};
