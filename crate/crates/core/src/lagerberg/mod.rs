mod field;
mod form;
mod identities;
mod integrate;
mod poly;

pub use field::FormField;
pub use form::LagerbergForm;
pub use identities::{green_check, poincare_lelong_check, stokes_check, CurrentPairingReport};
pub use integrate::{
    boundary_contributions, boundary_integrate, facet_integral, integrate, integrate_over_cell, integrate_over_simplex,
    triangulate,
};
pub use poly::Polynomial;
