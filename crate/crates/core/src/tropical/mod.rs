//! Weighted complexes, balancing, piecewise linear functions, tropical
//! Weil divisors and push-forwards.

mod divisor;
mod plmap;
mod pushforward;
mod weighted;

pub use divisor::{graph_balancing_check, graph_lift, weil_divisor, weil_divisor_detailed, DivisorReport, GraphBalancing};
pub use plmap::{AffineMap, PLFunction, PLMap};
pub use pushforward::{
    projection_formula_check, pushforward, pushforward_linear, functoriality_check, Functoriality,
    ProjectionFormula,
};
pub use weighted::{BalanceReport, WeightedComplex};
